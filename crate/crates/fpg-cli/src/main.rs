//! Command-line front end: every verification as a reproducible command
//! with text and JSON output.
//!
//! Exit codes: 0 verified/success, 1 check failed, 2 inconclusive or
//! resource limit, 3 input error. JSON reports carry a stable `result`
//! payload; only `timing_ms` varies between identical runs.

use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use fpg::analysis::{
    abelianization, double_cosets, engulfing_report, lemma1_check, lemma2_orbit_check,
    lemma4_check, profinite_closure_bounded, EngulfingVerdict,
};
use fpg::coset_enum::{enumerate_cosets, CosetTable, Enumeration, EnumerationLimits};
use fpg::covers::{from_coset_table, lemma3_full_check};
use fpg::low_index::{low_index_subgroups_with, SearchConstraint, SearchOptions, SubgroupList};
use fpg::normal_form::{
    britton_reduce, builtin_iso_b_to_g, builtin_iso_g_to_b, freeness_probe, identify_builtin,
    normal_form_b, soundness_trials, verify_homomorphism, verify_mutually_inverse, BuiltinGroup,
};
use fpg::words::{builtin_b, builtin_g, parse_word, Presentation, SubgroupSpec, Word};

const EXIT_OK: i32 = 0;
const EXIT_CHECK_FAILED: i32 = 1;
const EXIT_INCONCLUSIVE: i32 = 2;
const EXIT_INPUT: i32 = 3;

#[derive(Parser)]
#[command(
    name = "fpg",
    version,
    about = "Finitely presented groups: coset enumeration, low-index subgroup search, and engulfing checks"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for subgroup searches.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GroupName {
    #[value(name = "G", alias = "g")]
    G,
    #[value(name = "B", alias = "b")]
    B,
}

/// Presentation source: a file path, or a built-in group by name.
#[derive(Args)]
struct PresSource {
    /// Presentation file (omit when using --group).
    #[arg(long, value_name = "PATH")]
    file: Option<String>,
    /// Built-in presentation.
    #[arg(long, value_enum)]
    group: Option<GroupName>,
}

impl PresSource {
    fn load(&self, positional: Option<&str>) -> Result<(Arc<Presentation>, Value), CliError> {
        let from_file = |path: &str| -> Result<(Arc<Presentation>, Value), CliError> {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::input(format!("cannot read `{path}`: {e}")))?;
            let pres = Presentation::parse(&text).map_err(CliError::from_input)?;
            Ok((pres, json!({ "file": path })))
        };
        match (self.group, &self.file, positional) {
            (Some(name), None, None) => {
                let (pres, label) = match name {
                    GroupName::G => (builtin_g(), "G"),
                    GroupName::B => (builtin_b(), "B"),
                };
                Ok((pres, json!({ "group": label })))
            }
            (None, Some(path), None) => from_file(path),
            (None, None, Some(path)) => from_file(path),
            (None, None, None) => Err(CliError::input(
                "a presentation is required: pass a file or --group G|B".into(),
            )),
            _ => Err(CliError::input(
                "pass exactly one presentation source".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normal form and triviality of a word in a built-in group.
    Reduce {
        #[arg(long, value_enum)]
        group: GroupName,
        /// Word in the whitespace-separated syllable grammar.
        word: String,
    },
    /// Todd-Coxeter coset enumeration of a finitely generated subgroup.
    Tc {
        /// Presentation file, then semicolon-separated subgroup words;
        /// with --group only the words are positional.
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
        #[command(flatten)]
        source: PresSource,
        #[arg(long, default_value_t = 100_000)]
        max_cosets: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_steps: usize,
    },
    /// All subgroups of index at most the bound.
    LowIndex {
        /// Presentation file (or use --group).
        #[arg(value_name = "PRES")]
        pres: Option<String>,
        #[command(flatten)]
        source: PresSource,
        #[arg(long)]
        max_index: usize,
        /// Semicolon-separated words the subgroups must contain.
        #[arg(long)]
        contain: Option<String>,
    },
    /// Engulfing check: is the subgroup inside a proper finite-index
    /// subgroup of index at most the bound? Exit 0 = not engulfed,
    /// 1 = engulfed, 2 = inconclusive.
    Engulf {
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
        #[command(flatten)]
        source: PresSource,
        #[arg(long)]
        max_index: usize,
    },
    /// Bounded profinite closure: intersect all subgroups of index at
    /// most the bound containing the target.
    Closure {
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
        #[command(flatten)]
        source: PresSource,
        #[arg(long)]
        max_index: usize,
    },
    /// Double-coset decomposition of a finite-index subgroup, with the
    /// finiteness and orbit-count cross-checks.
    DoubleCosets {
        #[arg(value_name = "ARGS", num_args = 1..=2)]
        args: Vec<String>,
        #[command(flatten)]
        source: PresSource,
        #[arg(long, default_value_t = 100_000)]
        max_cosets: usize,
        #[arg(long, default_value_t = 10_000_000)]
        max_steps: usize,
    },
    /// Covering-space verification for every subgroup of G of index at
    /// most the bound containing abb and t.
    Lemma3 {
        #[arg(long)]
        max_index: usize,
    },
    /// Engulfing check for K_g = ⟨abb, t, a^g⟩ in G, with the proof
    /// mechanism verified on every container found.
    Lemma4 {
        /// The conjugator g.
        conjugator: String,
        #[arg(long)]
        max_index: usize,
    },
    /// Full check that K = ⟨abb, t, btat⁻¹b⁻¹⟩ is contained in no proper
    /// subgroup of G of index at most the bound, plus the freeness probe.
    Theorem2 {
        #[arg(long)]
        max_index: usize,
        /// Maximum abstract relation length for the freeness probe.
        #[arg(long, default_value_t = 6)]
        free_length: usize,
    },
    /// Verify the derived isomorphisms between G and B in both
    /// directions, and that the abelianizations agree.
    IsoCheck,
    /// Randomized word-problem soundness trials.
    Soundness {
        #[arg(long, value_enum)]
        group: GroupName,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn input(message: String) -> CliError {
        CliError {
            code: EXIT_INPUT,
            message,
        }
    }

    fn from_input(e: fpg::Error) -> CliError {
        CliError::input(e.to_string())
    }
}

impl From<fpg::Error> for CliError {
    fn from(e: fpg::Error) -> CliError {
        let code = match e {
            fpg::Error::IncompleteSearch => EXIT_INCONCLUSIVE,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

struct Outcome {
    inputs: Value,
    result: Value,
    completeness: bool,
    exit: i32,
    text: String,
}

#[derive(Serialize)]
struct RunReport<'a> {
    schema: u32,
    command: &'a str,
    inputs: &'a Value,
    timing_ms: u128,
    completeness: bool,
    result: &'a Value,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print normally; bad usage is an input error.
            if e.use_stderr() {
                e.print().ok();
                std::process::exit(EXIT_INPUT);
            }
            e.print().ok();
            std::process::exit(EXIT_OK);
        }
    };
    let started = Instant::now();
    let command_name = command_name(&cli.command);
    match run(&cli) {
        Ok(outcome) => {
            match cli.format {
                Format::Json => {
                    let report = RunReport {
                        schema: 1,
                        command: command_name,
                        inputs: &outcome.inputs,
                        timing_ms: started.elapsed().as_millis(),
                        completeness: outcome.completeness,
                        result: &outcome.result,
                    };
                    println!("{}", serde_json::to_string_pretty(&report).unwrap());
                }
                Format::Text => println!("{}", outcome.text.trim_end()),
            }
            std::process::exit(outcome.exit);
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            std::process::exit(e.code);
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Reduce { .. } => "reduce",
        Command::Tc { .. } => "tc",
        Command::LowIndex { .. } => "low-index",
        Command::Engulf { .. } => "engulf",
        Command::Closure { .. } => "closure",
        Command::DoubleCosets { .. } => "double-cosets",
        Command::Lemma3 { .. } => "lemma3",
        Command::Lemma4 { .. } => "lemma4",
        Command::Theorem2 { .. } => "theorem2",
        Command::IsoCheck => "iso-check",
        Command::Soundness { .. } => "soundness",
    }
}

fn search_options(threads: usize) -> SearchOptions {
    let mut options = SearchOptions {
        threads,
        ..Default::default()
    };
    if let Ok(value) = std::env::var("ENGULF_MAX_NODES") {
        if let Ok(nodes) = value.parse::<u64>() {
            options.max_nodes = nodes;
        }
    }
    options
}

/// Splits `[file?, words]` positionals against the flag-based source.
fn split_pres_and_words<'a>(
    args: &'a [String],
    source: &PresSource,
) -> Result<(Arc<Presentation>, Value, &'a str), CliError> {
    match args.len() {
        2 => {
            let (pres, echo) = source.load(Some(&args[0]))?;
            Ok((pres, echo, &args[1]))
        }
        1 => {
            let (pres, echo) = source.load(None)?;
            Ok((pres, echo, &args[0]))
        }
        _ => Err(CliError::input("expected [PRES] WORDS".into())),
    }
}

fn parse_subgroup(pres: &Arc<Presentation>, words: &str) -> Result<SubgroupSpec, CliError> {
    SubgroupSpec::parse(words, pres).map_err(CliError::from_input)
}

fn table_summary(table: &CosetTable) -> Value {
    serde_json::to_value(table).unwrap()
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Reduce { group, word } => reduce(*group, word),
        Command::Tc {
            args,
            source,
            max_cosets,
            max_steps,
        } => {
            let (pres, echo, words) = split_pres_and_words(args, source)?;
            tc(
                &pres,
                echo,
                words,
                EnumerationLimits {
                    max_cosets: *max_cosets,
                    max_steps: *max_steps,
                },
            )
        }
        Command::LowIndex {
            pres,
            source,
            max_index,
            contain,
        } => {
            let (pres, echo) = source.load(pres.as_deref())?;
            low_index(&pres, echo, *max_index, contain.as_deref(), cli.threads)
        }
        Command::Engulf {
            args,
            source,
            max_index,
        } => {
            let (pres, echo, words) = split_pres_and_words(args, source)?;
            engulf(&pres, echo, words, *max_index, cli.threads)
        }
        Command::Closure {
            args,
            source,
            max_index,
        } => {
            let (pres, echo, words) = split_pres_and_words(args, source)?;
            closure(&pres, echo, words, *max_index, cli.threads)
        }
        Command::DoubleCosets {
            args,
            source,
            max_cosets,
            max_steps,
        } => {
            let (pres, echo, words) = split_pres_and_words(args, source)?;
            double_cosets_cmd(
                &pres,
                echo,
                words,
                EnumerationLimits {
                    max_cosets: *max_cosets,
                    max_steps: *max_steps,
                },
            )
        }
        Command::Lemma3 { max_index } => lemma3(*max_index, cli.threads),
        Command::Lemma4 {
            conjugator,
            max_index,
        } => lemma4(conjugator, *max_index, cli.threads),
        Command::Theorem2 {
            max_index,
            free_length,
        } => theorem2(*max_index, *free_length, cli.threads),
        Command::IsoCheck => iso_check(),
        Command::Soundness {
            group,
            trials,
            seed,
        } => soundness(*group, *trials, *seed),
    }
}

fn reduce(group: GroupName, word_text: &str) -> Result<Outcome, CliError> {
    let (pres, label) = match group {
        GroupName::G => (builtin_g(), "G"),
        GroupName::B => (builtin_b(), "B"),
    };
    let word = parse_word(word_text, pres.alphabet()).map_err(CliError::from_input)?;
    let (trivial, normal_form, detail) = match identify_builtin(&pres).unwrap() {
        BuiltinGroup::G => {
            let form = britton_reduce(&word).map_err(CliError::from_input)?;
            (
                form.is_trivial(),
                form.to_word(pres.alphabet()).to_string(),
                serde_json::to_value(&form).unwrap(),
            )
        }
        BuiltinGroup::B => {
            let form = normal_form_b(&word).map_err(CliError::from_input)?;
            (
                form.is_trivial(),
                form.to_word().to_string(),
                serde_json::to_value(&form).unwrap(),
            )
        }
    };
    let verdict = if trivial { "trivial" } else { "nontrivial" };
    let text = if trivial {
        verdict.to_string()
    } else {
        format!("{verdict}\nnormal form: {normal_form}")
    };
    Ok(Outcome {
        inputs: json!({ "group": label, "word": word_text }),
        result: json!({
            "word": word.to_string(),
            "trivial": trivial,
            "normal_form": normal_form,
            "form": detail,
        }),
        completeness: true,
        exit: EXIT_OK,
        text,
    })
}

fn tc(
    pres: &Arc<Presentation>,
    source_echo: Value,
    words: &str,
    limits: EnumerationLimits,
) -> Result<Outcome, CliError> {
    let sub = parse_subgroup(pres, words)?;
    let inputs = json!({
        "presentation": source_echo,
        "subgroup": sub,
        "max_cosets": limits.max_cosets,
        "max_steps": limits.max_steps,
    });
    match enumerate_cosets(pres, &sub, limits).map_err(CliError::from)? {
        Enumeration::Complete(table) => Ok(Outcome {
            result: json!({
                "outcome": "complete",
                "index": table.degree(),
                "table": table_summary(&table),
            }),
            text: format!("index {}", table.degree()),
            inputs,
            completeness: true,
            exit: EXIT_OK,
        }),
        Enumeration::Overflow(info) => Ok(Outcome {
            result: json!({
                "outcome": "overflow",
                "info": serde_json::to_value(&info).unwrap(),
            }),
            text: format!(
                "unknown: limits exhausted after {} cosets, {} steps (the index may be finite but large, or infinite)",
                info.cosets_defined, info.steps
            ),
            inputs,
            completeness: false,
            exit: EXIT_INCONCLUSIVE,
        }),
    }
}

fn subgroup_list_summary(list: &SubgroupList) -> Value {
    serde_json::to_value(list).unwrap()
}

fn low_index(
    pres: &Arc<Presentation>,
    source_echo: Value,
    max_index: usize,
    contain: Option<&str>,
    threads: usize,
) -> Result<Outcome, CliError> {
    let must_contain: Vec<Word> = match contain {
        Some(text) => parse_subgroup(pres, text)?.generators().to_vec(),
        None => Vec::new(),
    };
    let constraint = SearchConstraint {
        must_contain: must_contain.clone(),
        max_index,
    };
    let list = low_index_subgroups_with(pres, &constraint, &search_options(threads))
        .map_err(CliError::from)?;
    let degrees: Vec<usize> = list.tables.iter().map(|t| t.degree()).collect();
    let text = format!(
        "{} subgroups of index <= {}{}, degrees {:?}{}",
        list.tables.len(),
        max_index,
        if must_contain.is_empty() {
            String::new()
        } else {
            format!(
                " containing {{{}}}",
                must_contain
                    .iter()
                    .map(|w| w.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            )
        },
        degrees,
        if list.complete { "" } else { " (INCOMPLETE)" },
    );
    Ok(Outcome {
        inputs: json!({
            "presentation": source_echo,
            "max_index": max_index,
            "must_contain": must_contain,
        }),
        result: subgroup_list_summary(&list),
        completeness: list.complete,
        exit: if list.complete {
            EXIT_OK
        } else {
            EXIT_INCONCLUSIVE
        },
        text,
    })
}

fn engulf(
    pres: &Arc<Presentation>,
    source_echo: Value,
    words: &str,
    max_index: usize,
    threads: usize,
) -> Result<Outcome, CliError> {
    let sub = parse_subgroup(pres, words)?;
    let report = engulfing_report(pres, &sub, max_index, &search_options(threads))
        .map_err(CliError::from)?;
    let (exit, mut text) = match report.verdict {
        EngulfingVerdict::NotEngulfedUpToBound => (
            EXIT_OK,
            format!(
                "NOT_ENGULFED_UP_TO_BOUND: no proper subgroup of index <= {max_index} contains the target"
            ),
        ),
        EngulfingVerdict::Engulfed => (
            EXIT_CHECK_FAILED,
            format!(
                "ENGULFED: witness of index {}",
                report.witness.as_ref().unwrap().degree()
            ),
        ),
        EngulfingVerdict::Inconclusive => {
            (EXIT_INCONCLUSIVE, "INCONCLUSIVE: search incomplete".into())
        }
    };
    if report.target_is_whole_group == Some(true) {
        text.push_str("\nnote: the target generates the whole group");
    }
    Ok(Outcome {
        inputs: json!({
            "presentation": source_echo,
            "subgroup": sub,
            "max_index": max_index,
        }),
        result: serde_json::to_value(&report).unwrap(),
        completeness: report.search_complete,
        exit,
        text,
    })
}

fn closure(
    pres: &Arc<Presentation>,
    source_echo: Value,
    words: &str,
    max_index: usize,
    threads: usize,
) -> Result<Outcome, CliError> {
    let sub = parse_subgroup(pres, words)?;
    let result = profinite_closure_bounded(pres, &sub, max_index, &search_options(threads))
        .map_err(CliError::from)?;
    let text = format!(
        "closure at bound {} has index {} ({} contributing subgroups)",
        max_index,
        result.closure_table.degree(),
        result.contributing.len()
    );
    Ok(Outcome {
        inputs: json!({
            "presentation": source_echo,
            "subgroup": sub,
            "max_index": max_index,
        }),
        result: serde_json::to_value(&result).unwrap(),
        completeness: true,
        exit: EXIT_OK,
        text,
    })
}

fn double_cosets_cmd(
    pres: &Arc<Presentation>,
    source_echo: Value,
    words: &str,
    limits: EnumerationLimits,
) -> Result<Outcome, CliError> {
    let sub = parse_subgroup(pres, words)?;
    let inputs = json!({
        "presentation": source_echo,
        "subgroup": sub,
        "max_cosets": limits.max_cosets,
        "max_steps": limits.max_steps,
    });
    let table = match enumerate_cosets(pres, &sub, limits).map_err(CliError::from)? {
        Enumeration::Complete(table) => table,
        Enumeration::Overflow(info) => {
            return Ok(Outcome {
                result: json!({
                    "outcome": "overflow",
                    "info": serde_json::to_value(&info).unwrap(),
                }),
                text: "unknown: coset enumeration exhausted its limits".into(),
                inputs,
                completeness: false,
                exit: EXIT_INCONCLUSIVE,
            })
        }
    };
    let decomposition = double_cosets(&table).map_err(CliError::from)?;
    let finite_union = lemma1_check(&table).map_err(CliError::from)?;
    let counts_match = lemma2_orbit_check(&table).map_err(CliError::from)?;
    let ok = finite_union && counts_match;
    let text = format!(
        "index {}: {} double cosets, orbit sizes {:?}, representatives [{}]\nG = HFH re-check: {}; independent orbit counts match: {}",
        table.degree(),
        decomposition.representatives.len(),
        decomposition.orbit_sizes,
        decomposition
            .representatives
            .iter()
            .map(|w| if w.is_identity() { "1".into() } else { w.to_string() })
            .collect::<Vec<_>>()
            .join(", "),
        if finite_union { "pass" } else { "FAIL" },
        if counts_match { "pass" } else { "FAIL" },
    );
    Ok(Outcome {
        result: json!({
            "outcome": "complete",
            "index": table.degree(),
            "decomposition": serde_json::to_value(&decomposition).unwrap(),
            "finite_double_coset_union": finite_union,
            "orbit_counts_match": counts_match,
        }),
        text,
        inputs,
        completeness: true,
        exit: if ok { EXIT_OK } else { EXIT_CHECK_FAILED },
    })
}

fn lemma3(max_index: usize, threads: usize) -> Result<Outcome, CliError> {
    let g = builtin_g();
    let j = vec![
        parse_word("a b b", g.alphabet()).unwrap(),
        parse_word("t", g.alphabet()).unwrap(),
    ];
    let list = low_index_subgroups_with(
        &g,
        &SearchConstraint::containing(j.clone(), max_index),
        &search_options(threads),
    )
    .map_err(CliError::from)?;
    let mut reports = Vec::new();
    let mut all_pass = true;
    let mut lines = Vec::new();
    for table in &list.tables {
        let model = from_coset_table(table).map_err(CliError::from)?;
        let report = lemma3_full_check(&model, table).map_err(CliError::from)?;
        let pass = report.hypothesis_holds && report.all_checks_pass();
        all_pass &= pass;
        lines.push(format!(
            "index {}: {}",
            table.degree(),
            if pass { "pass" } else { "FAIL" }
        ));
        reports.push(report);
    }
    let proper_exists = list.tables.iter().any(|t| t.degree() > 1);
    let text = format!(
        "{} subgroups of index <= {} contain {{a b^2, t}}\n{}\nall pass: {}; proper subgroup present: {}",
        list.tables.len(),
        max_index,
        lines.join("\n"),
        all_pass,
        proper_exists,
    );
    let exit = if !list.complete {
        EXIT_INCONCLUSIVE
    } else if all_pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Outcome {
        inputs: json!({ "group": "G", "max_index": max_index }),
        result: json!({
            "bound": max_index,
            "census_size": list.tables.len(),
            "proper_subgroup_present": proper_exists,
            "all_pass": all_pass,
            "complete": list.complete,
            "reports": reports,
        }),
        completeness: list.complete,
        exit,
        text,
    })
}

fn lemma4(conjugator: &str, max_index: usize, threads: usize) -> Result<Outcome, CliError> {
    let g = builtin_g();
    let word = parse_word(conjugator, g.alphabet()).map_err(CliError::from_input)?;
    let outcome =
        lemma4_check(&g, &word, max_index, &search_options(threads)).map_err(CliError::from)?;
    let verdict = match outcome.report.verdict {
        EngulfingVerdict::NotEngulfedUpToBound => "NOT_ENGULFED_UP_TO_BOUND",
        EngulfingVerdict::Engulfed => "ENGULFED",
        EngulfingVerdict::Inconclusive => "INCONCLUSIVE",
    };
    let mut text = format!(
        "K_g = <a b^2, t, {}> for g = {}\nverdict: {verdict}; containment mechanism verified on {} container(s): {}",
        outcome.conjugate_generator,
        if word.is_identity() { "1".into() } else { word.to_string() },
        outcome.containers.len(),
        outcome.mechanism_verified,
    );
    if outcome.degenerate_whole_group {
        text.push_str("\nnote: degenerate choice, K_g is the whole group");
    }
    let exit = match outcome.report.verdict {
        EngulfingVerdict::NotEngulfedUpToBound if outcome.mechanism_verified => EXIT_OK,
        EngulfingVerdict::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_CHECK_FAILED,
    };
    Ok(Outcome {
        inputs: json!({
            "group": "G",
            "conjugator": conjugator,
            "max_index": max_index,
        }),
        completeness: outcome.report.search_complete,
        result: serde_json::to_value(&outcome).unwrap(),
        exit,
        text,
    })
}

fn theorem2(max_index: usize, free_length: usize, threads: usize) -> Result<Outcome, CliError> {
    let g = builtin_g();
    let k = SubgroupSpec::new(
        &g,
        vec![
            parse_word("a b b", g.alphabet()).unwrap(),
            parse_word("t", g.alphabet()).unwrap(),
            parse_word("b t a t^-1 b^-1", g.alphabet()).unwrap(),
        ],
    )
    .unwrap();
    let report =
        engulfing_report(&g, &k, max_index, &search_options(threads)).map_err(CliError::from)?;
    let freeness = freeness_probe(&k, free_length).map_err(CliError::from)?;

    // G is not free: a and b are nontrivial, commute, and generate a
    // rank-2 free abelian subgroup; K is free on its three generators up
    // to the probed length, so K is a proper subgroup.
    let a = parse_word("a", g.alphabet()).unwrap();
    let b = parse_word("b", g.alphabet()).unwrap();
    let commutator = parse_word("a^-1 b^-1 a b", g.alphabet()).unwrap();
    let mut ambient_abelian_witness = fpg::normal_form::is_trivial_g(&commutator).unwrap()
        && !fpg::normal_form::is_trivial_g(&a).unwrap()
        && !fpg::normal_form::is_trivial_g(&b).unwrap();
    for m in -3i64..=3 {
        for n in -3i64..=3 {
            if (m, n) != (0, 0) {
                let power = a.pow(m).concat(&b.pow(n)).unwrap();
                ambient_abelian_witness &= !fpg::normal_form::is_trivial_g(&power).unwrap();
            }
        }
    }

    let not_engulfed = report.verdict == EngulfingVerdict::NotEngulfedUpToBound;
    let free_ok = freeness.violations.is_empty();
    let pass = not_engulfed && free_ok && ambient_abelian_witness;
    let text = format!(
        "engulfing at bound {max_index}: {}\nfreeness probe to length {free_length}: {} words evaluated, {} violations\nambient group not free (commuting pair certificate): {}\noverall: {}",
        if not_engulfed { "only the whole group contains K" } else { "FAILED" },
        freeness.total_evaluated(),
        freeness.violations.len(),
        ambient_abelian_witness,
        if pass { "pass" } else { "FAIL" },
    );
    let exit = if report.verdict == EngulfingVerdict::Inconclusive {
        EXIT_INCONCLUSIVE
    } else if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Outcome {
        inputs: json!({
            "group": "G",
            "max_index": max_index,
            "free_length": free_length,
        }),
        completeness: report.search_complete,
        result: json!({
            "engulfing": serde_json::to_value(&report).unwrap(),
            "freeness": serde_json::to_value(&freeness).unwrap(),
            "ambient_abelian_witness": ambient_abelian_witness,
            "pass": pass,
        }),
        exit,
        text,
    })
}

fn iso_check() -> Result<Outcome, CliError> {
    let forward = builtin_iso_g_to_b();
    let backward = builtin_iso_b_to_g();
    let hom_forward = verify_homomorphism(&forward).map_err(CliError::from)?;
    let hom_backward = verify_homomorphism(&backward).map_err(CliError::from)?;
    let mutually_inverse = verify_mutually_inverse(&forward, &backward).map_err(CliError::from)?;
    let ab_g = abelianization(&builtin_g());
    let ab_b = abelianization(&builtin_b());
    let abelianizations_match = ab_g == ab_b;
    let pass = hom_forward && hom_backward && mutually_inverse && abelianizations_match;
    let text = format!(
        "G -> B is a homomorphism: {hom_forward}\nB -> G is a homomorphism: {hom_backward}\nmutually inverse: {mutually_inverse}\nabelianizations: {ab_g} and {ab_b} ({})",
        if abelianizations_match { "match" } else { "MISMATCH" },
    );
    Ok(Outcome {
        inputs: json!({}),
        result: json!({
            "g_to_b": forward.images().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "b_to_g": backward.images().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "homomorphism_g_to_b": hom_forward,
            "homomorphism_b_to_g": hom_backward,
            "mutually_inverse": mutually_inverse,
            "abelianization_g": serde_json::to_value(&ab_g).unwrap(),
            "abelianization_b": serde_json::to_value(&ab_b).unwrap(),
            "abelianizations_match": abelianizations_match,
        }),
        completeness: true,
        exit: if pass { EXIT_OK } else { EXIT_CHECK_FAILED },
        text,
    })
}

fn soundness(group: GroupName, trials: u64, seed: u64) -> Result<Outcome, CliError> {
    let pres = match group {
        GroupName::G => builtin_g(),
        GroupName::B => builtin_b(),
    };
    let report = soundness_trials(&pres, trials, seed).map_err(CliError::from)?;
    let text = format!(
        "{} trials in {} (seed {}): {} insertion failures, {} inverse-law failures",
        report.trials,
        report.group,
        report.seed,
        report.insertion_failures,
        report.inverse_failures,
    );
    let exit = if report.passed() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    };
    Ok(Outcome {
        inputs: json!({
            "group": report.group,
            "trials": trials,
            "seed": seed,
        }),
        result: serde_json::to_value(&report).unwrap(),
        completeness: true,
        exit,
        text,
    })
}
