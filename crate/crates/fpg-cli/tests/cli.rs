//! Exit-code contract and output-shape tests for the fpg binary.

use std::process::{Command, Output};

fn fpg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn reduce_relator_is_trivial() {
    let out = fpg(&["reduce", "--group", "G", "t^-1 a t b^-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trivial"));
}

#[test]
fn reduce_empty_word_is_trivial() {
    let out = fpg(&["reduce", "--group", "G", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "trivial");
}

#[test]
fn reduce_prints_britton_form() {
    let out = fpg(&["reduce", "--group", "G", "t a t^-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("nontrivial"));
    assert!(text.contains("t a t^-1"));
}

#[test]
fn parse_errors_exit_three() {
    let out = fpg(&["reduce", "--group", "G", "q"]);
    assert_eq!(out.status.code(), Some(3));
    let out = fpg(&["reduce", "--group", "G", "a^0"]);
    assert_eq!(out.status.code(), Some(3));
    let out = fpg(&["tc", "--group", "G"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tc_reads_presentation_files() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../presentations/g.pres");
    let out = fpg(&["tc", path, "a; t"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index 1"));

    let out = fpg(&["tc", path, "a; b; t^2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("index 2"));
}

#[test]
fn tc_overflow_exits_two() {
    let out = fpg(&[
        "tc",
        "--group",
        "G",
        "a b b; t; b t a t^-1 b^-1",
        "--max-cosets",
        "3000",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("unknown"));
    assert!(!text.contains("infinite index"));
}

#[test]
fn engulf_exit_codes_distinguish_verdicts() {
    let out = fpg(&["engulf", "--group", "G", "a b b; t", "--max-index", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("ENGULFED"));

    let out = fpg(&[
        "engulf",
        "--group",
        "G",
        "a b b; t; b t a t^-1 b^-1",
        "--max-index",
        "6",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("NOT_ENGULFED_UP_TO_BOUND"));

    let out = fpg(&["engulf", "--group", "G", "a; t", "--max-index", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("whole group"));
}

#[test]
fn json_reports_carry_schema_version() {
    for args in [
        vec!["tc", "--group", "G", "a; t", "--format", "json"],
        vec!["iso-check", "--format", "json"],
        vec![
            "low-index",
            "--group",
            "B",
            "--max-index",
            "2",
            "--format",
            "json",
        ],
    ] {
        let out = fpg(&args);
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(json["schema"], 1, "args: {args:?}");
        assert!(json["result"].is_object());
        assert!(json["timing_ms"].is_number());
    }
}

#[test]
fn b_group_words_work_end_to_end() {
    let out = fpg(&["reduce", "--group", "B", "y^-1 beta y beta^-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("trivial"));
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../presentations/b.pres");
    let out = fpg(&["low-index", path, "--max-index", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("4 subgroups"));
}

#[test]
fn lemma4_degenerate_conjugator_is_flagged() {
    let out = fpg(&["lemma4", "", "--max-index", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("degenerate"));
}

#[test]
fn inconclusive_search_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_fpg"))
        .args(["low-index", "--group", "G", "--max-index", "6"])
        .env("ENGULF_MAX_NODES", "5")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("INCOMPLETE"));
}
