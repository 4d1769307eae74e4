//! Double-coset decompositions, bounded profinite closures, and
//! engulfing verdicts.
//!
//! For a finite-index subgroup H given by its coset table, the
//! (H, H)-double cosets are the orbits of H acting on the coset space.
//! The H-action is realized through Schreier generators of the
//! basepoint stabilizer; an independent count comes from the diagonal
//! action on coset pairs.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::coset_enum::{enumerate_cosets, CosetTable, Enumeration, EnumerationLimits};
use crate::covers;
use crate::error::{Error, Result};
use crate::low_index::{
    low_index_subgroups_with, subgroup_contains, SearchConstraint, SearchOptions,
};
use crate::perm::Perm;
use crate::words::{parse_word, Presentation, SubgroupSpec, Word};

/// Invariant-factor form of the abelianized group: a free rank plus the
/// nontrivial torsion factors d₁ | d₂ | …
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl AbelianInvariants {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl std::fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "trivial")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Smith normal form diagonal of an integer matrix, with the
/// divisibility chain d₁ | d₂ | … and nonnegative entries.
pub fn smith_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
    let rows = m.len();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut diagonal = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // Pick the nonzero entry of least magnitude as the pivot.
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if m[i][j] != 0 && pivot.is_none_or(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else {
            break;
        };
        m.swap(k, pi);
        for row in m.iter_mut() {
            row.swap(k, pj);
        }
        if m[k][k] < 0 {
            for entry in m[k][k..].iter_mut() {
                *entry = -*entry;
            }
        }
        // Clear the pivot row and column by remainder steps.
        let mut clean = true;
        for i in k + 1..rows {
            let q = m[i][k].div_euclid(m[k][k]);
            if q != 0 {
                for j in k..cols {
                    m[i][j] -= q * m[k][j];
                }
            }
            if m[i][k] != 0 {
                clean = false;
            }
        }
        for j in k + 1..cols {
            let q = m[k][j].div_euclid(m[k][k]);
            if q != 0 {
                for i in k..rows {
                    m[i][j] -= q * m[i][k];
                }
            }
            if m[k][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // Enforce divisibility: fold any bad entry into the pivot block.
        let mut divisible = true;
        'outer: for i in k + 1..rows {
            for j in k + 1..cols {
                if m[i][j] % m[k][k] != 0 {
                    for col in k..cols {
                        let add = m[i][col];
                        m[k][col] += add;
                    }
                    divisible = false;
                    break 'outer;
                }
            }
        }
        if !divisible {
            continue;
        }
        diagonal.push(m[k][k]);
        k += 1;
    }
    diagonal
}

/// The abelianization of the presented group, via Smith normal form of
/// the relator exponent matrix.
pub fn abelianization(pres: &Presentation) -> AbelianInvariants {
    let gens = pres.generator_count();
    let matrix: Vec<Vec<i64>> = pres
        .relators()
        .iter()
        .map(|r| {
            let mut row = vec![0i64; gens];
            for s in r.syllables() {
                row[s.gen] += s.exponent;
            }
            row
        })
        .collect();
    let diagonal = smith_diagonal(matrix);
    let nonzero = diagonal.iter().filter(|&&d| d != 0).count();
    AbelianInvariants {
        free_rank: gens - nonzero,
        torsion: diagonal
            .iter()
            .filter(|&&d| d.abs() > 1)
            .map(|&d| d.unsigned_abs())
            .collect(),
    }
}

/// Breadth-first Schreier transversal: the shortest word carrying the
/// basepoint to each coset, ties broken by generator order with inverses
/// after positives.
pub fn bfs_transversal(table: &CosetTable) -> Vec<Word> {
    let gens = table.action().len();
    let alphabet = table.source().alphabet();
    let inverses: Vec<Perm> = table.action().iter().map(|p| p.inverse()).collect();
    let mut reps: Vec<Option<Word>> = vec![None; table.degree()];
    reps[0] = Some(Word::identity(alphabet));
    let mut queue = VecDeque::from([0usize]);
    while let Some(coset) = queue.pop_front() {
        for col in 0..2 * gens {
            let (image, gen, exp) = if col < gens {
                (table.perm(col).apply(coset), col, 1)
            } else {
                (inverses[col - gens].apply(coset), col - gens, -1)
            };
            if reps[image].is_none() {
                let step = Word::generator(alphabet, gen, exp).expect("generator in range");
                reps[image] = Some(
                    reps[coset]
                        .as_ref()
                        .unwrap()
                        .concat(&step)
                        .expect("same alphabet"),
                );
                queue.push_back(image);
            }
        }
    }
    reps.into_iter().map(|r| r.expect("transitive")).collect()
}

fn dfs_transversal(table: &CosetTable) -> Vec<Word> {
    let gens = table.action().len();
    let alphabet = table.source().alphabet();
    let inverses: Vec<Perm> = table.action().iter().map(|p| p.inverse()).collect();
    let mut reps: Vec<Option<Word>> = vec![None; table.degree()];
    reps[0] = Some(Word::identity(alphabet));
    let mut stack = vec![0usize];
    while let Some(coset) = stack.pop() {
        // Reverse column order, to differ from the BFS transversal.
        for col in (0..2 * gens).rev() {
            let (image, gen, exp) = if col < gens {
                (table.perm(col).apply(coset), col, 1)
            } else {
                (inverses[col - gens].apply(coset), col - gens, -1)
            };
            if reps[image].is_none() {
                let step = Word::generator(alphabet, gen, exp).expect("generator in range");
                reps[image] = Some(
                    reps[coset]
                        .as_ref()
                        .unwrap()
                        .concat(&step)
                        .expect("same alphabet"),
                );
                stack.push(image);
            }
        }
    }
    reps.into_iter().map(|r| r.expect("transitive")).collect()
}

/// Schreier generators of the basepoint stabilizer for the given
/// transversal: rep(i) · x · rep(i·x)⁻¹ over all cosets i and
/// generators x, with trivial ones dropped.
pub fn schreier_generators(table: &CosetTable, transversal: &[Word]) -> Vec<Word> {
    let mut out = Vec::new();
    for coset in 0..table.degree() {
        for gen in 0..table.action().len() {
            let image = table.perm(gen).apply(coset);
            let step =
                Word::generator(table.source().alphabet(), gen, 1).expect("generator in range");
            let word = transversal[coset]
                .concat(&step)
                .and_then(|w| w.concat(&transversal[image].inverse()))
                .expect("same alphabet");
            if !word.is_identity() {
                out.push(word);
            }
        }
    }
    out
}

fn word_permutation(table: &CosetTable, w: &Word) -> Result<Perm> {
    let images: Vec<usize> = (0..table.degree())
        .map(|i| table.trace(i, w))
        .collect::<Result<_>>()?;
    Ok(Perm::new(images).expect("words act bijectively"))
}

/// Orbit partition of the coset space under a set of permutations,
/// ordered by least element; the first orbit contains the basepoint.
fn orbit_partition(degree: usize, perms: &[Perm]) -> Vec<Vec<usize>> {
    let mut orbit_of = vec![usize::MAX; degree];
    let mut orbits: Vec<Vec<usize>> = Vec::new();
    for start in 0..degree {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut orbit = vec![start];
        orbit_of[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(point) = queue.pop_front() {
            for p in perms {
                for next in [p.apply(point), p.inverse().apply(point)] {
                    if orbit_of[next] == usize::MAX {
                        orbit_of[next] = id;
                        orbit.push(next);
                        queue.push_back(next);
                    }
                }
            }
        }
        orbit.sort();
        orbits.push(orbit);
    }
    orbits
}

/// A double-coset decomposition G = ⋃ H·rep·H for the finite-index
/// subgroup the table describes.
#[derive(Debug, Clone, Serialize)]
pub struct DoubleCosetDecomposition {
    pub subgroup: CosetTable,
    pub representatives: Vec<Word>,
    pub orbit_sizes: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
}

/// Partitions the coset space into H-orbits (= double cosets of H) and
/// returns a shortest transversal word for each orbit. The first
/// representative is always the empty word, for the coset H itself.
pub fn double_cosets(table: &CosetTable) -> Result<DoubleCosetDecomposition> {
    let transversal = bfs_transversal(table);
    let schreier = schreier_generators(table, &transversal);
    let perms: Vec<Perm> = schreier
        .iter()
        .map(|w| word_permutation(table, w))
        .collect::<Result<_>>()?;
    let orbits = orbit_partition(table.degree(), &perms);
    let representatives: Vec<Word> = orbits.iter().map(|o| transversal[o[0]].clone()).collect();
    let orbit_sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
    Ok(DoubleCosetDecomposition {
        subgroup: table.clone(),
        representatives,
        orbit_sizes,
        orbits,
    })
}

/// Constructively re-checks that G = H·F·H for the decomposition's
/// representative set F: the H-orbits of the representatives' cosets
/// must be disjoint and must cover the whole coset space.
pub fn lemma1_check(table: &CosetTable) -> Result<bool> {
    let decomposition = double_cosets(table)?;
    if decomposition.representatives.is_empty() || !decomposition.representatives[0].is_identity() {
        return Ok(false);
    }
    let transversal = bfs_transversal(table);
    let schreier = schreier_generators(table, &transversal);
    let perms: Vec<Perm> = schreier
        .iter()
        .map(|w| word_permutation(table, w))
        .collect::<Result<_>>()?;

    let mut covered = vec![false; table.degree()];
    for (rep, expected_size) in decomposition
        .representatives
        .iter()
        .zip(&decomposition.orbit_sizes)
    {
        let start = table.coset_of(rep)?;
        // Flood the H-orbit of this representative's coset.
        let mut orbit = vec![start];
        let mut seen = vec![false; table.degree()];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(point) = queue.pop_front() {
            for p in &perms {
                for next in [p.apply(point), p.inverse().apply(point)] {
                    if !seen[next] {
                        seen[next] = true;
                        orbit.push(next);
                        queue.push_back(next);
                    }
                }
            }
        }
        if orbit.len() != *expected_size {
            return Ok(false);
        }
        for point in orbit {
            if covered[point] {
                return Ok(false);
            }
            covered[point] = true;
        }
    }
    Ok(covered.iter().all(|&c| c))
}

/// Number of orbits of the whole group acting diagonally on coset pairs
/// that meet {basepoint} × cosets; classically equal to the number of
/// double cosets.
fn pair_orbit_count(table: &CosetTable) -> usize {
    let d = table.degree();
    let gens = table.action().len();
    let inverses: Vec<Perm> = table.action().iter().map(|p| p.inverse()).collect();
    let mut orbit_of = vec![usize::MAX; d * d];
    let mut next_id = 0;
    for start in 0..d * d {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        orbit_of[start] = next_id;
        let mut queue = VecDeque::from([start]);
        while let Some(pair) = queue.pop_front() {
            let (p, q) = (pair / d, pair % d);
            for col in 0..2 * gens {
                let (np, nq) = if col < gens {
                    (table.perm(col).apply(p), table.perm(col).apply(q))
                } else {
                    (inverses[col - gens].apply(p), inverses[col - gens].apply(q))
                };
                let npair = np * d + nq;
                if orbit_of[npair] == usize::MAX {
                    orbit_of[npair] = next_id;
                    queue.push_back(npair);
                }
            }
        }
        next_id += 1;
    }
    let mut ids: Vec<usize> = (0..d).map(|j| orbit_of[j]).collect();
    ids.sort();
    ids.dedup();
    ids.len()
}

/// Cross-checks the double-coset count against two independent orbit
/// computations: a union-find pass over Schreier generators from a
/// depth-first transversal, and the diagonal action on coset pairs.
pub fn lemma2_orbit_check(table: &CosetTable) -> Result<bool> {
    let reported = double_cosets(table)?.representatives.len();

    let transversal = dfs_transversal(table);
    let schreier = schreier_generators(table, &transversal);
    let mut parent: Vec<usize> = (0..table.degree()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for w in &schreier {
        let perm = word_permutation(table, w)?;
        for point in 0..table.degree() {
            let a = root(&mut parent, point);
            let b = root(&mut parent, perm.apply(point));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut union_find_count = 0;
    for point in 0..table.degree() {
        if root(&mut parent, point) == point {
            union_find_count += 1;
        }
    }

    Ok(reported == union_find_count && reported == pair_orbit_count(table))
}

/// Basepoint component of the product action of two tables over the same
/// presentation: the coset table of the intersection of the two
/// subgroups.
pub fn intersect_tables(left: &CosetTable, right: &CosetTable) -> Result<CosetTable> {
    if left.source().alphabet() != right.source().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let gens = left.action().len();
    let left_inv: Vec<Perm> = left.action().iter().map(|p| p.inverse()).collect();
    let right_inv: Vec<Perm> = right.action().iter().map(|p| p.inverse()).collect();

    let mut index_of = std::collections::HashMap::new();
    let mut states: Vec<(usize, usize)> = vec![(0, 0)];
    index_of.insert((0, 0), 0usize);
    let mut queue = VecDeque::from([0usize]);
    while let Some(state) = queue.pop_front() {
        let (p, q) = states[state];
        for col in 0..2 * gens {
            let next = if col < gens {
                (left.perm(col).apply(p), right.perm(col).apply(q))
            } else {
                (
                    left_inv[col - gens].apply(p),
                    right_inv[col - gens].apply(q),
                )
            };
            if let std::collections::hash_map::Entry::Vacant(e) = index_of.entry(next) {
                e.insert(states.len());
                states.push(next);
                queue.push_back(states.len() - 1);
            }
        }
    }

    let action: Vec<Perm> = (0..gens)
        .map(|gen| {
            let images: Vec<usize> = states
                .iter()
                .map(|&(p, q)| index_of[&(left.perm(gen).apply(p), right.perm(gen).apply(q))])
                .collect();
            Perm::new(images).expect("product of bijections")
        })
        .collect();

    // Keep only the recorded words that lie in both subgroups.
    let mut fixed: Vec<Word> = Vec::new();
    for w in left.fixed_words().iter().chain(right.fixed_words()) {
        if !fixed.contains(w) && left.coset_of(w)? == 0 && right.coset_of(w)? == 0 {
            fixed.push(w.clone());
        }
    }
    CosetTable::from_perms(left.source(), action, fixed)
}

/// True iff the subgroup of `fine` is contained in the subgroup of
/// `coarse`, decided by propagating the basepointed equivariant map
/// between the coset spaces.
pub fn subgroup_leq(fine: &CosetTable, coarse: &CosetTable) -> Result<bool> {
    if fine.source().alphabet() != coarse.source().alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let gens = fine.action().len();
    let fine_inv: Vec<Perm> = fine.action().iter().map(|p| p.inverse()).collect();
    let coarse_inv: Vec<Perm> = coarse.action().iter().map(|p| p.inverse()).collect();
    let mut image = vec![usize::MAX; fine.degree()];
    image[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(coset) = queue.pop_front() {
        for col in 0..2 * gens {
            let (next, next_image) = if col < gens {
                (
                    fine.perm(col).apply(coset),
                    coarse.perm(col).apply(image[coset]),
                )
            } else {
                (
                    fine_inv[col - gens].apply(coset),
                    coarse_inv[col - gens].apply(image[coset]),
                )
            };
            if image[next] == usize::MAX {
                image[next] = next_image;
                queue.push_back(next);
            } else if image[next] != next_image {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The intersection of every subgroup of index ≤ `bound` containing the
/// target, together with the list of subgroups intersected.
#[derive(Debug, Clone, Serialize)]
pub struct ClosureResult {
    pub bound: usize,
    pub closure_table: CosetTable,
    pub contributing: Vec<CosetTable>,
}

/// Computes the bounded profinite closure of the target subgroup: the
/// intersection of all subgroups of index ≤ `bound` that contain it.
/// The closure's own index may exceed the bound.
pub fn profinite_closure_bounded(
    pres: &Arc<Presentation>,
    target: &SubgroupSpec,
    bound: usize,
    options: &SearchOptions,
) -> Result<ClosureResult> {
    let list = low_index_subgroups_with(
        pres,
        &SearchConstraint::containing(target.generators().to_vec(), bound),
        options,
    )?;
    if !list.complete {
        return Err(Error::IncompleteSearch);
    }
    let mut closure = list.tables[0].clone();
    for table in &list.tables[1..] {
        closure = intersect_tables(&closure, table)?.canonicalized();
    }
    let closure_table = closure
        .canonicalized()
        .with_fixed_words(target.generators().to_vec());
    debug_assert!(closure_table.verify());
    Ok(ClosureResult {
        bound,
        closure_table,
        contributing: list.tables,
    })
}

/// Verdict of the bounded engulfing check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EngulfingVerdict {
    #[serde(rename = "NOT_ENGULFED_UP_TO_BOUND")]
    NotEngulfedUpToBound,
    #[serde(rename = "ENGULFED")]
    Engulfed,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

/// Whether any proper subgroup of index ≤ `bound` contains the target.
#[derive(Debug, Clone, Serialize)]
pub struct EngulfingReport {
    pub target: SubgroupSpec,
    pub bound: usize,
    pub verdict: EngulfingVerdict,
    /// Smallest-index proper container, when the verdict is ENGULFED.
    pub witness: Option<CosetTable>,
    pub proper_containers: Vec<CosetTable>,
    /// Some(true) when coset enumeration proves the target generates the
    /// whole group; Some(false) when it proves a proper finite index;
    /// None when the bounded probe is inconclusive.
    pub target_is_whole_group: Option<bool>,
    pub search_complete: bool,
    pub nodes: u64,
}

const WHOLE_GROUP_PROBE: EnumerationLimits = EnumerationLimits {
    max_cosets: 20_000,
    max_steps: 2_000_000,
};

/// Searches every subgroup of index ≤ `bound` for a proper one containing
/// the target. A whole-group target is flagged, not rejected.
pub fn engulfing_report(
    pres: &Arc<Presentation>,
    target: &SubgroupSpec,
    bound: usize,
    options: &SearchOptions,
) -> Result<EngulfingReport> {
    let list = low_index_subgroups_with(
        pres,
        &SearchConstraint::containing(target.generators().to_vec(), bound),
        options,
    )?;
    let proper_containers: Vec<CosetTable> = list
        .tables
        .iter()
        .filter(|t| t.degree() > 1)
        .cloned()
        .collect();
    let verdict = if !list.complete {
        EngulfingVerdict::Inconclusive
    } else if proper_containers.is_empty() {
        EngulfingVerdict::NotEngulfedUpToBound
    } else {
        EngulfingVerdict::Engulfed
    };
    let witness = match verdict {
        EngulfingVerdict::Engulfed => Some(proper_containers[0].clone()),
        _ => None,
    };
    let target_is_whole_group = match enumerate_cosets(pres, target, WHOLE_GROUP_PROBE)? {
        Enumeration::Complete(table) => Some(table.degree() == 1),
        Enumeration::Overflow(_) => None,
    };
    Ok(EngulfingReport {
        target: target.clone(),
        bound,
        verdict,
        witness,
        proper_containers,
        target_is_whole_group,
        search_complete: list.complete,
        nodes: list.nodes,
    })
}

/// Per-container record of the engulfing mechanism: the container must
/// contain a, satisfy the covering-space checks, and be the whole group.
#[derive(Debug, Clone, Serialize)]
pub struct ContainerCheck {
    pub degree: usize,
    pub contains_a: bool,
    pub lemma3: covers::Lemma3Report,
    pub is_whole_group: bool,
}

/// Outcome of the engulfing check for K_g = ⟨abb, t, a^g⟩, with the
/// mechanism verified on every container found.
#[derive(Debug, Clone, Serialize)]
pub struct Lemma4Outcome {
    pub conjugator: Word,
    pub conjugate_generator: Word,
    pub subgroup: SubgroupSpec,
    /// True for degenerate choices of g that make K_g the whole group.
    pub degenerate_whole_group: bool,
    pub report: EngulfingReport,
    pub containers: Vec<ContainerCheck>,
    pub mechanism_verified: bool,
}

/// Forms K_g = ⟨abb, t, g⁻¹ag⟩ in G, runs the engulfing check, and
/// verifies on every container found that a lies in it and that the
/// covering-space argument forces it to be the whole group.
pub fn lemma4_check(
    pres: &Arc<Presentation>,
    conjugator: &Word,
    bound: usize,
    options: &SearchOptions,
) -> Result<Lemma4Outcome> {
    let alphabet = pres.alphabet();
    let a = parse_word("a", alphabet)?;
    let conjugate_generator = a.conjugated_by(conjugator)?;
    let target = SubgroupSpec::new(
        pres,
        vec![
            parse_word("a b b", alphabet)?,
            parse_word("t", alphabet)?,
            conjugate_generator.clone(),
        ],
    )?;
    let report = engulfing_report(pres, &target, bound, options)?;

    // Every container in the search output, the whole group included.
    let whole = CosetTable::from_perms(
        pres,
        (0..pres.generator_count())
            .map(|_| Perm::identity(1))
            .collect(),
        target.generators().to_vec(),
    )?;
    let mut all_containers = vec![whole];
    all_containers.extend(report.proper_containers.iter().cloned());

    let mut containers = Vec::new();
    for table in &all_containers {
        let model = covers::from_coset_table(table)?;
        let lemma3 = covers::lemma3_full_check(&model, table)?;
        containers.push(ContainerCheck {
            degree: table.degree(),
            contains_a: subgroup_contains(table, &a)?,
            lemma3,
            is_whole_group: table.degree() == 1,
        });
    }
    let mechanism_verified = containers
        .iter()
        .all(|c| c.contains_a && c.lemma3.all_checks_pass() && c.is_whole_group);
    Ok(Lemma4Outcome {
        conjugator: conjugator.clone(),
        conjugate_generator,
        subgroup: target,
        degenerate_whole_group: report.target_is_whole_group == Some(true),
        report,
        containers,
        mechanism_verified,
    })
}

/// Order of the image of the group in the symmetric group on the cosets,
/// or None if it exceeds `cap`. The subgroup is normal exactly when the
/// image acts regularly (order = degree).
pub fn image_group_order(table: &CosetTable, cap: usize) -> Option<usize> {
    let mut elements: Vec<Perm> = vec![Perm::identity(table.degree())];
    let mut frontier = vec![Perm::identity(table.degree())];
    while let Some(next) = frontier.pop() {
        for gen in table.action() {
            let product = next.then(gen);
            if !elements.contains(&product) {
                if elements.len() >= cap {
                    return None;
                }
                elements.push(product.clone());
                frontier.push(product);
            }
        }
    }
    Some(elements.len())
}

pub fn is_normal(table: &CosetTable) -> Option<bool> {
    let degree = table.degree();
    image_group_order(table, degree * degree * degree + 8).map(|order| order == degree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::EnumerationLimits;
    use crate::low_index::low_index_subgroups;
    use crate::words::{builtin_b, builtin_g, Alphabet, Presentation};

    fn g() -> Arc<Presentation> {
        builtin_g()
    }

    fn gw(text: &str) -> Word {
        parse_word(text, g().alphabet()).unwrap()
    }

    fn table_for(words: &[&str]) -> CosetTable {
        let g = g();
        let sub = SubgroupSpec::new(&g, words.iter().map(|t| gw(t)).collect()).unwrap();
        enumerate_cosets(&g, &sub, EnumerationLimits::default())
            .unwrap()
            .complete()
            .unwrap()
    }

    #[test]
    fn abelianizations() {
        assert_eq!(
            abelianization(&g()),
            AbelianInvariants {
                free_rank: 2,
                torsion: vec![]
            }
        );
        assert_eq!(abelianization(&builtin_b()), abelianization(&g()));
        let alphabet = Alphabet::new(&["x"]).unwrap();
        let trivial =
            Presentation::new(alphabet.clone(), vec![parse_word("x", &alphabet).unwrap()]).unwrap();
        assert!(abelianization(&trivial).is_trivial());
    }

    #[test]
    fn smith_diagonal_examples() {
        assert_eq!(smith_diagonal(vec![vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(smith_diagonal(vec![vec![0, 0, 0], vec![1, -1, 0]]), vec![1]);
        assert_eq!(smith_diagonal(vec![vec![2, 4], vec![4, 2]]), vec![2, 6]);
    }

    #[test]
    fn whole_group_has_one_double_coset() {
        let table = table_for(&["a", "t"]);
        let d = double_cosets(&table).unwrap();
        assert_eq!(d.representatives.len(), 1);
        assert!(d.representatives[0].is_identity());
        assert_eq!(d.orbit_sizes, vec![1]);
        assert!(lemma1_check(&table).unwrap());
        assert!(lemma2_orbit_check(&table).unwrap());
    }

    #[test]
    fn index_two_subgroups_are_normal_with_two_double_cosets() {
        let list = low_index_subgroups(&g(), &SearchConstraint::unconstrained(2)).unwrap();
        for table in list.tables.iter().filter(|t| t.degree() == 2) {
            let d = double_cosets(table).unwrap();
            assert_eq!(d.representatives.len(), 2);
            assert_eq!(d.orbit_sizes, vec![1, 1]);
            assert_eq!(is_normal(table), Some(true));
            assert!(lemma1_check(table).unwrap());
            assert!(lemma2_orbit_check(table).unwrap());
        }
    }

    #[test]
    fn non_normal_index_three_point_stabilizer() {
        // G acts on three points via a ↦ (0 1 2), b ↦ (0 2 1), t ↦ (0 1);
        // the relators hold, and the point stabilizer is not normal.
        let g = g();
        let a = Perm::new(vec![1, 2, 0]).unwrap();
        let b = a.inverse();
        let t = Perm::new(vec![1, 0, 2]).unwrap();
        let table = CosetTable::from_perms(&g, vec![a, b, t], vec![]).unwrap();
        let d = double_cosets(&table).unwrap();
        assert_eq!(d.representatives.len(), 2);
        let mut sizes = d.orbit_sizes.clone();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
        assert_eq!(is_normal(&table), Some(false));
        assert!(lemma1_check(&table).unwrap());
        assert!(lemma2_orbit_check(&table).unwrap());
    }

    #[test]
    fn orbit_sizes_sum_to_degree_across_census() {
        for pres in [g(), builtin_b()] {
            let list = low_index_subgroups(&pres, &SearchConstraint::unconstrained(3)).unwrap();
            for table in &list.tables {
                let d = double_cosets(table).unwrap();
                assert_eq!(d.orbit_sizes.iter().sum::<usize>(), table.degree());
                assert!(lemma1_check(table).unwrap());
                assert!(lemma2_orbit_check(table).unwrap());
            }
        }
    }

    #[test]
    fn closure_of_finite_index_subgroup_is_itself() {
        let g = g();
        let target = SubgroupSpec::new(&g, vec![gw("a"), gw("b"), gw("t^2")]).unwrap();
        let closure = profinite_closure_bounded(&g, &target, 2, &SearchOptions::default()).unwrap();
        assert_eq!(closure.closure_table.degree(), 2);
        assert_eq!(closure.contributing.len(), 2);
        assert_eq!(closure.closure_table, table_for(&["a", "b", "t^2"]));
    }

    #[test]
    fn closure_of_whole_group_target() {
        let g = g();
        let target = SubgroupSpec::new(&g, vec![gw("a"), gw("b"), gw("t")]).unwrap();
        let closure = profinite_closure_bounded(&g, &target, 4, &SearchOptions::default()).unwrap();
        assert_eq!(closure.closure_table.degree(), 1);
        assert_eq!(closure.contributing.len(), 1);
    }

    #[test]
    fn closure_of_theorem_subgroup_is_whole_group() {
        let g = g();
        let target =
            SubgroupSpec::new(&g, vec![gw("a b b"), gw("t"), gw("b t a t^-1 b^-1")]).unwrap();
        for bound in [4, 8] {
            let closure =
                profinite_closure_bounded(&g, &target, bound, &SearchOptions::default()).unwrap();
            assert_eq!(closure.closure_table.degree(), 1);
            assert_eq!(closure.contributing.len(), 1);
        }
    }

    #[test]
    fn closure_monotone_in_bound() {
        let g = g();
        let target = SubgroupSpec::new(&g, vec![gw("a b b"), gw("t")]).unwrap();
        let mut previous: Option<CosetTable> = None;
        for bound in 1..=6 {
            let closure =
                profinite_closure_bounded(&g, &target, bound, &SearchOptions::default()).unwrap();
            for contributing in &closure.contributing {
                assert!(subgroup_leq(&closure.closure_table, contributing).unwrap());
            }
            if let Some(prev) = previous {
                assert!(subgroup_leq(&closure.closure_table, &prev).unwrap());
            }
            previous = Some(closure.closure_table);
        }
    }

    #[test]
    fn theorem_subgroup_is_not_engulfed() {
        let g = g();
        let target =
            SubgroupSpec::new(&g, vec![gw("a b b"), gw("t"), gw("b t a t^-1 b^-1")]).unwrap();
        let report = engulfing_report(&g, &target, 10, &SearchOptions::default()).unwrap();
        assert_eq!(report.verdict, EngulfingVerdict::NotEngulfedUpToBound);
        assert!(report.proper_containers.is_empty());
        assert!(report.search_complete);
        assert_eq!(report.target_is_whole_group, None);
    }

    #[test]
    fn j_is_engulfed_with_an_index_three_witness() {
        let g = g();
        let target = SubgroupSpec::new(&g, vec![gw("a b b"), gw("t")]).unwrap();
        let report = engulfing_report(&g, &target, 3, &SearchOptions::default()).unwrap();
        assert_eq!(report.verdict, EngulfingVerdict::Engulfed);
        let witness = report.witness.as_ref().unwrap();
        assert_eq!(witness.degree(), 3);
        // The witness is the kernel of a, b ↦ 1, t ↦ 0 (mod 3).
        assert!(witness.perm(2).is_identity());
        assert!(subgroup_contains(witness, &gw("a b b")).unwrap());
        assert!(subgroup_contains(witness, &gw("t")).unwrap());
    }

    #[test]
    fn whole_group_target_is_flagged() {
        let g = g();
        let target = SubgroupSpec::new(&g, vec![gw("a"), gw("b"), gw("t")]).unwrap();
        let report = engulfing_report(&g, &target, 4, &SearchOptions::default()).unwrap();
        assert_eq!(report.verdict, EngulfingVerdict::NotEngulfedUpToBound);
        assert_eq!(report.target_is_whole_group, Some(true));
    }

    #[test]
    fn lemma4_for_the_theorem_conjugator() {
        let g = g();
        let outcome = lemma4_check(&g, &gw("t^-1 b^-1"), 6, &SearchOptions::default()).unwrap();
        assert_eq!(outcome.conjugate_generator, gw("b t a t^-1 b^-1"));
        assert_eq!(
            outcome.report.verdict,
            EngulfingVerdict::NotEngulfedUpToBound
        );
        assert!(outcome.mechanism_verified);
        assert!(!outcome.degenerate_whole_group);
    }

    #[test]
    fn lemma4_degenerate_identity_conjugator() {
        let g = g();
        let outcome = lemma4_check(&g, &gw(""), 4, &SearchOptions::default()).unwrap();
        assert!(outcome.degenerate_whole_group);
        assert_eq!(outcome.report.target_is_whole_group, Some(true));
    }

    #[test]
    fn lemma4_alternative_conjugators() {
        let g = g();
        for text in ["t", "b"] {
            let outcome = lemma4_check(&g, &gw(text), 5, &SearchOptions::default()).unwrap();
            assert_eq!(
                outcome.report.verdict,
                EngulfingVerdict::NotEngulfedUpToBound,
                "g = {text}"
            );
            assert!(outcome.mechanism_verified);
        }
    }

    #[test]
    fn intersection_of_independent_index_two_subgroups() {
        let g = g();
        let t2 = table_for(&["a", "b", "t^2"]);
        // Kernel of a, b ↦ 1, t ↦ 0 (mod 2).
        let swap = Perm::new(vec![1, 0]).unwrap();
        let other = CosetTable::from_perms(&g, vec![swap.clone(), swap, Perm::identity(2)], vec![])
            .unwrap();
        let both = intersect_tables(&t2, &other).unwrap();
        assert_eq!(both.degree(), 4);
        assert!(subgroup_leq(&both, &t2).unwrap());
        assert!(subgroup_leq(&both, &other).unwrap());
        assert!(!subgroup_leq(&t2, &other).unwrap());
    }
}
