//! Covering-space view of coset tables over G's presentation.
//!
//! A degree-d table is the based cover of the presentation 2-complex
//! X = T ∪ C, where T is the torus carrying the loops a and b and C is a
//! cylinder subdivided by the edge t. The verifier walks the
//! covering-space argument: when a finite-index subgroup contains abb
//! and t, the based a-cycle must sweep out the whole cover, so powers
//! of a form a full coset transversal.

use serde::Serialize;

use crate::coset_enum::CosetTable;
use crate::error::{Error, Result};
use crate::low_index::subgroup_contains;
use crate::normal_form::{identify_builtin, BuiltinGroup};
use crate::perm::Perm;
use crate::words::{parse_word, Word};

const GEN_A: usize = 0;
const GEN_B: usize = 1;
const GEN_T: usize = 2;

/// The 0-cell permutations of a finite based cover of X.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverModel {
    pub degree: usize,
    pub perm_a: Perm,
    pub perm_b: Perm,
    pub perm_t: Perm,
}

/// Reinterprets a coset table over G's presentation as a based cover.
/// The cover conditions (both relators close at every 0-cell) are
/// re-verified.
pub fn from_coset_table(table: &CosetTable) -> Result<CoverModel> {
    if identify_builtin(table.source()) != Some(BuiltinGroup::G) {
        return Err(Error::WrongPresentation);
    }
    let model = CoverModel {
        degree: table.degree(),
        perm_a: table.perm(GEN_A).clone(),
        perm_b: table.perm(GEN_B).clone(),
        perm_t: table.perm(GEN_T).clone(),
    };
    let ab = model.perm_a.then(&model.perm_b);
    let ba = model.perm_b.then(&model.perm_a);
    if ab != ba {
        return Err(Error::InvalidTable(
            "torus relator does not close everywhere".into(),
        ));
    }
    // t⁻¹ a t b⁻¹ closes everywhere ⟺ conjugation by the t-edges carries
    // the a-permutation to the b-permutation.
    let conj = model
        .perm_t
        .inverse()
        .then(&model.perm_a)
        .then(&model.perm_t);
    if conj != model.perm_b {
        return Err(Error::InvalidTable(
            "cylinder relator does not close everywhere".into(),
        ));
    }
    Ok(model)
}

/// The 0-cells of the cover of the torus at the basepoint: the orbit of 0
/// under a and b. Returned sorted.
pub fn torus_subcover(model: &CoverModel) -> Vec<usize> {
    let mut seen = vec![false; model.degree];
    let mut stack = vec![0usize];
    seen[0] = true;
    let perms = [
        model.perm_a.clone(),
        model.perm_b.clone(),
        model.perm_a.inverse(),
        model.perm_b.inverse(),
    ];
    while let Some(point) = stack.pop() {
        for p in &perms {
            let next = p.apply(point);
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    (0..model.degree).filter(|&i| seen[i]).collect()
}

/// Degree of the based lift of the loop a: the a-cycle length through 0.
pub fn degree_a_hat(model: &CoverModel) -> usize {
    model.perm_a.cycle_through(0).len()
}

/// Degree of the based lift of the loop b.
pub fn degree_b_hat(model: &CoverModel) -> usize {
    model.perm_b.cycle_through(0).len()
}

/// Step-by-step outcome of the covering-space argument for one subgroup.
///
/// When `hypothesis_holds` is false (the subgroup does not contain both
/// abb and t) the raw quantities are still reported but the checks carry
/// no claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma3Report {
    pub degree: usize,
    pub hypothesis_holds: bool,
    pub t_fixes_basepoint: bool,
    pub deg_a_hat: usize,
    pub deg_b_hat: usize,
    pub deg_t_hat: usize,
    pub torus_vertices: Vec<usize>,
    pub degrees_equal: bool,
    pub b_generates_torus_deck: bool,
    pub all_vertices_on_a_hat: bool,
    /// Coset hit by a^i, for i = 0..degree.
    pub a_power_transversal: Vec<usize>,
    pub coset_reps_are_a_powers: bool,
    pub conclusion_g_eq_h_a: bool,
}

impl Lemma3Report {
    /// All five checks: t lifts closed, deg â = deg b̂, b generates the
    /// deck group of T̂, every 0-cell on â, and a-powers form a full
    /// transversal.
    pub fn all_checks_pass(&self) -> bool {
        self.t_fixes_basepoint
            && self.degrees_equal
            && self.b_generates_torus_deck
            && self.all_vertices_on_a_hat
            && self.coset_reps_are_a_powers
    }
}

/// Runs the full covering-space verification of `G = H⟨a⟩` for the
/// subgroup the table describes. `model` must be the cover of that same
/// table.
pub fn lemma3_full_check(model: &CoverModel, table: &CosetTable) -> Result<Lemma3Report> {
    let expected = from_coset_table(table)?;
    if &expected != model {
        return Err(Error::InvalidTable(
            "cover model does not match the coset table".into(),
        ));
    }
    let alphabet = table.source().alphabet();
    let abb = parse_word("a b b", alphabet)?;
    let t = parse_word("t", alphabet)?;
    let hypothesis_holds = subgroup_contains(table, &abb)? && subgroup_contains(table, &t)?;

    let t_fixes_basepoint = model.perm_t.apply(0) == 0;
    let deg_a_hat = degree_a_hat(model);
    let deg_b_hat = degree_b_hat(model);
    let torus_vertices = torus_subcover(model);
    let deg_t_hat = torus_vertices.len();

    let degrees_equal = deg_a_hat == deg_b_hat;
    let b_generates_torus_deck = deg_b_hat == deg_t_hat;
    let all_vertices_on_a_hat = deg_a_hat == model.degree;

    // Independent route to the conclusion: trace the words a^i through
    // the table and ask whether they hit every coset.
    let mut hit = vec![false; model.degree];
    let a = Word::generator(alphabet, GEN_A, 1)?;
    let mut a_power_transversal = Vec::with_capacity(model.degree);
    for i in 0..model.degree {
        let coset = table.coset_of(&a.pow(i as i64))?;
        a_power_transversal.push(coset);
        hit[coset] = true;
    }
    let coset_reps_are_a_powers = hit.iter().all(|&h| h);

    Ok(Lemma3Report {
        degree: model.degree,
        hypothesis_holds,
        t_fixes_basepoint,
        deg_a_hat,
        deg_b_hat,
        deg_t_hat,
        torus_vertices,
        degrees_equal,
        b_generates_torus_deck,
        all_vertices_on_a_hat,
        a_power_transversal,
        coset_reps_are_a_powers,
        conclusion_g_eq_h_a: coset_reps_are_a_powers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset_enum::{enumerate_cosets, EnumerationLimits};
    use crate::words::{builtin_b, builtin_g, SubgroupSpec};
    use std::sync::Arc;

    fn table_for(words: &[&str]) -> CosetTable {
        let g = builtin_g();
        let sub = SubgroupSpec::new(
            &g,
            words
                .iter()
                .map(|t| parse_word(t, g.alphabet()).unwrap())
                .collect(),
        )
        .unwrap();
        enumerate_cosets(&g, &sub, EnumerationLimits::default())
            .unwrap()
            .complete()
            .unwrap()
    }

    fn mod3_kernel_table() -> CosetTable {
        // Kernel of a, b ↦ 1, t ↦ 0 (mod 3): a and b advance the coset,
        // t fixes it.
        let g = builtin_g();
        let cycle = Perm::new(vec![1, 2, 0]).unwrap();
        CosetTable::from_perms(
            &g,
            vec![cycle.clone(), cycle, Perm::identity(3)],
            vec![
                parse_word("a b b", g.alphabet()).unwrap(),
                parse_word("t", g.alphabet()).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn whole_group_cover_is_trivial() {
        let table = table_for(&["a", "t"]);
        let model = from_coset_table(&table).unwrap();
        assert_eq!(model.degree, 1);
        assert!(model.perm_a.is_identity());
        assert_eq!(torus_subcover(&model), vec![0]);
        assert_eq!(degree_a_hat(&model), 1);
        assert_eq!(degree_b_hat(&model), 1);
        let report = lemma3_full_check(&model, &table).unwrap();
        assert!(report.hypothesis_holds);
        assert!(report.all_checks_pass());
    }

    #[test]
    fn index_two_cover_is_a_negative_control() {
        let table = table_for(&["a", "b", "t^2"]);
        let model = from_coset_table(&table).unwrap();
        assert!(model.perm_a.is_identity());
        assert!(model.perm_b.is_identity());
        assert_eq!(model.perm_t, Perm::new(vec![1, 0]).unwrap());
        assert_eq!(torus_subcover(&model), vec![0]);
        assert_eq!(degree_a_hat(&model), 1);
        let report = lemma3_full_check(&model, &table).unwrap();
        // t ∉ ⟨a, b, t²⟩: the table sends the basepoint off itself.
        assert!(!report.hypothesis_holds);
        assert!(!report.conclusion_g_eq_h_a);
    }

    #[test]
    fn mod3_kernel_passes_all_checks() {
        let table = mod3_kernel_table();
        let model = from_coset_table(&table).unwrap();
        assert_eq!(model.perm_a, Perm::new(vec![1, 2, 0]).unwrap());
        assert_eq!(model.perm_b, model.perm_a);
        assert!(model.perm_t.is_identity());
        assert_eq!(torus_subcover(&model), vec![0, 1, 2]);
        let report = lemma3_full_check(&model, &table).unwrap();
        assert!(report.hypothesis_holds);
        assert!(report.all_checks_pass());
        assert_eq!(report.deg_a_hat, 3);
        assert_eq!(report.deg_b_hat, 3);
        assert_eq!(report.deg_t_hat, 3);
    }

    #[test]
    fn two_routes_to_the_conclusion_agree() {
        for table in [
            table_for(&["a", "t"]),
            table_for(&["a", "b", "t^2"]),
            table_for(&["a", "b", "t^3", "t a t^-1"]),
            mod3_kernel_table(),
        ] {
            let model = from_coset_table(&table).unwrap();
            let report = lemma3_full_check(&model, &table).unwrap();
            assert_eq!(report.all_vertices_on_a_hat, report.coset_reps_are_a_powers);
        }
    }

    #[test]
    fn wrong_presentation_is_rejected() {
        let b = builtin_b();
        let table = CosetTable::from_perms(
            &b,
            vec![Perm::identity(1), Perm::identity(1), Perm::identity(1)],
            Vec::new(),
        )
        .unwrap();
        assert_eq!(from_coset_table(&table), Err(Error::WrongPresentation));
        let _ = Arc::strong_count(&b);
    }
}
