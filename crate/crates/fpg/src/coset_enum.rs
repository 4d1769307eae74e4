//! Todd–Coxeter coset enumeration, HLT strategy.
//!
//! The enumerator scans every relator at every live coset, filling gaps by
//! defining new cosets, and processes coincidences eagerly through a
//! union-find queue. On success the table is compressed and renumbered
//! into canonical (breadth-first) form.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::words::{Presentation, SubgroupSpec, Word};

/// Resource bounds for one enumeration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    pub max_cosets: usize,
    pub max_steps: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_cosets: 100_000,
            max_steps: 10_000_000,
        }
    }
}

/// Order in which defining data is scanned; used to demonstrate that the
/// computed index does not depend on processing order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanStrategy {
    #[default]
    Standard,
    ReversedRelators,
}

/// A complete coset table: the right action of the generators on the
/// cosets of a finite-index subgroup, based at coset 0.
///
/// Tables compare and hash by degree and action only; the recorded
/// subgroup words are carried as provenance.
#[derive(Debug, Clone)]
pub struct CosetTable {
    source: Arc<Presentation>,
    degree: usize,
    action: Vec<Perm>,
    fixed_words: Vec<Word>,
}

impl PartialEq for CosetTable {
    fn eq(&self, other: &Self) -> bool {
        self.source.alphabet() == other.source.alphabet()
            && self.degree == other.degree
            && self.action == other.action
    }
}

impl Eq for CosetTable {}

impl std::hash::Hash for CosetTable {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.degree.hash(state);
        self.action.hash(state);
    }
}

impl PartialOrd for CosetTable {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CosetTable {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| self.action.cmp(&other.action))
    }
}

impl Serialize for CosetTable {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            degree: usize,
            basepoint: usize,
            generators: Vec<&'a str>,
            action: &'a [Perm],
        }
        Dto {
            degree: self.degree,
            basepoint: 0,
            generators: self
                .source
                .alphabet()
                .symbols()
                .iter()
                .map(|s| s.name.as_str())
                .collect(),
            action: &self.action,
        }
        .serialize(serializer)
    }
}

impl CosetTable {
    /// Builds a table from explicit generator permutations, verifying all
    /// table invariants. The numbering is kept as given; use
    /// [`CosetTable::canonicalized`] to renumber.
    pub fn from_perms(
        source: &Arc<Presentation>,
        action: Vec<Perm>,
        fixed_words: Vec<Word>,
    ) -> Result<CosetTable> {
        let degree = action.first().map(|p| p.degree()).unwrap_or(0);
        check_table_parts(
            source,
            degree,
            &action
                .iter()
                .map(|p| p.images().to_vec())
                .collect::<Vec<_>>(),
            &fixed_words,
        )?;
        Ok(CosetTable {
            source: Arc::clone(source),
            degree,
            action,
            fixed_words,
        })
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    /// The index of the subgroup.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn basepoint(&self) -> usize {
        0
    }

    pub fn action(&self) -> &[Perm] {
        &self.action
    }

    pub fn perm(&self, gen: usize) -> &Perm {
        &self.action[gen]
    }

    /// Words recorded as fixing the basepoint (subgroup generators for
    /// enumerated tables, search constraints for low-index output).
    pub fn fixed_words(&self) -> &[Word] {
        &self.fixed_words
    }

    pub fn with_fixed_words(mut self, fixed_words: Vec<Word>) -> CosetTable {
        self.fixed_words = fixed_words;
        self
    }

    /// Image of `start` under the right action of `w`.
    pub fn trace(&self, start: usize, w: &Word) -> Result<usize> {
        if w.alphabet() != self.source.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let mut coset = start;
        for s in w.syllables() {
            let perm = &self.action[s.gen];
            if s.exponent >= 0 {
                for _ in 0..s.exponent {
                    coset = perm.apply(coset);
                }
            } else {
                let inv = perm.inverse();
                for _ in 0..-s.exponent {
                    coset = inv.apply(coset);
                }
            }
        }
        Ok(coset)
    }

    /// Image of the basepoint under the right action of `w`.
    pub fn coset_of(&self, w: &Word) -> Result<usize> {
        self.trace(0, w)
    }

    /// Re-checks all table invariants from the raw data.
    pub fn verify(&self) -> bool {
        check_table_parts(
            &self.source,
            self.degree,
            &self
                .action
                .iter()
                .map(|p| p.images().to_vec())
                .collect::<Vec<_>>(),
            &self.fixed_words,
        )
        .is_ok()
    }

    /// The same subgroup with cosets renumbered in breadth-first discovery
    /// order (generators in alphabet order, inverses after positives).
    pub fn canonicalized(&self) -> CosetTable {
        let gens = self.action.len();
        let inverses: Vec<Perm> = self.action.iter().map(|p| p.inverse()).collect();
        let neighbor = |coset: usize, col: usize| -> usize {
            if col < gens {
                self.action[col].apply(coset)
            } else {
                inverses[col - gens].apply(coset)
            }
        };
        let renumber = bfs_renumbering(self.degree, 2 * gens, neighbor);
        let action = relabel_action(
            &self
                .action
                .iter()
                .map(|p| p.images().to_vec())
                .collect::<Vec<_>>(),
            &renumber,
        );
        CosetTable {
            source: Arc::clone(&self.source),
            degree: self.degree,
            action,
            fixed_words: self.fixed_words.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        self == &self.canonicalized()
    }
}

/// BFS renumbering of `{0..degree-1}` from 0, visiting columns in order.
/// Returns the map old index → new index.
pub(crate) fn bfs_renumbering(
    degree: usize,
    ncols: usize,
    neighbor: impl Fn(usize, usize) -> usize,
) -> Vec<usize> {
    let mut new_of = vec![usize::MAX; degree];
    let mut queue = VecDeque::new();
    new_of[0] = 0;
    queue.push_back(0);
    let mut next = 1;
    while let Some(coset) = queue.pop_front() {
        for col in 0..ncols {
            let image = neighbor(coset, col);
            if new_of[image] == usize::MAX {
                new_of[image] = next;
                next += 1;
                queue.push_back(image);
            }
        }
    }
    debug_assert_eq!(next, degree, "action must be transitive");
    new_of
}

pub(crate) fn relabel_action(action: &[Vec<usize>], new_of: &[usize]) -> Vec<Perm> {
    action
        .iter()
        .map(|images| {
            let mut relabeled = vec![0; images.len()];
            for (old, &image) in images.iter().enumerate() {
                relabeled[new_of[old]] = new_of[image];
            }
            Perm::new(relabeled).expect("relabeling a bijection")
        })
        .collect()
}

/// Validates raw table data against all four table invariants:
/// bijective per-generator actions, transitivity from the basepoint,
/// relator closure at every coset, and basepoint-fixing subgroup words.
pub fn check_table_parts(
    source: &Arc<Presentation>,
    degree: usize,
    action: &[Vec<usize>],
    fixed_words: &[Word],
) -> Result<()> {
    if degree == 0 {
        return Err(Error::InvalidTable("degree must be positive".into()));
    }
    if action.len() != source.generator_count() {
        return Err(Error::InvalidTable(
            "one permutation required per generator".into(),
        ));
    }
    let mut perms = Vec::with_capacity(action.len());
    for images in action {
        if images.len() != degree {
            return Err(Error::InvalidTable("permutation degree mismatch".into()));
        }
        let perm = Perm::new(images.clone())
            .ok_or_else(|| Error::InvalidTable("generator action is not a bijection".into()))?;
        perms.push(perm);
    }

    // Transitivity from the basepoint.
    let mut seen = vec![false; degree];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    let inverses: Vec<Perm> = perms.iter().map(|p| p.inverse()).collect();
    while let Some(coset) = queue.pop_front() {
        for p in perms.iter().chain(inverses.iter()) {
            let image = p.apply(coset);
            if !seen[image] {
                seen[image] = true;
                count += 1;
                queue.push_back(image);
            }
        }
    }
    if count != degree {
        return Err(Error::InvalidTable("action is not transitive".into()));
    }

    let trace = |start: usize, w: &Word| -> Result<usize> {
        let mut coset = start;
        for l in w.letters() {
            coset = if l.inverse {
                inverses[l.gen].apply(coset)
            } else {
                perms[l.gen].apply(coset)
            };
        }
        Ok(coset)
    };

    for relator in source.relators() {
        for start in 0..degree {
            if trace(start, relator)? != start {
                return Err(Error::InvalidTable(format!(
                    "relator `{relator}` does not close at coset {start}"
                )));
            }
        }
    }
    for w in fixed_words {
        if w.alphabet() != source.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        if trace(0, w)? != 0 {
            return Err(Error::InvalidTable(format!(
                "word `{w}` does not fix the basepoint"
            )));
        }
    }
    Ok(())
}

/// Outcome of an enumeration: either the subgroup has index within the
/// limits and the complete table is returned, or the limits were
/// exhausted and nothing is known (the index may be finite but large, or
/// infinite).
#[derive(Debug, Clone)]
pub enum Enumeration {
    Complete(CosetTable),
    Overflow(OverflowInfo),
}

#[derive(Debug, Clone, Serialize)]
pub struct OverflowInfo {
    pub cosets_defined: usize,
    pub live_cosets: usize,
    pub steps: usize,
}

impl Enumeration {
    pub fn complete(self) -> Option<CosetTable> {
        match self {
            Enumeration::Complete(t) => Some(t),
            Enumeration::Overflow(_) => None,
        }
    }
}

/// Computes the coset table of `⟨sub⟩` in the group `pres` presents,
/// within the given limits.
pub fn enumerate_cosets(
    pres: &Arc<Presentation>,
    sub: &SubgroupSpec,
    limits: EnumerationLimits,
) -> Result<Enumeration> {
    enumerate_cosets_with(pres, sub, limits, ScanStrategy::Standard)
}

pub fn enumerate_cosets_with(
    pres: &Arc<Presentation>,
    sub: &SubgroupSpec,
    limits: EnumerationLimits,
    strategy: ScanStrategy,
) -> Result<Enumeration> {
    if sub.ambient().alphabet() != pres.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let gens = pres.generator_count();
    let mut machine = Machine::new(gens, limits);

    let mut relators: Vec<Vec<usize>> =
        pres.relators().iter().map(|w| word_cols(w, gens)).collect();
    let mut subgroup_words: Vec<Vec<usize>> = sub
        .generators()
        .iter()
        .map(|w| word_cols(w, gens))
        .collect();
    if strategy == ScanStrategy::ReversedRelators {
        relators.reverse();
        subgroup_words.reverse();
    }

    for w in &subgroup_words {
        if machine.scan_and_fill(0, w).is_err() {
            return Ok(Enumeration::Overflow(machine.overflow_info()));
        }
    }
    let mut coset = 0;
    while coset < machine.rows.len() {
        if machine.alive(coset) {
            for r in &relators {
                if !machine.alive(coset) {
                    break;
                }
                if machine.scan_and_fill(coset, r).is_err() {
                    return Ok(Enumeration::Overflow(machine.overflow_info()));
                }
            }
            if machine.alive(coset) {
                for col in 0..machine.ncols {
                    if machine.rows[coset][col].is_none() && machine.define(coset, col).is_err() {
                        return Ok(Enumeration::Overflow(machine.overflow_info()));
                    }
                }
            }
        }
        coset += 1;
    }

    let action = machine.compress();
    let table = CosetTable {
        source: Arc::clone(pres),
        degree: action[0].len(),
        action: action
            .iter()
            .map(|images| Perm::new(images.clone()).expect("closed table rows are bijections"))
            .collect(),
        fixed_words: sub.generators().to_vec(),
    }
    .canonicalized();
    debug_assert!(table.verify());
    Ok(Enumeration::Complete(table))
}

/// Encodes a word as a column sequence: column `g` is generator `g`,
/// column `gens + g` its inverse.
pub(crate) fn word_cols(w: &Word, gens: usize) -> Vec<usize> {
    w.letters()
        .map(|l| if l.inverse { gens + l.gen } else { l.gen })
        .collect()
}

struct Overflowed;

struct Machine {
    ncols: usize,
    gens: usize,
    rows: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    dead_queue: VecDeque<usize>,
    steps: usize,
    limits: EnumerationLimits,
}

impl Machine {
    fn new(gens: usize, limits: EnumerationLimits) -> Machine {
        Machine {
            ncols: 2 * gens,
            gens,
            rows: vec![vec![None; 2 * gens]],
            parent: vec![0],
            dead_queue: VecDeque::new(),
            steps: 0,
            limits,
        }
    }

    fn inv(&self, col: usize) -> usize {
        (col + self.gens) % self.ncols
    }

    fn alive(&self, coset: usize) -> bool {
        self.parent[coset] == coset
    }

    fn rep(&mut self, coset: usize) -> usize {
        let mut root = coset;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = coset;
        while cur != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn step(&mut self) -> std::result::Result<(), Overflowed> {
        self.steps += 1;
        if self.steps > self.limits.max_steps {
            return Err(Overflowed);
        }
        Ok(())
    }

    fn set(&mut self, a: usize, col: usize, b: usize) {
        let back = self.inv(col);
        self.rows[a][col] = Some(b);
        self.rows[b][back] = Some(a);
    }

    fn define(&mut self, coset: usize, col: usize) -> std::result::Result<usize, Overflowed> {
        if self.rows.len() >= self.limits.max_cosets {
            return Err(Overflowed);
        }
        self.step()?;
        let fresh = self.rows.len();
        self.rows.push(vec![None; self.ncols]);
        self.parent.push(fresh);
        self.set(coset, col, fresh);
        Ok(fresh)
    }

    fn merge(&mut self, a: usize, b: usize) {
        let ra = self.rep(a);
        let rb = self.rep(b);
        if ra != rb {
            let keep = ra.min(rb);
            let drop = ra.max(rb);
            self.parent[drop] = keep;
            self.dead_queue.push_back(drop);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.merge(a, b);
        while let Some(dead) = self.dead_queue.pop_front() {
            for col in 0..self.ncols {
                let Some(nbr) = self.rows[dead][col] else {
                    continue;
                };
                // Remove the neighbor's pointer back to the dead coset,
                // then re-record the edge between representatives.
                let back = self.inv(col);
                self.rows[nbr][back] = None;
                let dead_rep = self.rep(dead);
                let nbr_rep = self.rep(nbr);
                if let Some(existing) = self.rows[dead_rep][col] {
                    self.merge(nbr_rep, existing);
                } else if let Some(existing) = self.rows[nbr_rep][back] {
                    self.merge(dead_rep, existing);
                } else {
                    self.set(dead_rep, col, nbr_rep);
                }
            }
        }
    }

    fn scan_and_fill(
        &mut self,
        start: usize,
        word: &[usize],
    ) -> std::result::Result<(), Overflowed> {
        if word.is_empty() {
            return Ok(());
        }
        let mut lv = start;
        let mut rv = start;
        let mut lp = 0;
        let mut rp = word.len();
        loop {
            while lp < rp {
                match self.rows[lv][word[lp]] {
                    Some(next) => {
                        lv = next;
                        lp += 1;
                        self.step()?;
                    }
                    None => break,
                }
            }
            if lp == rp {
                if lv != rv {
                    self.coincidence(lv, rv);
                }
                return Ok(());
            }
            while rp > lp {
                let back = self.inv(word[rp - 1]);
                match self.rows[rv][back] {
                    Some(next) => {
                        rv = next;
                        rp -= 1;
                        self.step()?;
                    }
                    None => break,
                }
            }
            if rp == lp {
                if lv != rv {
                    self.coincidence(lv, rv);
                }
                return Ok(());
            }
            if rp == lp + 1 {
                // One gap: the entry is forced.
                self.set(lv, word[lp], rv);
                self.step()?;
                return Ok(());
            }
            self.define(lv, word[lp])?;
        }
    }

    fn overflow_info(&mut self) -> OverflowInfo {
        let live = (0..self.parent.len()).filter(|&i| self.alive(i)).count();
        OverflowInfo {
            cosets_defined: self.rows.len(),
            live_cosets: live,
            steps: self.steps,
        }
    }

    /// Drops dead cosets and returns the per-generator image vectors.
    fn compress(&mut self) -> Vec<Vec<usize>> {
        let mut new_of = vec![usize::MAX; self.rows.len()];
        let mut next = 0;
        for coset in 0..self.rows.len() {
            if self.alive(coset) {
                new_of[coset] = next;
                next += 1;
            }
        }
        let mut action = vec![vec![0; next]; self.gens];
        for coset in 0..self.rows.len() {
            if !self.alive(coset) {
                continue;
            }
            for gen in 0..self.gens {
                let image = self.rows[coset][gen].expect("complete table");
                let image = self.rep(image);
                action[gen][new_of[coset]] = new_of[image];
            }
        }
        action
    }
}
