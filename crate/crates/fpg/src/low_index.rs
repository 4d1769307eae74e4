//! Enumeration of all subgroups of index ≤ N by backtracking over
//! partial coset tables.
//!
//! Cells are filled in (coset, column) scan order with candidate images
//! tried in ascending order and a new coset last. New cosets therefore
//! appear in breadth-first discovery order, so every completed table is
//! already in canonical form and each subgroup is produced exactly once.
//! Forced entries are propagated from relator scans; a scan that closes
//! inconsistently kills the branch (the collapsed table is found on
//! another branch). Words required to lie in the subgroup are scanned as
//! equations anchored at the basepoint, which both prunes and deduces.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::coset_enum::{check_table_parts, word_cols, CosetTable};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::words::{Presentation, Word};

/// What to search for: every subgroup of index ≤ `max_index` containing
/// all of `must_contain`.
#[derive(Debug, Clone)]
pub struct SearchConstraint {
    pub must_contain: Vec<Word>,
    pub max_index: usize,
}

impl SearchConstraint {
    pub fn unconstrained(max_index: usize) -> SearchConstraint {
        SearchConstraint {
            must_contain: Vec::new(),
            max_index,
        }
    }

    pub fn containing(must_contain: Vec<Word>, max_index: usize) -> SearchConstraint {
        SearchConstraint {
            must_contain,
            max_index,
        }
    }
}

/// Search resources: a branch-node budget and a worker count.
#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    pub max_nodes: u64,
    pub threads: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_nodes: 50_000_000,
            threads: 1,
        }
    }
}

/// All subgroups found, sorted by (degree, canonical table).
#[derive(Debug, Clone)]
pub struct SubgroupList {
    pub tables: Vec<CosetTable>,
    /// False when the node budget ran out; the list may then be partial.
    pub complete: bool,
    pub nodes: u64,
}

impl Serialize for SubgroupList {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Dto<'a> {
            count: usize,
            complete: bool,
            nodes: u64,
            tables: &'a [CosetTable],
        }
        Dto {
            count: self.tables.len(),
            complete: self.complete,
            nodes: self.nodes,
            tables: &self.tables,
        }
        .serialize(serializer)
    }
}

/// True iff the word fixes the basepoint of the table.
pub fn subgroup_contains(table: &CosetTable, w: &Word) -> Result<bool> {
    Ok(table.coset_of(w)? == 0)
}

/// Enumerates every subgroup of index ≤ `constraint.max_index` of the
/// group `pres` presents that contains all `must_contain` words, with
/// default resources.
pub fn low_index_subgroups(
    pres: &Arc<Presentation>,
    constraint: &SearchConstraint,
) -> Result<SubgroupList> {
    low_index_subgroups_with(pres, constraint, &SearchOptions::default())
}

pub fn low_index_subgroups_with(
    pres: &Arc<Presentation>,
    constraint: &SearchConstraint,
    options: &SearchOptions,
) -> Result<SubgroupList> {
    if constraint.max_index == 0 {
        return Err(Error::InvalidTable("max_index must be positive".into()));
    }
    for w in &constraint.must_contain {
        if w.alphabet() != pres.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
    }
    let gens = pres.generator_count();
    let engine = Engine {
        gens,
        ncols: 2 * gens,
        max_index: constraint.max_index,
        relators: pres.relators().iter().map(|w| word_cols(w, gens)).collect(),
        constraints: constraint
            .must_contain
            .iter()
            .map(|w| word_cols(w, gens))
            .filter(|cols| !cols.is_empty())
            .collect(),
        nodes: AtomicU64::new(0),
        max_nodes: options.max_nodes,
        exhausted: AtomicBool::new(false),
    };

    let threads = options.threads.max(1);
    let mut completed: Vec<Vec<Vec<usize>>> = Vec::new();
    let initial = State::initial(engine.ncols);

    // Expand a frontier of pending states, then split it over workers.
    // The explored tree is the same for every worker count, so complete
    // runs are schedule-independent.
    let mut frontier = vec![initial];
    let target = if threads == 1 { 1 } else { 8 * threads };
    while frontier.len() < target {
        let Some(pos) = frontier.iter().position(|s| s.first_undefined().is_some()) else {
            break;
        };
        let state = frontier.remove(pos);
        let (children, done) = engine.expand(state);
        completed.extend(done);
        if engine.exhausted.load(Ordering::Relaxed) {
            break;
        }
        frontier.extend(children);
    }

    if threads == 1 || frontier.len() <= 1 {
        for mut state in frontier {
            engine.search(&mut state, &mut completed);
        }
    } else {
        let chunks: Vec<Vec<State>> = {
            let mut chunks: Vec<Vec<State>> = (0..threads).map(|_| Vec::new()).collect();
            for (i, state) in frontier.into_iter().enumerate() {
                chunks[i % threads].push(state);
            }
            chunks
        };
        let results: Vec<Vec<Vec<Vec<usize>>>> = std::thread::scope(|scope| {
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    let engine = &engine;
                    scope.spawn(move || {
                        let mut local = Vec::new();
                        for mut state in chunk {
                            engine.search(&mut state, &mut local);
                        }
                        local
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        for r in results {
            completed.extend(r);
        }
    }

    let mut tables: Vec<CosetTable> = completed
        .into_iter()
        .map(|action| {
            let perms: Vec<Perm> = action
                .into_iter()
                .map(|images| Perm::new(images).expect("completed rows are bijections"))
                .collect();
            let table = CosetTable::from_perms(pres, perms, constraint.must_contain.clone())
                .expect("search output satisfies the table invariants");
            debug_assert!(table.is_canonical());
            table
        })
        .collect();
    tables.sort();
    tables.dedup();
    Ok(SubgroupList {
        tables,
        complete: !engine.exhausted.load(Ordering::Relaxed),
        nodes: engine.nodes.load(Ordering::Relaxed),
    })
}

#[derive(Debug, Clone)]
struct State {
    rows: Vec<Vec<Option<usize>>>,
    trail: Vec<(usize, usize)>,
}

impl State {
    fn initial(ncols: usize) -> State {
        State {
            rows: vec![vec![None; ncols]],
            trail: Vec::new(),
        }
    }

    fn n(&self) -> usize {
        self.rows.len()
    }

    fn first_undefined(&self) -> Option<(usize, usize)> {
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(col) = row.iter().position(|c| c.is_none()) {
                return Some((i, col));
            }
        }
        None
    }

    fn set(&mut self, i: usize, col: usize, j: usize, inv_col: usize) {
        self.rows[i][col] = Some(j);
        self.trail.push((i, col));
        self.rows[j][inv_col] = Some(i);
        self.trail.push((j, inv_col));
    }

    fn mark(&self) -> (usize, usize) {
        (self.trail.len(), self.rows.len())
    }

    fn rewind(&mut self, mark: (usize, usize)) {
        while self.trail.len() > mark.0 {
            let (i, col) = self.trail.pop().unwrap();
            self.rows[i][col] = None;
        }
        self.rows.truncate(mark.1);
    }
}

enum Scan {
    Fine,
    Violation,
    Deduce(usize, usize, usize),
}

struct Engine {
    gens: usize,
    ncols: usize,
    max_index: usize,
    relators: Vec<Vec<usize>>,
    constraints: Vec<Vec<usize>>,
    nodes: AtomicU64,
    max_nodes: u64,
    exhausted: AtomicBool,
}

impl Engine {
    fn inv(&self, col: usize) -> usize {
        (col + self.gens) % self.ncols
    }

    fn charge_node(&self) -> bool {
        if self.nodes.fetch_add(1, Ordering::Relaxed) >= self.max_nodes {
            self.exhausted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    /// Scans `word` as the equation `start · word = start` over the
    /// partial table.
    fn scan(&self, state: &State, start: usize, word: &[usize]) -> Scan {
        let mut lv = start;
        let mut lp = 0;
        let len = word.len();
        while lp < len {
            match state.rows[lv][word[lp]] {
                Some(next) => {
                    lv = next;
                    lp += 1;
                }
                None => break,
            }
        }
        if lp == len {
            return if lv == start {
                Scan::Fine
            } else {
                Scan::Violation
            };
        }
        let mut rv = start;
        let mut rp = len;
        while rp > lp {
            match state.rows[rv][self.inv(word[rp - 1])] {
                Some(next) => {
                    rv = next;
                    rp -= 1;
                }
                None => break,
            }
        }
        if rp == lp {
            // Both ends met over defined entries with the forward cell
            // open, so the two sides disagree in every completion.
            return Scan::Violation;
        }
        if rp == lp + 1 {
            return Scan::Deduce(lv, word[lp], rv);
        }
        Scan::Fine
    }

    /// Applies forced entries until a fixed point; false kills the branch.
    fn propagate(&self, state: &mut State) -> bool {
        loop {
            let mut changed = false;
            for i in 0..state.n() {
                for r in &self.relators {
                    match self.scan(state, i, r) {
                        Scan::Violation => return false,
                        Scan::Deduce(x, col, y) => {
                            state.set(x, col, y, self.inv(col));
                            changed = true;
                        }
                        Scan::Fine => {}
                    }
                }
            }
            for c in &self.constraints {
                match self.scan(state, 0, c) {
                    Scan::Violation => return false,
                    Scan::Deduce(x, col, y) => {
                        state.set(x, col, y, self.inv(col));
                        changed = true;
                    }
                    Scan::Fine => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn candidates(&self, state: &State, col: usize) -> Vec<usize> {
        let inv_col = self.inv(col);
        let mut candidates: Vec<usize> = (0..state.n())
            .filter(|&j| state.rows[j][inv_col].is_none())
            .collect();
        if state.n() < self.max_index {
            candidates.push(state.n());
        }
        candidates
    }

    /// One level of branching, cloning children (used to build the
    /// parallel frontier). Returns surviving children and any tables
    /// completed at this node.
    fn expand(&self, state: State) -> (Vec<State>, Vec<Vec<Vec<usize>>>) {
        let Some((i, col)) = state.first_undefined() else {
            return (Vec::new(), vec![self.extract(&state)]);
        };
        let mut children = Vec::new();
        for j in self.candidates(&state, col) {
            if !self.charge_node() {
                break;
            }
            let mut child = state.clone();
            if j == child.n() {
                child.rows.push(vec![None; self.ncols]);
            }
            child.set(i, col, j, self.inv(col));
            if self.propagate(&mut child) {
                child.trail.clear();
                children.push(child);
            }
        }
        (children, Vec::new())
    }

    /// Depth-first search with trail-based undo.
    fn search(&self, state: &mut State, out: &mut Vec<Vec<Vec<usize>>>) {
        if self.exhausted.load(Ordering::Relaxed) {
            return;
        }
        let Some((i, col)) = state.first_undefined() else {
            out.push(self.extract(state));
            return;
        };
        for j in self.candidates(state, col) {
            if !self.charge_node() {
                return;
            }
            let mark = state.mark();
            if j == state.n() {
                state.rows.push(vec![None; self.ncols]);
            }
            state.set(i, col, j, self.inv(col));
            if self.propagate(state) {
                self.search(state, out);
            }
            state.rewind(mark);
        }
    }

    fn extract(&self, state: &State) -> Vec<Vec<usize>> {
        (0..self.gens)
            .map(|g| {
                state
                    .rows
                    .iter()
                    .map(|row| row[g].expect("complete table"))
                    .collect()
            })
            .collect()
    }
}

/// Exhaustively enumerates subgroups of index ≤ `max_index` from raw
/// permutation tuples: every assignment of a degree-d permutation to each
/// generator that satisfies the relators and acts transitively is a
/// subgroup (the stabilizer of 0), reduced to canonical form for
/// deduplication. An independent oracle for `low_index_subgroups`;
/// feasible only for small bounds.
pub fn brute_force_subgroups(pres: &Arc<Presentation>, max_index: usize) -> Result<SubgroupList> {
    if max_index == 0 || max_index > 5 {
        return Err(Error::InvalidTable(
            "brute force is for small bounds only".into(),
        ));
    }
    let gens = pres.generator_count();
    let relator_letters: Vec<Vec<(usize, bool)>> = pres
        .relators()
        .iter()
        .map(|w| w.letters().map(|l| (l.gen, l.inverse)).collect())
        .collect();

    let mut found: BTreeSet<CosetTable> = BTreeSet::new();
    let mut examined: u64 = 0;
    for degree in 1..=max_index {
        let perms = all_perms(degree);
        let mut choice = vec![0usize; gens];
        loop {
            examined += 1;
            let action: Vec<&Vec<usize>> = choice.iter().map(|&c| &perms[c]).collect();
            if satisfies_relators(&action, &relator_letters, degree) && transitive(&action, degree)
            {
                let table = CosetTable::from_perms(
                    pres,
                    action
                        .iter()
                        .map(|images| Perm::new((*images).clone()).unwrap())
                        .collect(),
                    Vec::new(),
                )?;
                found.insert(table.canonicalized());
            }
            // Advance the odometer over permutation tuples.
            let mut pos = 0;
            loop {
                if pos == gens {
                    break;
                }
                choice[pos] += 1;
                if choice[pos] < perms.len() {
                    break;
                }
                choice[pos] = 0;
                pos += 1;
            }
            if pos == gens {
                break;
            }
        }
    }
    Ok(SubgroupList {
        tables: found.into_iter().collect(),
        complete: true,
        nodes: examined,
    })
}

fn all_perms(degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..degree).collect();
    permute(&mut items, 0, &mut out);
    out.sort();
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

fn satisfies_relators(
    action: &[&Vec<usize>],
    relators: &[Vec<(usize, bool)>],
    degree: usize,
) -> bool {
    let inverses: Vec<Vec<usize>> = action
        .iter()
        .map(|images| {
            let mut inv = vec![0; degree];
            for (i, &j) in images.iter().enumerate() {
                inv[j] = i;
            }
            inv
        })
        .collect();
    relators.iter().all(|relator| {
        (0..degree).all(|start| {
            let mut point = start;
            for &(gen, inverse) in relator {
                point = if inverse {
                    inverses[gen][point]
                } else {
                    action[gen][point]
                };
            }
            point == start
        })
    })
}

fn transitive(action: &[&Vec<usize>], degree: usize) -> bool {
    let mut seen = vec![false; degree];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(point) = stack.pop() {
        for images in action {
            let next = images[point];
            if !seen[next] {
                seen[next] = true;
                count += 1;
                stack.push(next);
            }
        }
        // Inverse edges are redundant for reachability over bijections on
        // a finite set only when orbits are cycles; include them.
        for images in action {
            let prev = images.iter().position(|&x| x == point).unwrap();
            if !seen[prev] {
                seen[prev] = true;
                count += 1;
                stack.push(prev);
            }
        }
    }
    count == degree
}

/// Re-checks a [`SubgroupList`]'s own invariants: sortedness, no
/// duplicates, valid tables, and constraint containment.
pub fn verify_subgroup_list(
    pres: &Arc<Presentation>,
    list: &SubgroupList,
    constraint: &SearchConstraint,
) -> Result<()> {
    for pair in list.tables.windows(2) {
        if pair[0] >= pair[1] {
            return Err(Error::InvalidTable("list is not strictly sorted".into()));
        }
    }
    for table in &list.tables {
        check_table_parts(
            pres,
            table.degree(),
            &table
                .action()
                .iter()
                .map(|p| p.images().to_vec())
                .collect::<Vec<_>>(),
            table.fixed_words(),
        )?;
        if table.degree() > constraint.max_index {
            return Err(Error::InvalidTable("degree exceeds the bound".into()));
        }
        for w in &constraint.must_contain {
            if !subgroup_contains(table, w)? {
                return Err(Error::InvalidTable(format!(
                    "constraint word `{w}` not contained"
                )));
            }
        }
    }
    Ok(())
}
