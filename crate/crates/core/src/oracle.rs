//! Exhaustive enumeration of small groups by Cayley-table search, and the
//! comparison of the enumerated groups against the classification.
//!
//! The search fixes a labeling that every group admits: element `1` is an
//! element `g` of maximal order `m`, indices `0..m` are its powers, and index
//! `c·m + j` is `h_c·g^j` for coset representatives `h_c`. That determines
//! every product `x·g^i`, i.e. the first `m` columns. The remaining cells are
//! filled in row-major order with Latin-square and associativity propagation,
//! and partial power chains are checked against the order bound `m`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::classifier::{are_isomorphic, count_cyclic, families_up_to, paper_predicate, ClassLabel};
use crate::group::Group;
use crate::numtheory::divisors;

/// Default largest order [`enumerate_groups`] accepts.
pub const DEFAULT_ENUM_CAP: usize = 12;
/// Largest order the search supports at all.
pub const MAX_ENUM_ORDER: usize = 16;
/// Above this order enumeration is slow; callers should warn.
pub const SLOW_ENUM_ORDER: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {order} exceeds the enumeration cap of {cap}")]
    OrderTooLarge { order: usize, cap: usize },
    #[error("order must be at least 1")]
    ZeroOrder,
}

/// Knobs for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumConfig {
    /// Largest accepted order; at most [`MAX_ENUM_ORDER`].
    pub cap: usize,
    /// Worker threads; `1` runs everything on the calling thread.
    pub jobs: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { cap: DEFAULT_ENUM_CAP, jobs: 1 }
    }
}

impl EnumConfig {
    fn check(&self, n: usize) -> Result<(), OracleError> {
        let cap = self.cap.min(MAX_ENUM_ORDER);
        if n == 0 {
            Err(OracleError::ZeroOrder)
        } else if n > cap {
            Err(OracleError::OrderTooLarge { order: n, cap })
        } else {
            Ok(())
        }
    }

    fn pool(&self) -> rayon::ThreadPool {
        rayon::ThreadPoolBuilder::new().num_threads(self.jobs.max(1)).build().expect("thread pool")
    }
}

const UNKNOWN: u8 = u8::MAX;

/// Partial Cayley table with the bookkeeping needed for propagation.
#[derive(Clone)]
struct Search {
    n: usize,
    /// Bound on element orders (the order of element 1).
    max_order: usize,
    table: Vec<u8>,
    /// `row_pos[a·n + v]` is the column `b` with `a·b = v`.
    row_pos: Vec<u8>,
    /// `col_pos[b·n + v]` is the row `a` with `a·b = v`.
    col_pos: Vec<u8>,
    trail: Vec<(u8, u8)>,
    queue: Vec<(u8, u8)>,
}

impl Search {
    fn new(n: usize, m: usize) -> Option<Search> {
        let mut s = Search {
            n,
            max_order: m,
            table: vec![UNKNOWN; n * n],
            row_pos: vec![UNKNOWN; n * n],
            col_pos: vec![UNKNOWN; n * n],
            trail: Vec::new(),
            queue: Vec::new(),
        };
        for x in 0..n {
            let (coset, j) = (x / m, x % m);
            for i in 0..m {
                if !s.assign(x, i, coset * m + (j + i) % m) {
                    return None;
                }
            }
            if !s.assign(0, x, x) {
                return None;
            }
        }
        s.propagate().then_some(s)
    }

    #[inline]
    fn get(&self, a: usize, b: usize) -> Option<usize> {
        let v = self.table[a * self.n + b];
        (v != UNKNOWN).then_some(v as usize)
    }

    #[inline]
    fn right_of(&self, a: usize, v: usize) -> Option<usize> {
        let b = self.row_pos[a * self.n + v];
        (b != UNKNOWN).then_some(b as usize)
    }

    #[inline]
    fn left_of(&self, b: usize, v: usize) -> Option<usize> {
        let a = self.col_pos[b * self.n + v];
        (a != UNKNOWN).then_some(a as usize)
    }

    /// Records `a·b = v`; false on a Latin or consistency conflict.
    fn assign(&mut self, a: usize, b: usize, v: usize) -> bool {
        let n = self.n;
        if let Some(w) = self.get(a, b) {
            return w == v;
        }
        if self.row_pos[a * n + v] != UNKNOWN || self.col_pos[b * n + v] != UNKNOWN {
            return false;
        }
        self.table[a * n + b] = v as u8;
        self.row_pos[a * n + v] = b as u8;
        self.col_pos[b * n + v] = a as u8;
        self.trail.push((a as u8, b as u8));
        self.queue.push((a as u8, b as u8));
        true
    }

    fn undo_to(&mut self, mark: usize) {
        let n = self.n;
        while self.trail.len() > mark {
            let (a, b) = self.trail.pop().unwrap();
            let (a, b) = (a as usize, b as usize);
            let v = self.table[a * n + b] as usize;
            self.table[a * n + b] = UNKNOWN;
            self.row_pos[a * n + v] = UNKNOWN;
            self.col_pos[b * n + v] = UNKNOWN;
        }
        self.queue.clear();
    }

    /// Drains the queue, deriving new cells from associativity.
    fn propagate(&mut self) -> bool {
        let n = self.n;
        while let Some((a, b)) = self.queue.pop() {
            let (a, b) = (a as usize, b as usize);
            let c = self.get(a, b).unwrap();
            for x in 0..n {
                // (a·b)·x = a·(b·x)
                match (self.get(b, x), self.get(c, x)) {
                    (Some(v), Some(w)) => {
                        if !self.assign(a, v, w) {
                            return false;
                        }
                    }
                    (Some(v), None) => {
                        if let Some(w) = self.get(a, v) {
                            if !self.assign(c, x, w) {
                                return false;
                            }
                        }
                    }
                    (None, Some(w)) => {
                        if let Some(v) = self.right_of(a, w) {
                            if !self.assign(b, x, v) {
                                return false;
                            }
                        }
                    }
                    (None, None) => {}
                }
                // (x·a)·b = x·(a·b)
                match (self.get(x, a), self.get(x, c)) {
                    (Some(u), Some(w)) => {
                        if !self.assign(u, b, w) {
                            return false;
                        }
                    }
                    (Some(u), None) => {
                        if let Some(w) = self.get(u, b) {
                            if !self.assign(x, c, w) {
                                return false;
                            }
                        }
                    }
                    (None, Some(w)) => {
                        if let Some(u) = self.left_of(b, w) {
                            if !self.assign(x, a, u) {
                                return false;
                            }
                        }
                    }
                    (None, None) => {}
                }
                // a = x·q: (x·q)·b = x·(q·b) = c
                if let Some(q) = self.right_of(x, a) {
                    match self.get(q, b) {
                        Some(w) => {
                            if !self.assign(x, w, c) {
                                return false;
                            }
                        }
                        None => {
                            if let Some(w) = self.right_of(x, c) {
                                if !self.assign(q, b, w) {
                                    return false;
                                }
                            }
                        }
                    }
                }
                // b = q·x: (a·q)·x = a·(q·x) = c
                if let Some(q) = self.left_of(x, b) {
                    match self.get(a, q) {
                        Some(u) => {
                            if !self.assign(u, x, c) {
                                return false;
                            }
                        }
                        None => {
                            if let Some(u) = self.left_of(x, c) {
                                if !self.assign(a, q, u) {
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
        }
        self.orders_feasible()
    }

    /// Known prefixes of every power chain must close within `max_order` steps,
    /// at a length dividing `n`.
    fn orders_feasible(&self) -> bool {
        for a in 1..self.n {
            let mut x = a;
            let mut k = 1;
            loop {
                if x == 0 {
                    if !self.n.is_multiple_of(k) {
                        return false;
                    }
                    break;
                }
                if k >= self.max_order {
                    return false;
                }
                match self.get(x, a) {
                    Some(y) => {
                        x = y;
                        k += 1;
                    }
                    None => break,
                }
            }
        }
        true
    }

    fn next_cell(&self) -> Option<(usize, usize)> {
        self.table.iter().position(|&v| v == UNKNOWN).map(|i| (i / self.n, i % self.n))
    }

    fn candidates(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.right_of(a, v).is_none() && self.left_of(b, v).is_none()).collect()
    }

    /// Branch on `a·b = v`; leaves the state assigned and propagated on success.
    fn try_branch(&mut self, a: usize, b: usize, v: usize) -> bool {
        self.assign(a, b, v) && self.propagate()
    }

    fn to_group(&self) -> Option<Group> {
        let rows: Vec<Vec<usize>> =
            (0..self.n).map(|a| (0..self.n).map(|b| self.table[a * self.n + b] as usize).collect()).collect();
        Group::validate_cayley(&rows).ok()
    }
}

/// Isomorphism classes seen so far, keeping the first table found for each.
#[derive(Default)]
struct ClassCollector {
    reps: Vec<Group>,
}

impl ClassCollector {
    fn offer(&mut self, g: Group) {
        if !self.reps.iter().any(|r| are_isomorphic(r, &g)) {
            self.reps.push(g);
        }
    }

    fn merge(&mut self, other: ClassCollector) {
        for g in other.reps {
            self.offer(g);
        }
    }
}

fn dfs(state: &mut Search, out: &mut ClassCollector) {
    let Some((a, b)) = state.next_cell() else {
        if let Some(g) = state.to_group() {
            out.offer(g);
        }
        return;
    };
    for v in state.candidates(a, b) {
        let mark = state.trail.len();
        if state.try_branch(a, b, v) {
            dfs(state, out);
        }
        state.undo_to(mark);
    }
}

/// Expands the tree until `depth` free cells have been branched on, returning the frontier in DFS order.
fn frontier(root: Search, depth: usize) -> Vec<Search> {
    let mut level = vec![root];
    for _ in 0..depth {
        let mut next = Vec::new();
        for state in level {
            match state.next_cell() {
                None => next.push(state),
                Some((a, b)) => {
                    for v in state.candidates(a, b) {
                        let mut child = state.clone();
                        if child.try_branch(a, b, v) {
                            next.push(child);
                        }
                    }
                }
            }
        }
        level = next;
    }
    level
}

/// Subtree split depth for parallel runs.
const SPLIT_DEPTH: usize = 2;

pub fn enumerate_groups(n: usize) -> Result<Vec<Group>, OracleError> {
    enumerate_groups_with(n, &EnumConfig::default())
}

/// All groups of order `n` up to isomorphism, sorted by Cayley table.
pub fn enumerate_groups_with(n: usize, config: &EnumConfig) -> Result<Vec<Group>, OracleError> {
    config.check(n)?;
    if n == 1 {
        return Ok(vec![Group::from_flat_unchecked(1, &[0])]);
    }
    let mut collected = ClassCollector::default();
    for m in divisors(n).into_iter().rev().filter(|&m| m > 1) {
        let Some(root) = Search::new(n, m) else { continue };
        let tasks = frontier(root, SPLIT_DEPTH);
        let run = |mut s: Search| {
            let mut c = ClassCollector::default();
            dfs(&mut s, &mut c);
            c
        };
        let parts: Vec<ClassCollector> = if config.jobs > 1 {
            config.pool().install(|| tasks.into_par_iter().map(run).collect())
        } else {
            tasks.into_iter().map(run).collect()
        };
        for part in parts {
            collected.merge(part);
        }
    }
    let mut groups = collected.reps;
    groups.sort_by(|a, b| a.flat().cmp(b.flat()));
    Ok(groups)
}

/// One enumerated group with its cyclic-subgroup count and label.
#[derive(Debug, Clone)]
pub struct Entry {
    pub group: Group,
    pub count_cyclic: usize,
    pub label: ClassLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Mismatch {
    /// An enumerated group with at most five cyclic subgroups outside every family.
    PaperGap { entry: usize, cayley: Vec<Vec<usize>>, count_cyclic: usize, label: ClassLabel },
    /// A family of this order that no enumerated group matched.
    MissingFamily { family: ClassLabel },
}

#[derive(Debug, Clone)]
pub struct OrderReport {
    pub n: usize,
    pub entries: Vec<Entry>,
    pub mismatches: Vec<Mismatch>,
}

impl OrderReport {
    pub fn total_groups(&self) -> usize {
        self.entries.len()
    }
}

#[derive(Debug, Clone)]
pub struct DiffReport {
    pub max_order: usize,
    pub orders: Vec<OrderReport>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    cayley: Vec<Vec<usize>>,
    count_cyclic: usize,
    label: &'a ClassLabel,
}

#[derive(Serialize)]
struct OrderJson<'a> {
    n: usize,
    total_groups: usize,
    entries: Vec<EntryJson<'a>>,
    mismatches: &'a [Mismatch],
}

#[derive(Serialize)]
struct ReportJson<'a> {
    max_order: usize,
    orders: Vec<OrderJson<'a>>,
}

impl DiffReport {
    pub fn mismatches(&self) -> impl Iterator<Item = (usize, &Mismatch)> {
        self.orders.iter().flat_map(|o| o.mismatches.iter().map(move |m| (o.n, m)))
    }

    pub fn has_mismatches(&self) -> bool {
        self.mismatches().next().is_some()
    }

    pub fn to_json(&self) -> String {
        let doc = ReportJson {
            max_order: self.max_order,
            orders: self
                .orders
                .iter()
                .map(|o| OrderJson {
                    n: o.n,
                    total_groups: o.total_groups(),
                    entries: o
                        .entries
                        .iter()
                        .map(|e| EntryJson { cayley: e.group.rows(), count_cyclic: e.count_cyclic, label: &e.label })
                        .collect(),
                    mismatches: &o.mismatches,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable summary; not a stable format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>4}  {:>6}  {:>6}  label", "n", "groups", "|C(G)|").unwrap();
        for o in &self.orders {
            for (i, e) in o.entries.iter().enumerate() {
                let count = if i == 0 { o.total_groups().to_string() } else { String::new() };
                let n = if i == 0 { o.n.to_string() } else { String::new() };
                writeln!(out, "{n:>4}  {count:>6}  {:>6}  {}", e.count_cyclic, e.label).unwrap();
            }
        }
        let mismatches: Vec<_> = self.mismatches().collect();
        writeln!(out, "\nmismatches: {}", mismatches.len()).unwrap();
        for (n, m) in mismatches {
            match m {
                Mismatch::PaperGap { entry, count_cyclic, label, .. } => {
                    writeln!(out, "  order {n}, entry {entry}: {label} with |C(G)| = {count_cyclic}").unwrap()
                }
                Mismatch::MissingFamily { family } => writeln!(out, "  order {n}: family {family} not found").unwrap(),
            }
        }
        out
    }
}

fn analyze(groups: Vec<Group>, config: &EnumConfig) -> Vec<Entry> {
    let label_one = |group: Group| {
        let count_cyclic = count_cyclic(&group);
        let label = paper_predicate(&group);
        Entry { group, count_cyclic, label }
    };
    if config.jobs > 1 {
        config.pool().install(|| groups.into_par_iter().map(label_one).collect())
    } else {
        groups.into_iter().map(label_one).collect()
    }
}

pub fn verify_theorem(max_order: usize) -> Result<DiffReport, OracleError> {
    verify_theorem_with(max_order, &EnumConfig::default())
}

/// Enumerates every order up to `max_order` and compares against the family list in both directions.
pub fn verify_theorem_with(max_order: usize, config: &EnumConfig) -> Result<DiffReport, OracleError> {
    config.check(max_order)?;
    let families = families_up_to(max_order);
    let mut orders = Vec::new();
    for n in 1..=max_order {
        let entries = analyze(enumerate_groups_with(n, config)?, config);
        let mut mismatches: Vec<Mismatch> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| matches!(e.label, ClassLabel::PaperGap(_)))
            .map(|(i, e)| Mismatch::PaperGap {
                entry: i,
                cayley: e.group.rows(),
                count_cyclic: e.count_cyclic,
                label: e.label,
            })
            .collect();
        for family in families.iter().filter(|f| f.group_order() == Some(n)) {
            let reference = family.reference_group().expect("family reference");
            let found = entries.iter().any(|e| e.count_cyclic <= 5 && are_isomorphic(&e.group, &reference));
            if !found {
                mismatches.push(Mismatch::MissingFamily { family: *family });
            }
        }
        orders.push(OrderReport { n, entries, mismatches });
    }
    Ok(DiffReport { max_order, orders })
}

/// Enumerated groups of order at most `max_order` with exactly `count_target` cyclic subgroups.
pub fn lemma_sweep(count_target: usize, max_order: usize) -> Result<Vec<(Group, ClassLabel)>, OracleError> {
    lemma_sweep_with(count_target, max_order, &EnumConfig::default())
}

pub fn lemma_sweep_with(
    count_target: usize,
    max_order: usize,
    config: &EnumConfig,
) -> Result<Vec<(Group, ClassLabel)>, OracleError> {
    config.check(max_order)?;
    let mut out = Vec::new();
    for n in 1..=max_order {
        for e in analyze(enumerate_groups_with(n, config)?, config) {
            if e.count_cyclic == count_target {
                out.push((e.group, e.label));
            }
        }
    }
    Ok(out)
}

/// Family check for orders beyond exhaustive reach: builds each family's
/// representative and reports `(label, |C(G)|, label recovered by the predicate)`.
pub fn check_families_by_construction(labels: &[ClassLabel]) -> Vec<(ClassLabel, usize, ClassLabel)> {
    labels
        .iter()
        .filter_map(|l| {
            let g = l.reference_group()?;
            Some((*l, count_cyclic(&g), paper_predicate(&g)))
        })
        .collect()
}

/// Group counts per order, for quick summaries.
pub fn group_counts(max_order: usize, config: &EnumConfig) -> Result<BTreeMap<usize, usize>, OracleError> {
    (1..=max_order).map(|n| Ok((n, enumerate_groups_with(n, config)?.len()))).collect()
}
