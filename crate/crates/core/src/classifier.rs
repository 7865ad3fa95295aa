//! Isomorphism testing and the classification of groups with at most five
//! cyclic subgroups.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::constructions::{cyclic, direct_product, generalized_quaternion, symmetric};
use crate::group::{Elem, Group};
use crate::numtheory::{factorize, is_prime};
use crate::subgroups::{cyclic_subgroups, generated_subgroup};

/// Classification outcome for a single group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassLabel {
    Trivial,
    PrimeCyclic(usize),
    CyclicPSquared(usize),
    CyclicPCubed(usize),
    CyclicPFourth(usize),
    /// Cyclic of order `p·q`, stored with `p < q`.
    CyclicPQ(usize, usize),
    Sym3,
    Quaternion8,
    ElemAbelian3x3,
    /// More than five cyclic subgroups; carries the count.
    Outside(usize),
    /// At most five cyclic subgroups, but none of the listed families; carries the count.
    PaperGap(usize),
}

impl ClassLabel {
    /// Number of cyclic subgroups every member of the family has.
    pub fn predicted_count(&self) -> Option<usize> {
        match self {
            ClassLabel::Trivial => Some(1),
            ClassLabel::PrimeCyclic(_) => Some(2),
            ClassLabel::CyclicPSquared(_) => Some(3),
            ClassLabel::CyclicPCubed(_) | ClassLabel::CyclicPQ(..) => Some(4),
            ClassLabel::CyclicPFourth(_) | ClassLabel::Sym3 | ClassLabel::Quaternion8 | ClassLabel::ElemAbelian3x3 => {
                Some(5)
            }
            ClassLabel::Outside(_) | ClassLabel::PaperGap(_) => None,
        }
    }

    pub fn is_family(&self) -> bool {
        self.predicted_count().is_some()
    }

    /// Order of the family's groups, if this is a concrete family.
    pub fn group_order(&self) -> Option<usize> {
        match *self {
            ClassLabel::Trivial => Some(1),
            ClassLabel::PrimeCyclic(p) => Some(p),
            ClassLabel::CyclicPSquared(p) => p.checked_pow(2),
            ClassLabel::CyclicPCubed(p) => p.checked_pow(3),
            ClassLabel::CyclicPFourth(p) => p.checked_pow(4),
            ClassLabel::CyclicPQ(p, q) => p.checked_mul(q),
            ClassLabel::Sym3 => Some(6),
            ClassLabel::Quaternion8 => Some(8),
            ClassLabel::ElemAbelian3x3 => Some(9),
            ClassLabel::Outside(_) | ClassLabel::PaperGap(_) => None,
        }
    }

    /// A freshly built representative of the family.
    pub fn reference_group(&self) -> Option<Group> {
        let g = match *self {
            ClassLabel::Sym3 => symmetric(3),
            ClassLabel::Quaternion8 => generalized_quaternion(8),
            ClassLabel::ElemAbelian3x3 => {
                let c3 = cyclic(3).expect("C3");
                direct_product(&c3, &c3)
            }
            ClassLabel::Outside(_) | ClassLabel::PaperGap(_) => return None,
            _ => cyclic(self.group_order()?),
        };
        g.ok()
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassLabel::Trivial => write!(f, "TRIVIAL"),
            ClassLabel::PrimeCyclic(p) => write!(f, "C_p(p={p})"),
            ClassLabel::CyclicPSquared(p) => write!(f, "C_p^2(p={p})"),
            ClassLabel::CyclicPCubed(p) => write!(f, "C_p^3(p={p})"),
            ClassLabel::CyclicPFourth(p) => write!(f, "C_p^4(p={p})"),
            ClassLabel::CyclicPQ(p, q) => write!(f, "C_pq(p={p},q={q})"),
            ClassLabel::Sym3 => write!(f, "S3"),
            ClassLabel::Quaternion8 => write!(f, "Q8"),
            ClassLabel::ElemAbelian3x3 => write!(f, "C3xC3"),
            ClassLabel::Outside(n) => write!(f, "OUTSIDE(n={n})"),
            ClassLabel::PaperGap(n) => write!(f, "PAPER_GAP(n={n})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unrecognized class label {0:?}")]
pub struct ParseLabelError(String);

impl FromStr for ClassLabel {
    type Err = ParseLabelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseLabelError(s.to_string());
        let arg = |prefix: &str, key: &str| -> Option<usize> {
            s.strip_prefix(prefix)?.strip_prefix(key)?.strip_suffix(')')?.parse().ok()
        };
        let label = match s {
            "TRIVIAL" => ClassLabel::Trivial,
            "S3" => ClassLabel::Sym3,
            "Q8" => ClassLabel::Quaternion8,
            "C3xC3" => ClassLabel::ElemAbelian3x3,
            _ if s.starts_with("C_pq(") => {
                let inner = s.strip_prefix("C_pq(p=").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
                let (p, q) = inner.split_once(",q=").ok_or_else(bad)?;
                ClassLabel::CyclicPQ(p.parse().map_err(|_| bad())?, q.parse().map_err(|_| bad())?)
            }
            _ => {
                if let Some(p) = arg("C_p^2(", "p=") {
                    ClassLabel::CyclicPSquared(p)
                } else if let Some(p) = arg("C_p^3(", "p=") {
                    ClassLabel::CyclicPCubed(p)
                } else if let Some(p) = arg("C_p^4(", "p=") {
                    ClassLabel::CyclicPFourth(p)
                } else if let Some(p) = arg("C_p(", "p=") {
                    ClassLabel::PrimeCyclic(p)
                } else if let Some(n) = arg("OUTSIDE(", "n=") {
                    ClassLabel::Outside(n)
                } else if let Some(n) = arg("PAPER_GAP(", "n=") {
                    ClassLabel::PaperGap(n)
                } else {
                    return Err(bad());
                }
            }
        };
        Ok(label)
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Every concrete family label whose groups have order at most `max_order`.
pub fn families_up_to(max_order: usize) -> Vec<ClassLabel> {
    let primes: Vec<usize> = (2..=max_order).filter(|&p| is_prime(p)).collect();
    let mut out = vec![ClassLabel::Trivial];
    for &p in &primes {
        out.push(ClassLabel::PrimeCyclic(p));
        out.push(ClassLabel::CyclicPSquared(p));
        out.push(ClassLabel::CyclicPCubed(p));
        out.push(ClassLabel::CyclicPFourth(p));
        for &q in primes.iter().filter(|&&q| q > p) {
            out.push(ClassLabel::CyclicPQ(p, q));
        }
    }
    out.extend([ClassLabel::Sym3, ClassLabel::Quaternion8, ClassLabel::ElemAbelian3x3]);
    out.retain(|l| l.group_order().is_some_and(|n| n <= max_order));
    out.sort_by_key(|l| (l.group_order(), *l));
    out
}

/// `|C(G)|`.
pub fn count_cyclic(g: &Group) -> usize {
    cyclic_subgroups(g).len()
}

/// Labels a group: `Outside` above five cyclic subgroups, otherwise the first
/// family of matching order it is isomorphic to, or `PaperGap` if none.
pub fn paper_predicate(g: &Group) -> ClassLabel {
    let count = count_cyclic(g);
    if count > 5 {
        return ClassLabel::Outside(count);
    }
    candidate_families(g.order())
        .into_iter()
        .find(|label| label.reference_group().is_some_and(|reference| are_isomorphic(g, &reference)))
        .unwrap_or(ClassLabel::PaperGap(count))
}

fn candidate_families(n: usize) -> Vec<ClassLabel> {
    match factorize(n).as_slice() {
        [] => vec![ClassLabel::Trivial],
        [(p, 1)] => vec![ClassLabel::PrimeCyclic(*p)],
        [(p, 2)] if *p == 3 => vec![ClassLabel::CyclicPSquared(3), ClassLabel::ElemAbelian3x3],
        [(p, 2)] => vec![ClassLabel::CyclicPSquared(*p)],
        [(p, 3)] if *p == 2 => vec![ClassLabel::CyclicPCubed(2), ClassLabel::Quaternion8],
        [(p, 3)] => vec![ClassLabel::CyclicPCubed(*p)],
        [(p, 4)] => vec![ClassLabel::CyclicPFourth(*p)],
        [(p, 1), (q, 1)] if n == 6 => vec![ClassLabel::CyclicPQ(*p, *q), ClassLabel::Sym3],
        [(p, 1), (q, 1)] => vec![ClassLabel::CyclicPQ(*p, *q)],
        _ => Vec::new(),
    }
}

/// Isomorphism invariants used to reject non-isomorphic pairs quickly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    /// Element order to number of elements of that order.
    pub element_orders: BTreeMap<usize, usize>,
    pub c_histogram: BTreeMap<usize, usize>,
    pub center_size: usize,
}

pub fn fingerprint(g: &Group) -> Fingerprint {
    let mut element_orders = BTreeMap::new();
    for &k in &g.order_spectrum().element_orders {
        *element_orders.entry(k).or_insert(0) += 1;
    }
    Fingerprint {
        order: g.order(),
        abelian: g.is_abelian(),
        element_orders,
        c_histogram: cyclic_subgroups(g).c_histogram,
        center_size: g.center_size(),
    }
}

pub fn are_isomorphic(g: &Group, h: &Group) -> bool {
    if g.order() != h.order() {
        return false;
    }
    if fingerprint(g) != fingerprint(h) {
        return false;
    }
    find_isomorphism(g, h).is_some()
}

/// Generating sequence where each new element enlarges the generated subgroup as much as possible.
pub fn greedy_generators(g: &Group) -> Vec<Elem> {
    let mut gens = Vec::new();
    let mut current = generated_subgroup(g, &[]);
    while current.order() < g.order() {
        let mut best: Option<(usize, Elem)> = None;
        for x in g.elements().filter(|&x| !current.contains(x)) {
            let mut trial = gens.clone();
            trial.push(x);
            let size = generated_subgroup(g, &trial).order();
            if best.is_none_or(|(s, _)| size > s) {
                best = Some((size, x));
                if size == g.order() {
                    break;
                }
            }
        }
        let (_, x) = best.expect("a proper subgroup leaves elements outside");
        gens.push(x);
        current = generated_subgroup(g, &gens);
    }
    gens
}

/// Returns `map` with `map[x]` the image in `h` of element `x` of `g`.
///
/// Backtracks over images of a greedy generating sequence of `g`, extending each
/// partial assignment to the generated subgroup and pruning on conflicts.
/// Meant for small groups; the search grows quickly above order ~64.
pub fn find_isomorphism(g: &Group, h: &Group) -> Option<Vec<Elem>> {
    if g.order() != h.order() {
        return None;
    }
    let n = g.order();
    let gens = greedy_generators(g);
    let mut search =
        IsoSearch { g, h, gens: &gens, map: vec![usize::MAX; n], used: vec![false; n], mapped: Vec::with_capacity(n) };
    search.map[0] = 0;
    search.used[0] = true;
    search.mapped.push(0);
    if search.extend(0) {
        Some(search.map)
    } else {
        None
    }
}

struct IsoSearch<'a> {
    g: &'a Group,
    h: &'a Group,
    gens: &'a [Elem],
    map: Vec<Elem>,
    used: Vec<bool>,
    /// Domain elements in assignment order, used as an undo trail.
    mapped: Vec<Elem>,
}

impl IsoSearch<'_> {
    fn extend(&mut self, level: usize) -> bool {
        if level == self.gens.len() {
            return self.mapped.len() == self.g.order();
        }
        let gen = self.gens[level];
        let target_order = self.g.element_order(gen);
        for image in self.h.elements() {
            if self.used[image] || self.h.element_order(image) != target_order {
                continue;
            }
            let mark = self.mapped.len();
            self.map[gen] = image;
            self.used[image] = true;
            self.mapped.push(gen);
            if self.close(level) && self.extend(level + 1) {
                return true;
            }
            for x in self.mapped.drain(mark..) {
                self.used[self.map[x]] = false;
                self.map[x] = usize::MAX;
            }
        }
        false
    }

    /// Propagates `φ(x·s) = φ(x)·φ(s)` over the generators assigned so far.
    fn close(&mut self, level: usize) -> bool {
        let active = &self.gens[..=level];
        let mut i = 0;
        while i < self.mapped.len() {
            let x = self.mapped[i];
            let fx = self.map[x];
            for &s in active {
                let y = self.g.mul(x, s);
                let fy = self.h.mul(fx, self.map[s]);
                if self.map[y] == usize::MAX {
                    if self.used[fy] {
                        return false;
                    }
                    self.map[y] = fy;
                    self.used[fy] = true;
                    self.mapped.push(y);
                } else if self.map[y] != fy {
                    return false;
                }
            }
            i += 1;
        }
        true
    }
}
