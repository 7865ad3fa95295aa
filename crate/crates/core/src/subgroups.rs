//! Subgroups, the poset of cyclic subgroups, and the counting identities
//! `|G| = Σ c_k·φ(k)` and `|C(G)| = Σ c_k`.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::group::{Elem, Group};
use crate::numtheory::{euler_phi, is_prime, p_part, prime_factors};

/// Default largest group order for which the full subgroup lattice is computed.
pub const DEFAULT_LATTICE_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubgroupError {
    #[error("group of order {order} exceeds the subgroup lattice cap of {cap}")]
    LatticeTooLarge { order: usize, cap: usize },
    #[error("{p} is not a prime dividing the group order {order}")]
    PrimeDoesNotDivide { p: usize, order: usize },
    #[error("the product set has {size} elements but is not a subgroup")]
    NotASubgroup { size: usize },
}

/// A subgroup as the strictly increasing list of its element indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<Elem>,
    parent_order: usize,
}

/// Orders by size first, then by element list.
impl Ord for Subgroup {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.elements.len(), &self.elements).cmp(&(other.elements.len(), &other.elements))
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Subgroup {
    fn from_sorted(elements: Vec<Elem>, parent_order: usize) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(parent_order % elements.len(), 0, "Lagrange violated");
        Subgroup { elements, parent_order }
    }

    fn from_mask(mask: &[bool]) -> Subgroup {
        let elements: Vec<Elem> = mask.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect();
        Subgroup::from_sorted(elements, mask.len())
    }

    /// Checks that `elements` forms a subgroup of `g`.
    pub fn new(g: &Group, mut elements: Vec<Elem>) -> Option<Subgroup> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) || elements.iter().any(|&x| x >= g.order()) {
            return None;
        }
        let closed = elements.iter().all(|&a| elements.iter().all(|&b| elements.binary_search(&g.mul(a, b)).is_ok()));
        closed.then(|| Subgroup::from_sorted(elements, g.order()))
    }

    pub fn whole(g: &Group) -> Subgroup {
        Subgroup::from_sorted(g.elements().collect(), g.order())
    }

    pub fn trivial(g: &Group) -> Subgroup {
        Subgroup::from_sorted(vec![0], g.order())
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    pub fn index(&self) -> usize {
        self.parent_order / self.elements.len()
    }

    pub fn contains(&self, x: Elem) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.order() <= other.order() && self.elements.iter().all(|&x| other.contains(x))
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements = self.elements.iter().copied().filter(|&x| other.contains(x)).collect();
        Subgroup::from_sorted(elements, self.parent_order)
    }

    /// True if some element generates the whole subgroup.
    pub fn is_cyclic(&self, g: &Group) -> bool {
        self.elements.iter().any(|&x| g.element_order(x) == self.order())
    }
}

/// Smallest subgroup containing `seed`.
pub fn generated_subgroup(g: &Group, seed: &[Elem]) -> Subgroup {
    let mut mask = vec![false; g.order()];
    close_into(g, &mut mask, vec![0], seed);
    Subgroup::from_mask(&mask)
}

/// Right-multiplies everything reachable from `start` by `gens` until closed.
/// Elements already set in `mask` are treated as visited.
fn close_into(g: &Group, mask: &mut [bool], start: Vec<Elem>, gens: &[Elem]) {
    let mut stack = Vec::new();
    for x in start {
        if !mask[x] {
            mask[x] = true;
            stack.push(x);
        }
    }
    while let Some(x) = stack.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if !mask[y] {
                mask[y] = true;
                stack.push(y);
            }
        }
    }
}

/// The cyclic subgroups of a group, with order histogram and Hasse edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicPoset {
    /// Sorted by `(order, elements)`; the trivial subgroup comes first.
    pub members: Vec<Subgroup>,
    /// One generator of each member, aligned with `members`.
    pub generators: Vec<Elem>,
    /// `c_k`: number of cyclic subgroups of order `k`.
    pub c_histogram: BTreeMap<usize, usize>,
    /// Covering pairs `(i, j)`: `members[i]` is a maximal proper cyclic subgroup of `members[j]`.
    pub inclusion: Vec<(usize, usize)>,
}

impl CyclicPoset {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn count_of_order(&self, k: usize) -> usize {
        self.c_histogram.get(&k).copied().unwrap_or(0)
    }

    /// Hasse diagram in Graphviz DOT, one node per member labeled `C_k #i`.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph cyclic_subgroups {\n  rankdir=BT;\n");
        for (i, m) in self.members.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"C_{} #{i}\"];", m.order()).unwrap();
        }
        for (i, j) in &self.inclusion {
            writeln!(out, "  n{i} -> n{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn cyclic_subgroups(g: &Group) -> CyclicPoset {
    let n = g.order();
    let mut found: Vec<(Subgroup, Elem)> = Vec::new();
    let mut done = vec![false; n];
    for x in 0..n {
        if done[x] {
            continue;
        }
        let mut powers = Vec::new();
        let mut y = 0;
        loop {
            powers.push(y);
            y = g.mul(y, x);
            if y == 0 {
                break;
            }
        }
        let m = powers.len();
        // x^k generates the same subgroup exactly when gcd(k, m) = 1.
        for (k, &p) in powers.iter().enumerate() {
            if crate::numtheory::gcd(k, m) == 1 {
                done[p] = true;
            }
        }
        powers.sort_unstable();
        found.push((Subgroup::from_sorted(powers, n), x));
    }
    found.sort();

    let mut generated_by = vec![usize::MAX; n];
    for (i, (sub, gen)) in found.iter().enumerate() {
        let m = sub.order();
        let mut y = *gen;
        for k in 1..=m {
            if crate::numtheory::gcd(k, m) == 1 {
                generated_by[y] = i;
            }
            y = g.mul(y, *gen);
        }
    }
    generated_by[0] = 0;

    let mut inclusion = Vec::new();
    for (j, (sub, gen)) in found.iter().enumerate() {
        for p in prime_factors(sub.order()) {
            inclusion.push((generated_by[g.pow(*gen, p)], j));
        }
    }
    inclusion.sort_unstable();

    let mut c_histogram = BTreeMap::new();
    for (sub, _) in &found {
        *c_histogram.entry(sub.order()).or_insert(0) += 1;
    }
    let (members, generators) = found.into_iter().unzip();
    CyclicPoset { members, generators, c_histogram, inclusion }
}

/// Both sides of the two counting identities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub group_order: usize,
    pub cyclic_count: usize,
    /// `Σ_{k ∈ π_e} c_k·φ(k)`
    pub weighted_sum: usize,
    /// `Σ_{k ∈ π_e} c_k`
    pub count_sum: usize,
    pub order_identity_holds: bool,
    pub count_identity_holds: bool,
}

impl CountingReport {
    pub fn holds(&self) -> bool {
        self.order_identity_holds && self.count_identity_holds
    }
}

pub fn check_counting_identities(g: &Group) -> CountingReport {
    let poset = cyclic_subgroups(g);
    let pi_e = &g.order_spectrum().pi_e;
    let weighted_sum = pi_e.iter().map(|&k| poset.count_of_order(k) * euler_phi(k)).sum();
    let count_sum = pi_e.iter().map(|&k| poset.count_of_order(k)).sum();
    CountingReport {
        group_order: g.order(),
        cyclic_count: poset.len(),
        weighted_sum,
        count_sum,
        order_identity_holds: weighted_sum == g.order(),
        count_identity_holds: count_sum == poset.len(),
    }
}

pub fn all_subgroups(g: &Group) -> Result<Vec<Subgroup>, SubgroupError> {
    all_subgroups_with_cap(g, DEFAULT_LATTICE_CAP)
}

/// Every subgroup, as the fixpoint of joining known subgroups with cyclic ones.
pub fn all_subgroups_with_cap(g: &Group, cap: usize) -> Result<Vec<Subgroup>, SubgroupError> {
    let n = g.order();
    if n > cap {
        return Err(SubgroupError::LatticeTooLarge { order: n, cap });
    }
    let poset = cyclic_subgroups(g);
    let cyclic_gens = &poset.generators;

    // Each entry keeps a generating set so joins never rescan the whole subgroup.
    let mut known: HashSet<Vec<Elem>> = HashSet::new();
    let mut work: Vec<(Vec<bool>, Vec<Elem>)> = Vec::new();
    for (sub, &gen) in poset.members.iter().zip(cyclic_gens) {
        known.insert(sub.elements().to_vec());
        let mut mask = vec![false; n];
        for &x in sub.elements() {
            mask[x] = true;
        }
        work.push((mask, vec![gen]));
    }
    let mut out: Vec<Subgroup> = poset.members.clone();
    while let Some((mask, gens)) = work.pop() {
        for &c in cyclic_gens {
            if mask[c] {
                continue;
            }
            let mut joined = vec![false; n];
            let mut new_gens = gens.clone();
            new_gens.push(c);
            close_into(g, &mut joined, vec![0], &new_gens);
            let sub = Subgroup::from_mask(&joined);
            if known.insert(sub.elements().to_vec()) {
                out.push(sub);
                work.push((joined, new_gens));
            }
        }
    }
    out.sort();
    Ok(out)
}

pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    g.elements().all(|x| conjugation_preserves(g, h, x))
}

fn conjugation_preserves(g: &Group, h: &Subgroup, x: Elem) -> bool {
    let xi = g.inverse(x);
    h.elements().iter().all(|&y| h.contains(g.mul(g.mul(x, y), xi)))
}

pub fn normalizer(g: &Group, h: &Subgroup) -> Subgroup {
    let elements = g.elements().filter(|&x| conjugation_preserves(g, h, x)).collect();
    Subgroup::from_sorted(elements, g.order())
}

/// The first subgroup of full `p`-power order in the sorted lattice.
pub fn sylow(g: &Group, p: usize) -> Result<Subgroup, SubgroupError> {
    if !is_prime(p) || !g.order().is_multiple_of(p) {
        return Err(SubgroupError::PrimeDoesNotDivide { p, order: g.order() });
    }
    let target = p_part(g.order(), p);
    Ok(all_subgroups(g)?.into_iter().find(|s| s.order() == target).expect("Sylow subgroups exist"))
}

pub fn is_dedekind(g: &Group) -> Result<bool, SubgroupError> {
    Ok(all_subgroups(g)?.iter().all(|h| is_normal(g, h)))
}

/// The set product `AB`, provided it is a subgroup (equivalently `AB = BA`).
pub fn internal_product(g: &Group, a: &Subgroup, b: &Subgroup) -> Result<Subgroup, SubgroupError> {
    let set_product = |x: &Subgroup, y: &Subgroup| {
        let mut s: Vec<Elem> =
            x.elements().iter().flat_map(|&u| y.elements().iter().map(move |&v| g.mul(u, v))).collect();
        s.sort_unstable();
        s.dedup();
        s
    };
    let ab = set_product(a, b);
    assert_eq!(ab.len() * a.intersection(b).order(), a.order() * b.order());
    if ab != set_product(b, a) {
        return Err(SubgroupError::NotASubgroup { size: ab.len() });
    }
    Ok(Subgroup::from_sorted(ab, g.order()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{cyclic, dihedral, direct_product, generalized_quaternion, symmetric};
    use crate::numtheory::divisors;

    /// Subgroups by checking every subset that contains the identity.
    fn brute_force_subgroups(g: &Group) -> Vec<Vec<Elem>> {
        let n = g.order();
        assert!(n <= 16);
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            if mask & 1 == 0 {
                continue;
            }
            let elems: Vec<Elem> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if elems.iter().all(|&a| elems.iter().all(|&b| mask >> g.mul(a, b) & 1 == 1)) {
                out.push(elems);
            }
        }
        out.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        out
    }

    /// Cyclic subgroups by taking the power set of every element.
    fn brute_force_cyclic_histogram(g: &Group) -> BTreeMap<usize, usize> {
        let mut seen = HashSet::new();
        for x in g.elements() {
            let mut s: Vec<Elem> = (0..g.order()).map(|k| g.pow(x, k)).collect();
            s.sort_unstable();
            s.dedup();
            seen.insert(s);
        }
        let mut h = BTreeMap::new();
        for s in seen {
            *h.entry(s.len()).or_insert(0) += 1;
        }
        h
    }

    fn s3() -> Group {
        symmetric(3).unwrap()
    }

    #[test]
    fn generated() {
        let c6 = cyclic(6).unwrap();
        assert_eq!(generated_subgroup(&c6, &[]).elements(), &[0]);
        assert_eq!(generated_subgroup(&c6, &[2]).elements(), &[0, 2, 4]);
        let g = s3();
        let t = g.elements().find(|&a| g.element_order(a) == 2).unwrap();
        let r = g.elements().find(|&a| g.element_order(a) == 3).unwrap();
        assert_eq!(generated_subgroup(&g, &[t, r]).order(), 6);
    }

    #[test]
    fn cyclic_posets() {
        let p = cyclic_subgroups(&cyclic(12).unwrap());
        assert_eq!(p.len(), 6);
        assert_eq!(p.c_histogram.keys().copied().collect::<Vec<_>>(), divisors(12));
        let p = cyclic_subgroups(&s3());
        assert_eq!(p.len(), 5);
        assert_eq!(p.c_histogram, BTreeMap::from([(1, 1), (2, 3), (3, 1)]));
        let v4 = direct_product(&cyclic(2).unwrap(), &cyclic(2).unwrap()).unwrap();
        let p = cyclic_subgroups(&v4);
        assert_eq!(p.c_histogram, BTreeMap::from([(1, 1), (2, 3)]));
        assert_eq!(cyclic_subgroups(&dihedral(4).unwrap()).len(), 7);
    }

    #[test]
    fn poset_matches_brute_force() {
        for g in [
            s3(),
            dihedral(4).unwrap(),
            dihedral(6).unwrap(),
            generalized_quaternion(16).unwrap(),
            symmetric(4).unwrap(),
        ] {
            assert_eq!(cyclic_subgroups(&g).c_histogram, brute_force_cyclic_histogram(&g));
        }
    }

    #[test]
    fn hasse_edges_are_covers() {
        for g in [cyclic(12).unwrap(), dihedral(4).unwrap(), symmetric(4).unwrap(), generalized_quaternion(16).unwrap()]
        {
            let p = cyclic_subgroups(&g);
            let m = p.len();
            let below = |i: usize, j: usize| i != j && p.members[i].is_subset_of(&p.members[j]);
            let mut expected = Vec::new();
            for i in 0..m {
                for j in 0..m {
                    if below(i, j) && !(0..m).any(|k| below(i, k) && below(k, j)) {
                        expected.push((i, j));
                    }
                }
            }
            assert_eq!(p.inclusion, expected);
        }
    }

    #[test]
    fn dot_export() {
        let dot = cyclic_subgroups(&cyclic(4).unwrap()).to_dot();
        assert_eq!(
            dot,
            "digraph cyclic_subgroups {\n  rankdir=BT;\n  n0 [label=\"C_1 #0\"];\n  n1 [label=\"C_2 #1\"];\n  n2 [label=\"C_4 #2\"];\n  n0 -> n1;\n  n1 -> n2;\n}\n"
        );
    }

    #[test]
    fn counting_identity_reports() {
        let r = check_counting_identities(&s3());
        assert_eq!((r.weighted_sum, r.count_sum, r.cyclic_count), (6, 5, 5));
        assert!(r.holds());
        let r = check_counting_identities(&cyclic(1).unwrap());
        assert_eq!((r.weighted_sum, r.count_sum), (1, 1));
        let r = check_counting_identities(&cyclic(16).unwrap());
        assert_eq!((r.weighted_sum, r.count_sum), (16, 5));
    }

    #[test]
    fn lattices_match_brute_force() {
        let q8 = generalized_quaternion(8).unwrap();
        let orders = |g: &Group| all_subgroups(g).unwrap().iter().map(Subgroup::order).collect::<Vec<_>>();
        assert_eq!(orders(&cyclic(7).unwrap()), vec![1, 7]);
        assert_eq!(orders(&s3()), vec![1, 2, 2, 2, 3, 6]);
        assert_eq!(orders(&q8), vec![1, 2, 4, 4, 4, 8]);
        for g in
            [s3(), q8, dihedral(4).unwrap(), dihedral(6).unwrap(), symmetric(4).unwrap().clone(), cyclic(12).unwrap()]
        {
            if g.order() > 16 {
                continue;
            }
            let got: Vec<Vec<Elem>> = all_subgroups(&g).unwrap().into_iter().map(|s| s.elements).collect();
            assert_eq!(got, brute_force_subgroups(&g));
        }
        // S4 has 30 subgroups.
        assert_eq!(all_subgroups(&symmetric(4).unwrap()).unwrap().len(), 30);
        assert_eq!(all_subgroups(&symmetric(5).unwrap()), Err(SubgroupError::LatticeTooLarge { order: 120, cap: 64 }));
    }

    #[test]
    fn normality() {
        let g = s3();
        assert!(is_normal(&g, &Subgroup::whole(&g)));
        assert!(is_normal(&g, &Subgroup::trivial(&g)));
        let subs = all_subgroups(&g).unwrap();
        for h in &subs {
            match h.order() {
                2 => assert!(!is_normal(&g, h)),
                _ => assert!(is_normal(&g, h)),
            }
        }
    }

    #[test]
    fn normalizers() {
        let g = s3();
        let p2 = sylow(&g, 2).unwrap();
        let n = normalizer(&g, &p2);
        assert_eq!(n, p2);
        assert_eq!(n.index(), 3);
        assert_eq!(normalizer(&g, &Subgroup::trivial(&g)), Subgroup::whole(&g));
        let q8 = generalized_quaternion(8).unwrap();
        for h in all_subgroups(&q8).unwrap().iter().filter(|h| h.order() == 4) {
            assert_eq!(normalizer(&q8, h), Subgroup::whole(&q8));
        }
    }

    #[test]
    fn sylow_subgroups() {
        assert_eq!(sylow(&s3(), 3).unwrap().order(), 3);
        let c12 = cyclic(12).unwrap();
        assert_eq!(sylow(&c12, 2).unwrap().elements(), &[0, 3, 6, 9]);
        let c5 = cyclic(5).unwrap();
        assert_eq!(sylow(&c5, 5).unwrap(), Subgroup::whole(&c5));
        assert_eq!(sylow(&c5, 2), Err(SubgroupError::PrimeDoesNotDivide { p: 2, order: 5 }));
        assert_eq!(sylow(&c12, 4), Err(SubgroupError::PrimeDoesNotDivide { p: 4, order: 12 }));
    }

    #[test]
    fn dedekind() {
        assert!(is_dedekind(&cyclic(12).unwrap()).unwrap());
        assert!(is_dedekind(&direct_product(&cyclic(2).unwrap(), &cyclic(4).unwrap()).unwrap()).unwrap());
        assert!(is_dedekind(&generalized_quaternion(8).unwrap()).unwrap());
        assert!(!is_dedekind(&s3()).unwrap());
        assert!(!is_dedekind(&generalized_quaternion(16).unwrap()).unwrap());
    }

    #[test]
    fn products() {
        let c6 = cyclic(6).unwrap();
        let a = generated_subgroup(&c6, &[3]);
        let b = generated_subgroup(&c6, &[2]);
        assert_eq!(internal_product(&c6, &a, &b).unwrap(), Subgroup::whole(&c6));
        assert_eq!(internal_product(&c6, &a, &Subgroup::trivial(&c6)).unwrap(), a);
        let g = s3();
        let twos: Vec<Subgroup> = all_subgroups(&g).unwrap().into_iter().filter(|h| h.order() == 2).collect();
        assert_eq!(internal_product(&g, &twos[0], &twos[1]), Err(SubgroupError::NotASubgroup { size: 4 }));
    }

    #[test]
    fn subgroup_new_checks_closure() {
        let c6 = cyclic(6).unwrap();
        assert!(Subgroup::new(&c6, vec![4, 0, 2]).is_some());
        assert!(Subgroup::new(&c6, vec![0, 1]).is_none());
        assert!(Subgroup::new(&c6, vec![2, 4]).is_none());
    }
}
