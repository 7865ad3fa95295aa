//! Named group families and a small expression language over them.
//!
//! Naming follows the *order* of the group for quaternions and the *degree*
//! for dihedral groups: `D m` is the dihedral group of order `2m` (symmetries
//! of an m-gon) and `Q k` is the generalized quaternion group of order `k`.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::group::{Group, MAX_TABLE_ORDER};
use crate::numtheory::is_prime;

/// Default limit on the number of elements a constructor may produce.
pub const DEFAULT_TABLE_CAP: usize = MAX_TABLE_ORDER;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("direct product of order {order} exceeds the table cap of {cap}")]
    ProductTooLarge { order: usize, cap: usize },
    #[error("closure exceeds the table cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error("generator {index} is not a permutation of 0..{degree}")]
    NotAPermutation { index: usize, degree: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Cyclic group with the canonical labeling: index `i` is the `i`-th power of the generator `1`.
pub fn cyclic(n: usize) -> Result<Group, ConstructionError> {
    if n == 0 || n > DEFAULT_TABLE_CAP {
        return Err(ConstructionError::InvalidParameter(format!("C n needs 1 <= n <= {DEFAULT_TABLE_CAP}, got {n}")));
    }
    let mut table = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            table.push(((i + j) % n) as u16);
        }
    }
    Ok(Group::from_raw(n, table).with_name(format!("C{n}")))
}

pub fn direct_product(g: &Group, h: &Group) -> Result<Group, ConstructionError> {
    direct_product_with_cap(g, h, DEFAULT_TABLE_CAP)
}

/// Direct product on pairs `(x, y)` ordered lexicographically, so `(x, y)` has index `x·|h| + y`.
pub fn direct_product_with_cap(g: &Group, h: &Group, cap: usize) -> Result<Group, ConstructionError> {
    let (m, k) = (g.order(), h.order());
    let n = m * k;
    if n > cap.min(MAX_TABLE_ORDER) {
        return Err(ConstructionError::ProductTooLarge { order: n, cap: cap.min(MAX_TABLE_ORDER) });
    }
    let mut table = Vec::with_capacity(n * n);
    for x1 in 0..m {
        for y1 in 0..k {
            for x2 in 0..m {
                let gx = g.mul(x1, x2) * k;
                for y2 in 0..k {
                    table.push((gx + h.mul(y1, y2)) as u16);
                }
            }
        }
    }
    let name = match (g.name(), h.name()) {
        (Some(a), Some(b)) => format!("{a} x {b}"),
        _ => format!("G{m} x G{k}"),
    };
    Ok(Group::from_raw(n, table).with_name(name))
}

/// Dihedral group of order `2m`, generated by a rotation `r` and reflection `s`.
pub fn dihedral(m: usize) -> Result<Group, ConstructionError> {
    if m < 3 || 2 * m > DEFAULT_TABLE_CAP {
        return Err(ConstructionError::InvalidParameter(format!("D m (dihedral of order 2m) needs m >= 3, got {m}")));
    }
    let r: Vec<usize> = (0..m).map(|i| (i + 1) % m).collect();
    let s: Vec<usize> = (0..m).map(|i| (m - i) % m).collect();
    Ok(from_generators(&[r, s])?.with_name(format!("D{m}")))
}

/// Generalized quaternion (dicyclic) group of order `k`:
/// `a^(k/2) = 1`, `b² = a^(k/4)`, `b·a·b⁻¹ = a⁻¹`.
pub fn generalized_quaternion(k: usize) -> Result<Group, ConstructionError> {
    if !matches!(k, 8 | 16 | 32) {
        return Err(ConstructionError::InvalidParameter(format!(
            "Q k (generalized quaternion of order k) needs k in {{8, 16, 32}}, got {k}"
        )));
    }
    let half = k / 2;
    let quarter = k / 4;
    // Normal form a^i b^j, with b·a^t = a^(-t)·b.
    let mul = |x: &(usize, usize), y: &(usize, usize)| {
        let (i, j) = *x;
        let (t, l) = *y;
        let twisted = if j == 1 { half - t } else { t };
        let extra = if j == 1 && l == 1 { quarter } else { 0 };
        ((i + twisted + extra) % half, (j + l) % 2)
    };
    Ok(closure_table((0, 0), &[(1, 0), (0, 1)], mul, DEFAULT_TABLE_CAP)?.with_name(format!("Q{k}")))
}

/// Symmetric group on `k` points, generated by `(0 1)` and `(0 1 … k-1)`.
pub fn symmetric(k: usize) -> Result<Group, ConstructionError> {
    if !(1..=5).contains(&k) {
        return Err(ConstructionError::InvalidParameter(format!("S k needs 1 <= k <= 5, got {k}")));
    }
    let mut transposition: Vec<usize> = (0..k).collect();
    if k >= 2 {
        transposition.swap(0, 1);
    }
    let cycle: Vec<usize> = (0..k).map(|i| (i + 1) % k).collect();
    Ok(from_generators(&[transposition, cycle])?.with_name(format!("S{k}")))
}

/// Elementary abelian group `C_p^k` as an iterated direct product.
pub fn elementary_abelian(p: usize, k: u32) -> Result<Group, ConstructionError> {
    if !is_prime(p) || k == 0 || p.checked_pow(k).is_none_or(|n| n > 256) {
        return Err(ConstructionError::InvalidParameter(format!(
            "E p^k needs p prime, k >= 1 and p^k <= 256, got {p}^{k}"
        )));
    }
    let cp = cyclic(p)?;
    let mut g = cp.clone();
    for _ in 1..k {
        g = direct_product(&g, &cp)?;
    }
    Ok(g.with_name(format!("E{p}^{k}")))
}

pub fn from_generators(perms: &[Vec<usize>]) -> Result<Group, ConstructionError> {
    from_generators_with_cap(perms, DEFAULT_TABLE_CAP)
}

/// Group generated by permutations of `0..d`, composed as functions: `(σ·τ)(x) = σ(τ(x))`.
///
/// Elements are labeled in breadth-first discovery order from the identity,
/// multiplying on the right by each generator in turn.
pub fn from_generators_with_cap(perms: &[Vec<usize>], cap: usize) -> Result<Group, ConstructionError> {
    let degree = perms.first().map_or(0, Vec::len);
    for (index, p) in perms.iter().enumerate() {
        let mut seen = vec![false; degree];
        let ok = p.len() == degree && p.iter().all(|&x| x < degree && !std::mem::replace(&mut seen[x], true));
        if !ok {
            return Err(ConstructionError::NotAPermutation { index, degree });
        }
    }
    let identity: Vec<usize> = (0..degree).collect();
    closure_table(identity, perms, |s: &Vec<usize>, t: &Vec<usize>| t.iter().map(|&x| s[x]).collect(), cap)
}

/// Breadth-first closure of `gens` under `mul`, turned into a Cayley table.
pub(crate) fn closure_table<T, F>(identity: T, gens: &[T], mul: F, cap: usize) -> Result<Group, ConstructionError>
where
    T: Clone + Eq + Hash,
    F: Fn(&T, &T) -> T,
{
    let cap = cap.min(MAX_TABLE_ORDER);
    let mut elements = vec![identity.clone()];
    let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
    let mut head = 0;
    while head < elements.len() {
        for s in gens {
            let y = mul(&elements[head], s);
            if !index.contains_key(&y) {
                if elements.len() == cap {
                    return Err(ConstructionError::ClosureTooLarge { cap });
                }
                index.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
        head += 1;
    }
    let n = elements.len();
    let mut table = Vec::with_capacity(n * n);
    for x in &elements {
        for y in &elements {
            table.push(index[&mul(x, y)] as u16);
        }
    }
    Ok(Group::from_raw(n, table))
}

/// One factor of a [`GroupExpr`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// `C k`, cyclic of order k.
    Cyclic(usize),
    /// `D m`, dihedral of order 2m.
    Dihedral(usize),
    /// `Q k`, generalized quaternion of order k.
    Quaternion(usize),
    /// `S k`, symmetric on k points.
    Symmetric(usize),
    /// `E p^k`, elementary abelian of order p^k.
    ElemAbelian(usize, u32),
}

impl Atom {
    pub fn order(&self) -> usize {
        match *self {
            Atom::Cyclic(k) => k,
            Atom::Dihedral(m) => 2 * m,
            Atom::Quaternion(k) => k,
            Atom::Symmetric(k) => (1..=k).product(),
            Atom::ElemAbelian(p, k) => p.pow(k),
        }
    }

    pub fn build(&self) -> Result<Group, ConstructionError> {
        match *self {
            Atom::Cyclic(k) => cyclic(k),
            Atom::Dihedral(m) => dihedral(m),
            Atom::Quaternion(k) => generalized_quaternion(k),
            Atom::Symmetric(k) => symmetric(k),
            Atom::ElemAbelian(p, k) => elementary_abelian(p, k),
        }
    }

    fn check(&self) -> Result<(), String> {
        match *self {
            Atom::Cyclic(k) if k == 0 || k > DEFAULT_TABLE_CAP => {
                Err(format!("C k needs 1 <= k <= {DEFAULT_TABLE_CAP}"))
            }
            Atom::Dihedral(m) if m < 3 || 2 * m > DEFAULT_TABLE_CAP => {
                Err("D m is the dihedral group of order 2m and needs m >= 3".into())
            }
            Atom::Quaternion(k) if !matches!(k, 8 | 16 | 32) => {
                Err("Q k is the generalized quaternion group of order k and needs k in {8, 16, 32}".into())
            }
            Atom::Symmetric(k) if !(1..=5).contains(&k) => Err("S k needs 1 <= k <= 5".into()),
            Atom::ElemAbelian(p, k) if !is_prime(p) || k == 0 || p.checked_pow(k).is_none_or(|n| n > 256) => {
                Err("E p^k needs p prime, k >= 1 and p^k <= 256".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Atom::Cyclic(k) => write!(f, "C{k}"),
            Atom::Dihedral(m) => write!(f, "D{m}"),
            Atom::Quaternion(k) => write!(f, "Q{k}"),
            Atom::Symmetric(k) => write!(f, "S{k}"),
            Atom::ElemAbelian(p, k) => write!(f, "E{p}^{k}"),
        }
    }
}

/// Direct-product expression, e.g. `C2 x S3`. Products associate to the left.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupExpr {
    Atom(Atom),
    Product(Box<GroupExpr>, Box<GroupExpr>),
}

impl GroupExpr {
    /// Left-nested product of the given atoms. Panics on an empty slice.
    pub fn product_of(atoms: &[Atom]) -> GroupExpr {
        let (first, rest) = atoms.split_first().expect("at least one atom");
        rest.iter()
            .fold(GroupExpr::Atom(*first), |acc, a| GroupExpr::Product(Box::new(acc), Box::new(GroupExpr::Atom(*a))))
    }

    pub fn order(&self) -> usize {
        match self {
            GroupExpr::Atom(a) => a.order(),
            GroupExpr::Product(l, r) => l.order() * r.order(),
        }
    }

    pub fn build(&self) -> Result<Group, ConstructionError> {
        match self {
            GroupExpr::Atom(a) => a.build(),
            GroupExpr::Product(l, r) => direct_product(&l.build()?, &r.build()?),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Atom(a) => write!(f, "{a}"),
            GroupExpr::Product(l, r) => write!(f, "{l} x {r}"),
        }
    }
}

/// Parses `TERM ( x TERM )*`. Atoms are case-insensitive; the `x` must be surrounded by whitespace.
pub fn parse_expr(text: &str) -> Result<GroupExpr, ConstructionError> {
    let err = |pos: usize, msg: String| ConstructionError::Parse { pos, msg };
    let tokens: Vec<(usize, &str)> =
        text.split_whitespace().map(|t| (t.as_ptr() as usize - text.as_ptr() as usize, t)).collect();
    if tokens.is_empty() {
        return Err(err(0, "empty expression".into()));
    }
    let mut atoms = Vec::new();
    for (i, &(pos, tok)) in tokens.iter().enumerate() {
        if i % 2 == 1 {
            if !tok.eq_ignore_ascii_case("x") {
                return Err(err(pos, format!("expected ' x ' between factors, found {tok:?}")));
            }
            continue;
        }
        atoms.push(parse_atom(tok).map_err(|msg| err(pos, msg))?);
    }
    if tokens.len().is_multiple_of(2) {
        let (pos, tok) = tokens[tokens.len() - 1];
        return Err(err(pos + tok.len(), "expected a factor after 'x'".into()));
    }
    Ok(GroupExpr::product_of(&atoms))
}

fn parse_atom(tok: &str) -> Result<Atom, String> {
    let mut chars = tok.chars();
    let kind = chars.next().map(|c| c.to_ascii_uppercase());
    let rest = chars.as_str();
    let number = |s: &str| -> Result<usize, String> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(format!("expected a number in {tok:?}"));
        }
        s.parse().map_err(|_| format!("number out of range in {tok:?}"))
    };
    let atom = match kind {
        Some('C') => Atom::Cyclic(number(rest)?),
        Some('D') => Atom::Dihedral(number(rest)?),
        Some('Q') => Atom::Quaternion(number(rest)?),
        Some('S') => Atom::Symmetric(number(rest)?),
        Some('E') => match rest.split_once('^') {
            Some((p, k)) => {
                let k = number(k)?;
                Atom::ElemAbelian(number(p)?, u32::try_from(k).map_err(|_| format!("exponent too large in {tok:?}"))?)
            }
            None => Atom::ElemAbelian(number(rest)?, 1),
        },
        _ => return Err(format!("unknown atom {tok:?}; expected one of C, D, Q, S, E")),
    };
    atom.check().map_err(|m| format!("{tok}: {m}"))?;
    Ok(atom)
}

/// Parses and builds in one step.
pub fn build_expr(text: &str) -> Result<Group, ConstructionError> {
    let expr = parse_expr(text)?;
    if expr.order() > DEFAULT_TABLE_CAP {
        return Err(ConstructionError::ProductTooLarge { order: expr.order(), cap: DEFAULT_TABLE_CAP });
    }
    Ok(expr.build()?.with_name(expr.to_string()))
}

/// Every product of `C`, `D`, `Q` and `S` atoms (as a multiset, factors in
/// ascending atom order) whose order is at most `max_order`, plus `C1`.
///
/// `C1` and `S1`, `S2` are not used as factors since they duplicate `C1` and `C2`.
pub fn catalog(max_order: usize) -> Vec<GroupExpr> {
    let mut atoms: Vec<Atom> = (2..=max_order).map(Atom::Cyclic).collect();
    atoms.extend((3..=max_order / 2).map(Atom::Dihedral));
    atoms.extend([8, 16, 32].into_iter().filter(|&k| k <= max_order).map(Atom::Quaternion));
    atoms.extend([3, 4, 5].into_iter().map(Atom::Symmetric).filter(|a| a.order() <= max_order));
    atoms.sort();

    fn extend(atoms: &[Atom], start: usize, order: usize, max: usize, cur: &mut Vec<Atom>, out: &mut Vec<GroupExpr>) {
        for i in start..atoms.len() {
            let next = order * atoms[i].order();
            if next > max {
                continue;
            }
            cur.push(atoms[i]);
            out.push(GroupExpr::product_of(cur));
            extend(atoms, i, next, max, cur, out);
            cur.pop();
        }
    }

    let mut out = vec![GroupExpr::Atom(Atom::Cyclic(1))];
    if max_order >= 1 {
        extend(&atoms, 0, 1, max_order, &mut Vec::new(), &mut out);
    }
    out.sort_by_key(|e| (e.order(), e.to_string()));
    out
}
