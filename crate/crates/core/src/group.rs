//! Finite groups stored as validated Cayley tables.
//!
//! Elements are the indices `0..n`, and index `0` is always the identity.
//! Row `a`, column `b` of the table holds the index of the product `a·b`.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{gcd, prime_factors};

/// Element of a [`Group`], identified by its row/column index in the table.
pub type Elem = usize;

/// Largest table the library will hold. Entries are stored as `u16`.
pub const MAX_TABLE_ORDER: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("empty table")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("entry {value} at ({row}, {col}) is outside 0..{order}")]
    BadEntry { row: usize, col: usize, value: usize, order: usize },
    #[error("order {0} exceeds the table cap of {MAX_TABLE_ORDER}")]
    TooLarge(usize),
    #[error("index 0 is not an identity: {0}")]
    NoIdentity(String),
    #[error("not a Latin square: {0}")]
    NotLatin(String),
    #[error("not associative: ({a}·{b})·{c} = {left} but {a}·({b}·{c}) = {right}")]
    NotAssociative { a: Elem, b: Elem, c: Elem, left: Elem, right: Elem },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(Elem),
}

/// Element orders and the sets derived from them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderSpectrum {
    pub element_orders: Vec<usize>,
    /// Distinct element orders, ascending.
    pub pi_e: Vec<usize>,
    /// Prime divisors of the group order, ascending.
    pub pi: Vec<usize>,
    pub exponent: usize,
}

/// A finite group given by its full multiplication table.
#[derive(Clone)]
pub struct Group {
    order: usize,
    table: Vec<u16>,
    name: Option<String>,
    spectrum: OnceLock<OrderSpectrum>,
    inverses: OnceLock<Vec<u16>>,
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for Group {}

impl fmt::Debug for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Group").field("order", &self.order).field("name", &self.name).finish_non_exhaustive()
    }
}

impl Group {
    /// Checks every group axiom and returns the group. The table is stored as given.
    pub fn validate_cayley(rows: &[Vec<usize>]) -> Result<Group, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        if n > MAX_TABLE_ORDER {
            return Err(GroupError::TooLarge(n));
        }
        let mut table = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GroupError::NotSquare { row: i, len: row.len(), expected: n });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(GroupError::BadEntry { row: i, col: j, value: v, order: n });
                }
                table.push(v as u16);
            }
        }
        let g = Group::from_raw(n, table);
        g.check_axioms()?;
        Ok(g)
    }

    /// Builds a group from a flat row-major table without checking the axioms.
    ///
    /// Used by constructors whose output is a group by construction.
    pub(crate) fn from_raw(order: usize, table: Vec<u16>) -> Group {
        debug_assert_eq!(table.len(), order * order);
        Group { order, table, name: None, spectrum: OnceLock::new(), inverses: OnceLock::new() }
    }

    /// Builds a group from flat row-major entries without checking the axioms.
    pub(crate) fn from_flat_unchecked(order: usize, flat: &[usize]) -> Group {
        Group::from_raw(order, flat.iter().map(|&v| v as u16).collect())
    }

    fn check_axioms(&self) -> Result<(), GroupError> {
        let n = self.order;
        for j in 0..n {
            if self.mul(0, j) != j {
                return Err(GroupError::NoIdentity(format!("0·{j} = {}", self.mul(0, j))));
            }
            if self.mul(j, 0) != j {
                return Err(GroupError::NoIdentity(format!("{j}·0 = {}", self.mul(j, 0))));
            }
        }
        let mut seen = vec![usize::MAX; n];
        for i in 0..n {
            for j in 0..n {
                let v = self.mul(i, j);
                if seen[v] == i {
                    return Err(GroupError::NotLatin(format!("row {i} repeats {v}")));
                }
                seen[v] = i;
            }
        }
        seen.fill(usize::MAX);
        for j in 0..n {
            for i in 0..n {
                let v = self.mul(i, j);
                if seen[v] == j {
                    return Err(GroupError::NotLatin(format!("column {j} repeats {v}")));
                }
                seen[v] = j;
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    let left = self.mul(ab, c);
                    let right = self.mul(a, self.mul(b, c));
                    if left != right {
                        return Err(GroupError::NotAssociative { a, b, c, left, right });
                    }
                }
            }
        }
        for a in 0..n {
            let r = self.inverse(a);
            if self.mul(a, r) != 0 || self.mul(r, a) != 0 {
                return Err(GroupError::NoInverse(a));
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Group {
        self.name = Some(name.into());
        self
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a * self.order + b] as usize
    }

    /// Same as [`Group::mul`].
    pub fn multiply(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, b)
    }

    pub fn inverse(&self, a: Elem) -> Elem {
        let inv = self.inverses.get_or_init(|| {
            let n = self.order;
            // Column of the identity in each row; a Latin row has exactly one.
            self.table.chunks(n).map(|row| row.iter().position(|&v| v == 0).unwrap_or(0) as u16).collect::<Vec<_>>()
        });
        inv[a] as usize
    }

    /// `a^k` by repeated squaring.
    pub fn pow(&self, a: Elem, mut k: usize) -> Elem {
        let mut acc = 0;
        let mut base = a;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }

    pub fn row(&self, a: Elem) -> &[u16] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    /// Table as nested rows.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|i| self.row(i).iter().map(|&v| v as usize).collect()).collect()
    }

    pub(crate) fn flat(&self) -> &[u16] {
        &self.table
    }

    pub fn element_order(&self, a: Elem) -> usize {
        if let Some(s) = self.spectrum.get() {
            return s.element_orders[a];
        }
        iterated_order(self, a)
    }

    pub fn order_spectrum(&self) -> &OrderSpectrum {
        self.spectrum.get_or_init(|| {
            let element_orders: Vec<usize> = (0..self.order).map(|a| iterated_order(self, a)).collect();
            let mut pi_e = element_orders.clone();
            pi_e.sort_unstable();
            pi_e.dedup();
            let exponent = pi_e.iter().fold(1, |acc, &k| acc / gcd(acc, k) * k);
            OrderSpectrum { element_orders, pi_e, pi: prime_factors(self.order), exponent }
        })
    }

    pub fn exponent(&self) -> usize {
        self.order_spectrum().exponent
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.order_spectrum().element_orders.contains(&self.order)
    }

    pub fn center_size(&self) -> usize {
        (0..self.order).filter(|&a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a))).count()
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.order
    }
}

fn iterated_order(g: &Group, a: Elem) -> usize {
    let mut k = 1;
    let mut x = a;
    while x != 0 {
        x = g.mul(x, a);
        k += 1;
    }
    k
}
