//! Finite groups given by their Cayley (multiplication) table.
//!
//! Elements are the dense indices `0..n`. The identity is discovered when a
//! table is validated and is never assumed to be index 0, so tables coming
//! from other tools keep their original labels.

mod io;
mod named;
mod subgroup;

use std::sync::OnceLock;

use thiserror::Error;

pub use io::{parse_table, parse_table_with_limit, write_table};
pub use named::{GroupName, MAX_SYMMETRIC_DEGREE};
pub use subgroup::{Quotient, SubgroupSet};
pub(crate) use subgroup::{normal_closure_under, Closure};

/// Default bound on the order of groups accepted by the constructors.
pub const DEFAULT_MAX_ORDER: usize = 10_000;

/// Hard bound imposed by the compact table storage.
pub const ABSOLUTE_MAX_ORDER: usize = u16::MAX as usize + 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("table is empty")]
    Empty,
    #[error("table is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("table is not closed: entry ({a}, {b}) = {value} is outside 0..{order}")]
    NotClosed {
        a: usize,
        b: usize,
        value: usize,
        order: usize,
    },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {element} has no two-sided inverse")]
    MissingInverse { element: usize },
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("subgroup is not normal: conjugating {element} by {conjugator} leaves it")]
    NotNormal { element: usize, conjugator: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A validated finite group.
///
/// `table[a * n + b]` is the index of `a·b`. Values are immutable once
/// constructed; derived data (inverses, a generating sequence) is computed
/// once and cached.
#[derive(Debug)]
pub struct Group {
    order: usize,
    table: Vec<u16>,
    identity: usize,
    inverses: Vec<u16>,
    generators: OnceLock<Vec<usize>>,
}

impl Clone for Group {
    fn clone(&self) -> Self {
        Group {
            order: self.order,
            table: self.table.clone(),
            identity: self.identity,
            inverses: self.inverses.clone(),
            generators: OnceLock::new(),
        }
    }
}

impl PartialEq for Group {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for Group {}

impl Group {
    /// Validates a table with the default order limit.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Group, GroupError> {
        Self::from_table_with_limit(rows, DEFAULT_MAX_ORDER)
    }

    pub fn from_table_with_limit(rows: &[Vec<usize>], limit: usize) -> Result<Group, GroupError> {
        let n = rows.len();
        if n == 0 {
            return Err(GroupError::Empty);
        }
        check_limit(n, limit)?;
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(GroupError::NotSquare {
                    row,
                    len: r.len(),
                    expected: n,
                });
            }
        }
        for (a, r) in rows.iter().enumerate() {
            for (b, &value) in r.iter().enumerate() {
                if value >= n {
                    return Err(GroupError::NotClosed {
                        a,
                        b,
                        value,
                        order: n,
                    });
                }
            }
        }
        let table = rows.iter().flatten().map(|&v| v as u16).collect();
        Self::from_flat(n, table)
    }

    /// Validates a row-major table whose entries are already known to be
    /// in range.
    pub(crate) fn from_flat(n: usize, table: Vec<u16>) -> Result<Group, GroupError> {
        debug_assert_eq!(table.len(), n * n);
        let at = |a: usize, b: usize| table[a * n + b] as usize;

        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(GroupError::NoIdentity)?;

        check_associative(n, &table)?;

        let mut inverses = vec![0u16; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or(GroupError::MissingInverse { element: x })?;
            inverses[x] = y as u16;
        }

        Ok(Group {
            order: n,
            table,
            identity,
            inverses,
            generators: OnceLock::new(),
        })
    }

    /// Builds one of the named groups with its documented element ordering.
    pub fn named(name: &GroupName) -> Result<Group, GroupError> {
        named::build(name, DEFAULT_MAX_ORDER)
    }

    pub fn named_with_limit(name: &GroupName, limit: usize) -> Result<Group, GroupError> {
        named::build(name, limit)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a] as usize
    }

    /// `g·x·g⁻¹`
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹·b⁻¹·a·b`
    #[inline]
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    /// Smallest `m ≥ 1` with `g^m = e`.
    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut m = 1;
        while x != self.identity {
            x = self.mul(x, g);
            m += 1;
        }
        m
    }

    pub fn pow(&self, g: usize, mut exp: usize) -> usize {
        let mut base = g;
        let mut acc = self.identity;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Row `a` of the table.
    pub fn row(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        self.table[a * self.order..(a + 1) * self.order]
            .iter()
            .map(|&v| v as usize)
    }

    pub fn to_rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).collect()).collect()
    }

    /// Greedy generating sequence: repeatedly adds the lowest-index element
    /// outside the subgroup generated so far.
    pub fn generators(&self) -> &[usize] {
        self.generators.get_or_init(|| {
            let mut gens = Vec::new();
            let mut inside = vec![false; self.order];
            inside[self.identity] = true;
            let mut members = vec![self.identity];
            while let Some(next) = inside.iter().position(|&b| !b) {
                gens.push(next);
                subgroup::close_into(self, &gens, &mut inside, &mut members);
            }
            gens
        })
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter()
            .enumerate()
            .all(|(i, &a)| gens[i + 1..].iter().all(|&b| self.commute(a, b)))
    }

    /// Relabels elements: element `x` of `self` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Group {
        let n = self.order;
        assert_eq!(perm.len(), n, "relabeling must cover every element");
        let mut table = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)] as u16;
            }
        }
        let mut inverses = vec![0u16; n];
        for a in 0..n {
            inverses[perm[a]] = perm[self.inv(a)] as u16;
        }
        Group {
            order: n,
            table,
            identity: perm[self.identity],
            inverses,
            generators: OnceLock::new(),
        }
    }

    /// Checks that `map` (indexed by elements of `self`) is an isomorphism
    /// onto `other`.
    pub fn is_isomorphism(&self, other: &Group, map: &[usize]) -> bool {
        if self.order != other.order || map.len() != self.order {
            return false;
        }
        let mut seen = vec![false; other.order];
        for &y in map {
            if y >= other.order || std::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        self.elements()
            .all(|a| self.elements().all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }
}

fn check_limit(n: usize, limit: usize) -> Result<(), GroupError> {
    let limit = limit.min(ABSOLUTE_MAX_ORDER);
    if n > limit {
        Err(GroupError::TooLarge { order: n, limit })
    } else {
        Ok(())
    }
}

/// Light's associativity test: if `S` generates the magma and
/// `(x·s)·y = x·(s·y)` for every `s ∈ S`, the operation is associative.
/// On failure the lexicographically first violating triple is reported.
fn check_associative(n: usize, table: &[u16]) -> Result<(), GroupError> {
    let at = |a: usize, b: usize| table[a * n + b] as usize;

    // Magma generators: elements reached by right multiplication from the
    // chosen generators cover everything.
    let mut gens: Vec<usize> = Vec::new();
    let mut covered = vec![false; n];
    while let Some(next) = covered.iter().position(|&c| !c) {
        gens.push(next);
        covered.iter_mut().for_each(|c| *c = false);
        let mut queue: Vec<usize> = Vec::new();
        for &g in &gens {
            if !covered[g] {
                covered[g] = true;
                queue.push(g);
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in &gens {
                let y = at(x, g);
                if !covered[y] {
                    covered[y] = true;
                    queue.push(y);
                }
            }
        }
    }

    let light_ok = gens.iter().all(|&s| {
        (0..n).all(|x| {
            let xs = at(x, s);
            (0..n).all(|y| at(xs, y) == at(x, at(s, y)))
        })
    });
    if light_ok {
        return Ok(());
    }
    for a in 0..n {
        for b in 0..n {
            let ab = at(a, b);
            for c in 0..n {
                if at(ab, c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }
    unreachable!("Light's test failed but no violating triple exists")
}
