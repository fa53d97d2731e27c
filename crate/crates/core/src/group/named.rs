//! Named constructors with fixed, documented element orderings.
//!
//! * `cyclic(n)`: element `i` is `i mod n`.
//! * `dihedral(m)`: index `f·m + i` is `r^i s^f` with `s r s = r⁻¹`.
//! * `symmetric(m)`, `alternating(m)`: permutations of `0..m` in
//!   lexicographic one-line order (even ones only for `alternating`), with
//!   `(σ·τ)(x) = σ(τ(x))`.
//! * `quaternion8`: `[1, -1, i, -i, j, -j, k, -k]`.
//! * `direct_product(A, B)`: index `a·|B| + b` is `(a, b)`.
//! * `swap_wreath(T)`: index `s·|T|² + a·|T| + b` is `(a, b)τ^s` where `τ`
//!   swaps the coordinates of `T × T`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;

use super::{check_limit, Group, GroupError};

pub const MAX_SYMMETRIC_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GroupName {
    Cyclic(usize),
    Dihedral(usize),
    Symmetric(usize),
    Alternating(usize),
    Quaternion8,
    DirectProduct(Box<GroupName>, Box<GroupName>),
    SwapWreath(Box<GroupName>),
}

impl GroupName {
    pub fn product(a: GroupName, b: GroupName) -> GroupName {
        GroupName::DirectProduct(Box::new(a), Box::new(b))
    }

    pub fn swap_wreath(t: GroupName) -> GroupName {
        GroupName::SwapWreath(Box::new(t))
    }

    /// Order of the group this name describes, without building it.
    pub fn order(&self) -> usize {
        match self {
            GroupName::Cyclic(n) => *n,
            GroupName::Dihedral(m) => 2 * m,
            GroupName::Symmetric(m) => factorial(*m),
            GroupName::Alternating(m) => factorial(*m) / 2,
            GroupName::Quaternion8 => 8,
            GroupName::DirectProduct(a, b) => a.order() * b.order(),
            GroupName::SwapWreath(t) => 2 * t.order() * t.order(),
        }
    }

    fn validate(&self) -> Result<(), GroupError> {
        let bad = |msg: String| Err(GroupError::ParameterOutOfRange(msg));
        match self {
            GroupName::Cyclic(0) => bad("cyclic(n) needs n >= 1".into()),
            GroupName::Dihedral(0) => bad("dihedral(m) needs m >= 1".into()),
            GroupName::Symmetric(m) if !(1..=MAX_SYMMETRIC_DEGREE).contains(m) => {
                bad(format!("symmetric(m) needs 1 <= m <= {MAX_SYMMETRIC_DEGREE}"))
            }
            GroupName::Alternating(m) if !(2..=MAX_SYMMETRIC_DEGREE).contains(m) => {
                bad(format!("alternating(m) needs 2 <= m <= {MAX_SYMMETRIC_DEGREE}"))
            }
            GroupName::DirectProduct(a, b) => a.validate().and(b.validate()),
            GroupName::SwapWreath(t) => t.validate(),
            _ => Ok(()),
        }
    }
}

fn factorial(m: usize) -> usize {
    (1..=m).product()
}

pub(super) fn build(name: &GroupName, limit: usize) -> Result<Group, GroupError> {
    name.validate()?;
    check_limit(name.order(), limit)?;
    let (n, table) = raw_table(name);
    Group::from_flat(n, table)
}

fn raw_table(name: &GroupName) -> (usize, Vec<u16>) {
    match name {
        GroupName::Cyclic(n) => {
            let n = *n;
            (n, fill(n, |a, b| (a + b) % n))
        }
        GroupName::Dihedral(m) => {
            let m = *m;
            let mul = |x: usize, y: usize| {
                let (f, i) = (x / m, x % m);
                let (g, j) = (y / m, y % m);
                let rot = if f == 0 { (i + j) % m } else { (i + m - j) % m };
                ((f + g) % 2) * m + rot
            };
            (2 * m, fill(2 * m, mul))
        }
        GroupName::Symmetric(m) => permutation_table((0..*m).permutations(*m).collect()),
        GroupName::Alternating(m) => permutation_table(
            (0..*m)
                .permutations(*m)
                .filter(|p| is_even(p))
                .collect(),
        ),
        GroupName::Quaternion8 => {
            // Unit i, j, k products: sign and unit index (0=1, 1=i, 2=j, 3=k).
            const UNIT: [[(bool, usize); 4]; 4] = [
                [(false, 0), (false, 1), (false, 2), (false, 3)],
                [(false, 1), (true, 0), (false, 3), (true, 2)],
                [(false, 2), (true, 3), (true, 0), (false, 1)],
                [(false, 3), (false, 2), (true, 1), (true, 0)],
            ];
            let mul = |x: usize, y: usize| {
                let (ux, sx) = (x / 2, x % 2 == 1);
                let (uy, sy) = (y / 2, y % 2 == 1);
                let (neg, u) = UNIT[ux][uy];
                2 * u + usize::from(neg ^ sx ^ sy)
            };
            (8, fill(8, mul))
        }
        GroupName::DirectProduct(a, b) => {
            let (na, ta) = raw_table(a);
            let (nb, tb) = raw_table(b);
            let n = na * nb;
            let mul = |x: usize, y: usize| {
                let (xa, xb) = (x / nb, x % nb);
                let (ya, yb) = (y / nb, y % nb);
                ta[xa * na + ya] as usize * nb + tb[xb * nb + yb] as usize
            };
            (n, fill(n, mul))
        }
        GroupName::SwapWreath(t) => {
            let (m, tt) = raw_table(t);
            let sq = m * m;
            let tm = |a: usize, b: usize| tt[a * m + b] as usize;
            // (a,b)τ^s · (c,d)τ^u = (a,b)·τ^s(c,d)τ^{-s} · τ^{s+u}
            let mul = |x: usize, y: usize| {
                let (s, a, b) = (x / sq, (x % sq) / m, x % m);
                let (u, c, d) = (y / sq, (y % sq) / m, y % m);
                let (c, d) = if s == 1 { (d, c) } else { (c, d) };
                ((s + u) % 2) * sq + tm(a, c) * m + tm(b, d)
            };
            (2 * sq, fill(2 * sq, mul))
        }
    }
}

fn fill(n: usize, mul: impl Fn(usize, usize) -> usize) -> Vec<u16> {
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            table.push(mul(a, b) as u16);
        }
    }
    table
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_table(perms: Vec<Vec<usize>>) -> (usize, Vec<u16>) {
    let index: std::collections::HashMap<&[usize], usize> =
        perms.iter().enumerate().map(|(i, p)| (p.as_slice(), i)).collect();
    let n = perms.len();
    let mut composed = vec![0; perms.first().map_or(0, Vec::len)];
    let mut table = Vec::with_capacity(n * n);
    for s in &perms {
        for t in &perms {
            for (x, c) in composed.iter_mut().enumerate() {
                *c = s[t[x]];
            }
            table.push(index[composed.as_slice()] as u16);
        }
    }
    (n, table)
}

impl fmt::Display for GroupName {
    /// Short form: `Z4`, `S5`, `A5`, `Q8`, `dihedral(4)`, `A5xZ2`,
    /// `swap_wreath(A5)`. Products whose right factor is itself a product are
    /// bracketed, matching the left-associative parser.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupName::Cyclic(n) => write!(f, "Z{n}"),
            GroupName::Dihedral(m) => write!(f, "dihedral({m})"),
            GroupName::Symmetric(m) => write!(f, "S{m}"),
            GroupName::Alternating(m) => write!(f, "A{m}"),
            GroupName::Quaternion8 => write!(f, "Q8"),
            GroupName::DirectProduct(a, b) => match **b {
                GroupName::DirectProduct(..) => write!(f, "{a}x({b})"),
                _ => write!(f, "{a}x{b}"),
            },
            GroupName::SwapWreath(t) => write!(f, "swap_wreath({t})"),
        }
    }
}

impl FromStr for GroupName {
    type Err = GroupError;

    /// Accepts the short forms produced by `Display` as well as the long
    /// forms `cyclic(n)`, `symmetric(m)`, `alternating(m)`, `quaternion8`
    /// and `direct_product(A, B)`. `x` separates factors of a product.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = NameParser {
            src: compact.as_bytes(),
            pos: 0,
        };
        let name = p.product()?;
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        name.validate()?;
        Ok(name)
    }
}

struct NameParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl NameParser<'_> {
    fn error(&self, msg: &str) -> GroupError {
        GroupError::Parse {
            line: 0,
            message: format!(
                "group name {:?}: {msg} at offset {}",
                String::from_utf8_lossy(self.src),
                self.pos
            ),
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.src.get(self.pos) == Some(&c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), GroupError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn product(&mut self) -> Result<GroupName, GroupError> {
        let mut acc = self.atom()?;
        while self.eat(b'x') {
            let rhs = self.atom()?;
            acc = GroupName::product(acc, rhs);
        }
        Ok(acc)
    }

    fn number(&mut self) -> Result<usize, GroupError> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.error("expected a number"))
    }

    fn word(&mut self) -> &str {
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_lowercase() || *c == b'_' || c.is_ascii_digit())
        {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap()
    }

    fn parenthesized_number(&mut self) -> Result<usize, GroupError> {
        self.expect(b'(')?;
        let n = self.number()?;
        self.expect(b')')?;
        Ok(n)
    }

    fn atom(&mut self) -> Result<GroupName, GroupError> {
        match self.src.get(self.pos) {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.product()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'Z') => {
                self.pos += 1;
                Ok(GroupName::Cyclic(self.number()?))
            }
            Some(b'S') => {
                self.pos += 1;
                Ok(GroupName::Symmetric(self.number()?))
            }
            Some(b'A') => {
                self.pos += 1;
                Ok(GroupName::Alternating(self.number()?))
            }
            Some(b'Q') => {
                self.pos += 1;
                if self.number()? == 8 {
                    Ok(GroupName::Quaternion8)
                } else {
                    Err(self.error("only Q8 is available"))
                }
            }
            Some(c) if c.is_ascii_lowercase() => {
                let start = self.pos;
                // `x` is the product separator, so words never start with it.
                let word = self.word().to_owned();
                match word.as_str() {
                    "cyclic" => Ok(GroupName::Cyclic(self.parenthesized_number()?)),
                    "dihedral" => Ok(GroupName::Dihedral(self.parenthesized_number()?)),
                    "symmetric" => Ok(GroupName::Symmetric(self.parenthesized_number()?)),
                    "alternating" => Ok(GroupName::Alternating(self.parenthesized_number()?)),
                    "quaternion8" => Ok(GroupName::Quaternion8),
                    "direct_product" => {
                        self.expect(b'(')?;
                        let a = self.product()?;
                        self.expect(b',')?;
                        let b = self.product()?;
                        self.expect(b')')?;
                        Ok(GroupName::product(a, b))
                    }
                    "swap_wreath" => {
                        self.expect(b'(')?;
                        let t = self.product()?;
                        self.expect(b')')?;
                        Ok(GroupName::swap_wreath(t))
                    }
                    _ => {
                        self.pos = start;
                        Err(self.error("unknown group constructor"))
                    }
                }
            }
            _ => Err(self.error("expected a group name")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::SubgroupSet;

    fn build(s: &str) -> Group {
        Group::named(&s.parse().unwrap()).unwrap()
    }

    #[test]
    fn documented_orders() {
        for (name, order) in [
            ("cyclic(7)", 7),
            ("dihedral(5)", 10),
            ("symmetric(4)", 24),
            ("alternating(5)", 60),
            ("quaternion8", 8),
            ("direct_product(A5, Z2)", 120),
            ("swap_wreath(S3)", 72),
            ("A4xZ5", 60),
        ] {
            let parsed: GroupName = name.parse().unwrap();
            assert_eq!(parsed.order(), order, "{name}");
            assert_eq!(build(name).order(), order, "{name}");
        }
    }

    #[test]
    fn a5_has_trivial_center() {
        let a5 = build("A5");
        assert!(SubgroupSet::center(&a5).is_trivial());
    }

    #[test]
    fn display_round_trips() {
        for s in ["Z4", "Z2xZ2", "dihedral(15)", "A4xZ5", "swap_wreath(A5)", "Q8", "S3x(Z2xZ2)"] {
            let name: GroupName = s.parse().unwrap();
            assert_eq!(name.to_string(), s);
            assert_eq!(name.to_string().parse::<GroupName>().unwrap(), name);
        }
    }

    #[test]
    fn parameter_ranges() {
        for bad in ["Z0", "S7", "A1", "dihedral(0)", "swap_wreath(S9)"] {
            assert!(
                matches!(bad.parse::<GroupName>(), Err(GroupError::ParameterOutOfRange(_))),
                "{bad}"
            );
        }
        assert!(matches!("foo(3)".parse::<GroupName>(), Err(GroupError::Parse { .. })));
        assert!(matches!("Z4)".parse::<GroupName>(), Err(GroupError::Parse { .. })));
    }

    #[test]
    fn quaternion_relations() {
        let q = build("Q8");
        let (one, minus_one, i, j, k) = (0, 1, 2, 4, 6);
        assert_eq!(q.identity(), one);
        assert_eq!(q.mul(i, i), minus_one);
        assert_eq!(q.mul(i, j), k);
        assert_eq!(q.mul(j, i), k + 1);
        assert_eq!(q.elements().filter(|&x| q.element_order(x) == 2).count(), 1);
    }

    #[test]
    fn swap_wreath_structure() {
        let w = build("swap_wreath(S3)");
        let base = SubgroupSet::generate(&w, &(0..36).collect::<Vec<_>>());
        assert_eq!(base.order(), 36);
        assert!(base.is_normal(&w));
        // τ swaps the coordinates: τ (a, b) τ⁻¹ = (b, a).
        let tau = 36;
        assert_eq!(w.conj(tau, 1 * 6 + 2), 2 * 6 + 1);
    }

    #[test]
    fn symmetric_ordering_is_lexicographic() {
        let s3 = build("S3");
        // [0,2,1]∘[1,0,2] = [2,0,1] (index 4).
        assert_eq!(s3.mul(1, 2), 4);
        assert_eq!(s3.identity(), 0);
    }
}
