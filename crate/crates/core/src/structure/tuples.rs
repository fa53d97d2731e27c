//! Types of element tuples: partial isomorphism (which products among the
//! tuple entries hold) and marked isomorphism (isomorphism type of the
//! generated subgroup with the generators marked).

use crate::group::Group;

use super::StructureError;

/// Equality pattern plus every relation `x_i·x_j = x_l` over index triples.
/// Two tuples are partially isomorphic exactly when their types are equal.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialType {
    k: usize,
    bits: Vec<u64>,
}

impl PartialType {
    pub fn of(g: &Group, tuple: &[usize]) -> PartialType {
        let k = tuple.len();
        let mut bits = vec![0u64; (k * k + k * k * k).div_ceil(64).max(1)];
        let mut set = |pos: usize| bits[pos / 64] |= 1 << (pos % 64);
        for i in 0..k {
            for j in 0..k {
                if tuple[i] == tuple[j] {
                    set(i * k + j);
                }
            }
        }
        let base = k * k;
        for i in 0..k {
            for j in 0..k {
                let p = g.mul(tuple[i], tuple[j]);
                for (l, &x) in tuple.iter().enumerate() {
                    if p == x {
                        set(base + (i * k + j) * k + l);
                    }
                }
            }
        }
        PartialType { k, bits }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }
}

/// Transition table of the breadth-first closure automaton of `⟨x̄⟩`.
///
/// States are the elements of `⟨x̄⟩` numbered in discovery order, starting
/// from the identity and right-multiplying by `x_1, …, x_k` in index order.
/// `marks[i]` is the state reached by `x_i`; coincidences among the `x_i`
/// show up as equal marks. Equal types ⇔ marked isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkedType {
    k: usize,
    marks: Vec<u32>,
    transitions: Vec<u32>,
}

impl MarkedType {
    pub fn of(g: &Group, tuple: &[usize]) -> MarkedType {
        let (ty, _) = Self::with_elements(g, tuple);
        ty
    }

    /// Also returns the elements of `⟨x̄⟩` in discovery order, which gives
    /// the marked isomorphism between two tuples of equal type.
    pub fn with_elements(g: &Group, tuple: &[usize]) -> (MarkedType, Vec<usize>) {
        let k = tuple.len();
        let mut state = std::collections::HashMap::new();
        let mut order = vec![g.identity()];
        state.insert(g.identity(), 0u32);
        let mut transitions = Vec::new();
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for &s in tuple {
                let y = g.mul(x, s);
                let next = order.len() as u32;
                let id = *state.entry(y).or_insert_with(|| {
                    order.push(y);
                    next
                });
                transitions.push(id);
            }
        }
        let marks = transitions[..k].to_vec();
        (
            MarkedType {
                k,
                marks,
                transitions,
            },
            order,
        )
    }

    /// Order of the generated subgroup.
    pub fn subgroup_order(&self) -> usize {
        if self.k == 0 {
            1
        } else {
            self.transitions.len() / self.k
        }
    }

    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }
}

fn check_lengths(x: &[usize], y: &[usize]) -> Result<(), StructureError> {
    if x.len() == y.len() {
        Ok(())
    } else {
        Err(StructureError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        })
    }
}

/// `x_i = x_j ⇔ y_i = y_j` and `x_i x_j = x_l ⇔ y_i y_j = y_l` for all
/// index pairs and triples.
pub fn tuple_partial_iso(g: &Group, x: &[usize], h: &Group, y: &[usize]) -> Result<bool, StructureError> {
    check_lengths(x, y)?;
    Ok(PartialType::of(g, x) == PartialType::of(h, y))
}

/// `x_i ↦ y_i` is well defined and extends to an isomorphism
/// `⟨x̄⟩ → ⟨ȳ⟩`.
pub fn tuple_marked_iso(g: &Group, x: &[usize], h: &Group, y: &[usize]) -> Result<bool, StructureError> {
    check_lengths(x, y)?;
    Ok(MarkedType::of(g, x) == MarkedType::of(h, y))
}

pub fn marked_type_signature(g: &Group, x: &[usize]) -> MarkedType {
    MarkedType::of(g, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupName;
    use itertools::Itertools;

    fn named(s: &str) -> Group {
        Group::named(&s.parse::<GroupName>().unwrap()).unwrap()
    }

    #[test]
    fn partial_iso_examples() {
        let z4 = named("Z4");
        let v4 = named("Z2xZ2");
        assert!(tuple_partial_iso(&z4, &[0], &v4, &[0]).unwrap());
        // 1-tuples only see g·g = g.
        assert!(tuple_partial_iso(&z4, &[1], &v4, &[1]).unwrap());
        // (g, g²) vs (h, h'): h·h = e ≠ h'.
        assert!(!tuple_partial_iso(&z4, &[1, 2], &v4, &[1, 2]).unwrap());
        assert!(matches!(
            tuple_partial_iso(&z4, &[1], &v4, &[1, 2]),
            Err(StructureError::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn marked_iso_examples() {
        let z4 = named("Z4");
        let v4 = named("Z2xZ2");
        assert!(tuple_marked_iso(&z4, &[1, 3], &z4, &[1, 3]).unwrap());
        assert!(!tuple_marked_iso(&z4, &[1], &v4, &[1]).unwrap());
        let s3 = named("S3");
        // (12) = [1,0,2] = 2, (13) = [2,1,0] = 5, (23) = [0,2,1] = 1.
        assert!(tuple_marked_iso(&s3, &[2, 5], &s3, &[2, 1]).unwrap());
    }

    /// Brute force: does `x_i ↦ y_i` extend to an isomorphism of the
    /// generated subgroups? Tries every bijection between them.
    fn marked_iso_oracle(g: &Group, x: &[usize], h: &Group, y: &[usize]) -> bool {
        use crate::group::SubgroupSet;
        let sx = SubgroupSet::generate(g, x);
        let sy = SubgroupSet::generate(h, y);
        if sx.order() != sy.order() {
            return false;
        }
        sy.elements().iter().copied().permutations(sy.order()).any(|images| {
            let map = |a: usize| images[sx.elements().binary_search(&a).unwrap()];
            x.iter().zip(y).all(|(&a, &b)| map(a) == b)
                && sx
                    .elements()
                    .iter()
                    .all(|&a| sx.elements().iter().all(|&b| map(g.mul(a, b)) == h.mul(map(a), map(b))))
        })
    }

    #[test]
    fn marked_type_matches_oracle_on_s3_pairs() {
        let s3 = named("S3");
        let pairs: Vec<[usize; 2]> = (0..6).flat_map(|a| (0..6).map(move |b| [a, b])).collect();
        for x in &pairs {
            for y in &pairs {
                assert_eq!(
                    tuple_marked_iso(&s3, x, &s3, y).unwrap(),
                    marked_iso_oracle(&s3, x, &s3, y),
                    "{x:?} {y:?}"
                );
            }
        }
    }

    #[test]
    fn marked_implies_partial() {
        let g = named("dihedral(4)");
        let h = named("Q8");
        for x in (0..8).cartesian_product(0..8) {
            for y in (0..8).cartesian_product(0..8) {
                let (x, y) = ([x.0, x.1], [y.0, y.1]);
                if tuple_marked_iso(&g, &x, &h, &y).unwrap() {
                    assert!(tuple_partial_iso(&g, &x, &h, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn subgroup_order() {
        let a5 = named("A5");
        let gens = a5.generators().to_vec();
        assert_eq!(MarkedType::of(&a5, &gens).subgroup_order(), 60);
        assert_eq!(MarkedType::of(&a5, &[]).subgroup_order(), 1);
    }
}
