//! Normal structure of finite groups: minimal normal subgroups, socle,
//! solvable radical, socle factors and the permutation action on them.
//!
//! Normal subgroups are found as normal closures of conjugacy classes, which
//! is complete because every minimal normal subgroup is the normal closure
//! of any of its non-identity elements.

mod iso;
mod socle;
mod tuples;

use thiserror::Error;

use crate::group::{normal_closure_under, Closure, Group, SubgroupSet};

pub use iso::{all_isomorphisms, brute_force_isomorphic, extend_socle_isomorphism, SearchBudget};
pub use socle::{pker, soc_factors, PermAction, SocleDecomposition};
pub use tuples::{
    marked_type_signature, tuple_marked_iso, tuple_partial_iso, MarkedType, PartialType,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("group is not semisimple (it has an abelian normal subgroup)")]
    NotSemisimple,
    #[error("element {element} is not in the socle")]
    NotInSocle { element: usize },
    #[error("tuple lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("map is not an isomorphism between the socles: {0}")]
    NotSocleIso(String),
    #[error("the centralizer of the socle of the {0} group is nontrivial")]
    NontrivialCentralizer(&'static str),
    #[error("no pair of elements generates socle factor {factor}")]
    NoGeneratingPair { factor: usize },
    #[error("search budget exhausted")]
    BudgetExceeded,
}

/// Conjugacy classes of the elements in `domain` under conjugation by the
/// group generated by `conjugators`. Classes are sorted, and listed by their
/// smallest element.
pub(crate) fn classes_under(g: &Group, conjugators: &[usize], domain: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; g.order()];
    let mut classes = Vec::new();
    for &x in domain {
        if seen[x] {
            continue;
        }
        seen[x] = true;
        let mut class = vec![x];
        let mut head = 0;
        while head < class.len() {
            let y = class[head];
            head += 1;
            for &c in conjugators {
                let z = g.conj(c, y);
                if !seen[z] {
                    seen[z] = true;
                    class.push(z);
                }
            }
        }
        class.sort_unstable();
        classes.push(class);
    }
    classes.sort();
    classes
}

pub fn conjugacy_classes(g: &Group) -> Vec<Vec<usize>> {
    let all: Vec<usize> = g.elements().collect();
    classes_under(g, g.generators(), &all)
}

/// Minimal normal subgroups of the subgroup `ambient` (generated by
/// `conjugators`), i.e. minimal nontrivial subgroups of `ambient` normalized
/// by it.
fn minimal_normal_in(g: &Group, conjugators: &[usize], ambient: &[usize]) -> Vec<SubgroupSet> {
    let mut candidates: Vec<SubgroupSet> = Vec::new();
    for class in classes_under(g, conjugators, ambient) {
        let rep = class[0];
        if rep == g.identity() {
            continue;
        }
        let ncl = normal_closure_under(g, conjugators, &[rep]).into_subgroup();
        if !candidates.contains(&ncl) {
            candidates.push(ncl);
        }
    }
    let mut minimal: Vec<SubgroupSet> = candidates
        .iter()
        .filter(|n| {
            !candidates
                .iter()
                .any(|m| m.order() < n.order() && m.is_subset_of(n))
        })
        .cloned()
        .collect();
    minimal.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.cmp(b)));
    minimal
}

/// Nontrivial normal subgroups containing no smaller nontrivial normal
/// subgroup, ordered by size and then by elements.
pub fn minimal_normal_subgroups(g: &Group) -> Vec<SubgroupSet> {
    let all: Vec<usize> = g.elements().collect();
    minimal_normal_in(g, g.generators(), &all)
}

fn join_all(g: &Group, subgroups: &[SubgroupSet]) -> SubgroupSet {
    let mut c = Closure::new(g);
    for s in subgroups {
        for x in s.generators(g) {
            c.add(x);
        }
    }
    c.into_subgroup()
}

/// Subgroup generated by all minimal normal subgroups.
pub fn socle(g: &Group) -> SubgroupSet {
    join_all(g, &minimal_normal_subgroups(g))
}

/// Join of the abelian minimal normal subgroups; abelian itself, since
/// distinct minimal normal subgroups commute elementwise.
fn abelian_socle(g: &Group) -> SubgroupSet {
    let abelian: Vec<SubgroupSet> = minimal_normal_subgroups(g)
        .into_iter()
        .filter(|n| n.is_abelian(g))
        .collect();
    join_all(g, &abelian)
}

/// The largest solvable normal subgroup.
///
/// Repeatedly pulls back the abelian minimal normal subgroups of `G/R`
/// until the quotient has none.
pub fn solvable_radical(g: &Group) -> SubgroupSet {
    let first = abelian_socle(g);
    if first.is_trivial() {
        return first;
    }
    let mut rad = first;
    loop {
        let q = rad
            .quotient(g)
            .expect("the radical built so far is normal by construction");
        let layer = abelian_socle(&q.group);
        if layer.is_trivial() {
            return rad;
        }
        rad = SubgroupSet::preimage(&q, &layer);
    }
}

/// No abelian minimal normal subgroup, equivalently a trivial solvable
/// radical.
pub fn is_semisimple(g: &Group) -> bool {
    minimal_normal_subgroups(g).iter().all(|n| !n.is_abelian(g))
}

/// `[H, H]` for a subgroup `H` of `g`.
pub fn derived_subgroup(g: &Group, h: &SubgroupSet) -> SubgroupSet {
    let gens = h.generators(g);
    let commutators: Vec<usize> = gens
        .iter()
        .flat_map(|&a| gens.iter().map(move |&b| (a, b)))
        .map(|(a, b)| g.commutator(a, b))
        .collect();
    normal_closure_under(g, &gens, &commutators).into_subgroup()
}

pub fn is_solvable(g: &Group, h: &SubgroupSet) -> bool {
    let mut current = h.clone();
    while !current.is_trivial() {
        let next = derived_subgroup(g, &current);
        if next == current {
            return false;
        }
        current = next;
    }
    true
}

/// Minimal normal subgroups of `n` itself (normalized by `n`, not by `g`).
pub(crate) fn minimal_normal_of_subgroup(g: &Group, n: &SubgroupSet) -> Vec<SubgroupSet> {
    minimal_normal_in(g, &n.generators(g), n.elements())
}

/// Whether `h` has no nontrivial proper normal subgroup of its own.
pub fn is_simple(g: &Group, h: &SubgroupSet) -> bool {
    !h.is_trivial() && minimal_normal_of_subgroup(g, h) == vec![h.clone()]
}

/// Whether `h` is a direct product of nonabelian simple groups: its own
/// minimal normal subgroups are nonabelian simple and their orders multiply
/// to `|h|`.
pub fn is_nonabelian_semisimple_product(g: &Group, h: &SubgroupSet) -> bool {
    if h.is_trivial() {
        return true;
    }
    let factors = minimal_normal_of_subgroup(g, h);
    let product: usize = factors.iter().map(SubgroupSet::order).product();
    product == h.order()
        && factors
            .iter()
            .all(|s| !s.is_abelian(g) && is_simple(g, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupName;

    fn named(s: &str) -> Group {
        Group::named(&s.parse::<GroupName>().unwrap()).unwrap()
    }

    #[test]
    fn minimal_normal_examples() {
        let s3 = named("S3");
        let mins = minimal_normal_subgroups(&s3);
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].order(), 3);

        let a5 = named("A5");
        let mins = minimal_normal_subgroups(&a5);
        assert_eq!(mins, vec![SubgroupSet::whole(&a5)]);

        let v4 = named("Z2xZ2");
        let mins = minimal_normal_subgroups(&v4);
        assert_eq!(mins.len(), 3);
        assert!(mins.iter().all(|m| m.order() == 2));
    }

    #[test]
    fn socle_examples() {
        assert_eq!(socle(&named("A5")).order(), 60);
        let s4 = named("S4");
        let soc = socle(&s4);
        assert_eq!(soc.order(), 4);
        assert!(soc.is_abelian(&s4));
        assert!(socle(&named("Z1")).is_trivial());
    }

    #[test]
    fn radical_examples() {
        let s4 = named("S4");
        assert_eq!(solvable_radical(&s4).order(), 24);
        assert!(solvable_radical(&named("A5")).is_trivial());
        assert!(solvable_radical(&named("S5")).is_trivial());
        let a4z5 = named("A4xZ5");
        assert_eq!(solvable_radical(&a4z5).order(), 60);
        let a5z2 = named("A5xZ2");
        assert_eq!(solvable_radical(&a5z2).order(), 2);
    }

    #[test]
    fn semisimple_examples() {
        assert!(is_semisimple(&named("A5")));
        assert!(!is_semisimple(&named("S4")));
        assert!(!is_semisimple(&named("Z6")));
        assert!(is_semisimple(&named("Z1")));
        assert!(is_semisimple(&named("S5")));
    }

    #[test]
    fn derived_series() {
        let s4 = named("S4");
        let d1 = derived_subgroup(&s4, &SubgroupSet::whole(&s4));
        assert_eq!(d1.order(), 12);
        assert_eq!(derived_subgroup(&s4, &d1).order(), 4);
        assert!(is_solvable(&s4, &SubgroupSet::whole(&s4)));
        let a5 = named("A5");
        assert!(!is_solvable(&a5, &SubgroupSet::whole(&a5)));
    }

    #[test]
    fn class_counts() {
        assert_eq!(conjugacy_classes(&named("S4")).len(), 5);
        assert_eq!(conjugacy_classes(&named("A5")).len(), 5);
        assert_eq!(conjugacy_classes(&named("Q8")).len(), 5);
        assert_eq!(conjugacy_classes(&named("Z6")).len(), 6);
    }

    #[test]
    fn simple_products() {
        let g = named("A5xA5");
        assert!(is_nonabelian_semisimple_product(&g, &SubgroupSet::whole(&g)));
        let s5 = named("S5");
        assert!(!is_nonabelian_semisimple_product(&s5, &SubgroupSet::whole(&s5)));
        let a5 = named("A5");
        assert!(is_simple(&a5, &SubgroupSet::whole(&a5)));
    }
}
