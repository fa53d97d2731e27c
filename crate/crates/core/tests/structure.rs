mod common;

use common::{arb_group, arb_group_tuple, named};
use groupwl::group::Group;
use groupwl::structure::{
    brute_force_isomorphic, is_semisimple, marked_type_signature, pker, soc_factors, socle, solvable_radical,
    tuple_marked_iso, tuple_partial_iso, SearchBudget, StructureError,
};
use proptest::prelude::*;

#[test]
fn swap_wreath_socle_and_pker() {
    let g = named("swap_wreath(A5)");
    let dec = soc_factors(&g).unwrap();
    assert_eq!(dec.factors().len(), 2);
    assert!(dec.factors().iter().all(|f| f.order() == 60));
    assert_eq!(dec.socle().order(), 3600);
    assert_eq!(pker(&g).unwrap().order(), 3600);
    // The swap exchanges the two factors.
    let action = dec.perm_action();
    assert!(g.elements().any(|x| action.factor_permutation(x) == [1, 0]));
}

#[test]
fn weights_in_a5_squared() {
    let g = named("A5xA5");
    let dec = soc_factors(&g).unwrap();
    let swapped = dec.reordered(&[1, 0]);
    let mut by_weight = [0usize; 3];
    for x in g.elements() {
        let w = dec.weight(x).unwrap();
        assert_eq!(w, swapped.weight(x).unwrap());
        by_weight[w] += 1;
    }
    assert_eq!(by_weight, [1, 118, 59 * 59]);
}

#[test]
fn pker_needs_semisimple() {
    assert_eq!(pker(&named("S4")).unwrap_err(), StructureError::NotSemisimple);
    assert_eq!(pker(&named("S5")).unwrap().order(), 120);
}

#[test]
fn weight_outside_socle_is_an_error() {
    let s5 = named("S5");
    let dec = soc_factors(&s5).unwrap();
    let odd = s5.elements().find(|&x| !dec.socle().contains(x)).unwrap();
    assert!(matches!(dec.weight(odd), Err(StructureError::NotInSocle { .. })));
}

#[test]
fn nonisomorphic_groups_of_equal_order() {
    for (a, b) in [("Z4", "Z2xZ2"), ("Z6", "S3"), ("Q8", "dihedral(4)"), ("A4", "dihedral(6)")] {
        let (g, h) = (named(a), named(b));
        assert_eq!(brute_force_isomorphic(&g, &h, SearchBudget::unlimited()).unwrap(), None, "{a} {b}");
    }
}

#[test]
fn tuple_isomorphism_examples() {
    let z4 = named("Z4");
    let v4 = named("Z2xZ2");
    // Z4 has a single involution; its generator has order 4.
    let gen = z4.elements().find(|&x| z4.element_order(x) == 4).unwrap();
    let inv = v4.elements().find(|&x| v4.element_order(x) == 2).unwrap();
    assert!(tuple_partial_iso(&z4, &[gen], &v4, &[inv]).unwrap());
    assert!(!tuple_marked_iso(&z4, &[gen], &v4, &[inv]).unwrap());
    assert!(tuple_marked_iso(&z4, &[1, 2], &v4, &[1]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn relabeling_preserves_structure((name, g) in arb_group(24)) {
        let base = named(&name);
        prop_assert_eq!(socle(&g).order(), socle(&base).order());
        prop_assert_eq!(solvable_radical(&g).order(), solvable_radical(&base).order());
        prop_assert_eq!(is_semisimple(&g), is_semisimple(&base));
        let map = brute_force_isomorphic(&base, &g, SearchBudget::unlimited()).unwrap();
        prop_assert!(map.is_some_and(|m| base.is_isomorphism(&g, &m)));
    }

    #[test]
    fn marked_types_follow_relabelings((_, g, t) in arb_group_tuple(12, 3), seed in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = g.elements().collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.relabel(&perm);
        let image: Vec<usize> = t.iter().map(|&x| perm[x]).collect();
        prop_assert_eq!(marked_type_signature(&g, &t), marked_type_signature(&h, &image));
        prop_assert!(tuple_marked_iso(&g, &t, &h, &image).unwrap());
        prop_assert!(tuple_partial_iso(&g, &t, &h, &image).unwrap());
    }

    #[test]
    fn marked_implies_partial((_, g, x) in arb_group_tuple(8, 2), (_, h, y) in arb_group_tuple(8, 2)) {
        if tuple_marked_iso(&g, &x, &h, &y).unwrap() {
            prop_assert!(tuple_partial_iso(&g, &x, &h, &y).unwrap());
        }
    }

    #[test]
    fn socle_weight_is_a_relabeling_invariant(perm in Just((0..120).collect::<Vec<usize>>()).prop_shuffle()) {
        let s5 = named("S5");
        let g: Group = s5.relabel(&perm);
        let (a, b) = (soc_factors(&s5).unwrap(), soc_factors(&g).unwrap());
        prop_assert_eq!(a.socle().order(), 60);
        for x in a.socle().elements() {
            prop_assert_eq!(a.weight(*x).unwrap(), b.weight(perm[*x]).unwrap());
        }
        prop_assert_eq!(a.pker().order(), b.pker().order());
    }
}
