mod common;

use common::{arb_group, named};
use groupwl::group::{parse_table, write_table, Group, GroupError, SubgroupSet};
use groupwl::structure::{derived_subgroup, minimal_normal_subgroups};
use proptest::prelude::*;

#[test]
fn rejects_broken_tables_in_order() {
    let cases: [(&str, fn(&GroupError) -> bool); 5] = [
        ("0\n", |e| matches!(e, GroupError::Empty | GroupError::Parse { .. })),
        ("2\n0 1\n1\n", |e| matches!(e, GroupError::NotSquare { .. } | GroupError::Parse { .. })),
        ("2\n0 1\n1 2\n", |e| matches!(e, GroupError::NotClosed { .. })),
        ("2\n1 1\n1 1\n", |e| matches!(e, GroupError::NoIdentity)),
        ("3\n0 1 2\n1 2 0\n2 1 0\n", |e| matches!(e, GroupError::NotAssociative { .. })),
    ];
    for (text, expected) in cases {
        let err = parse_table(text).unwrap_err();
        assert!(expected(&err), "{text:?} gave {err:?}");
    }
}

#[test]
fn missing_inverse_is_reported() {
    // Associative monoid {0, 1} under max, plus identity 2: no inverse for 1.
    let rows = vec![vec![0, 1, 0], vec![1, 1, 1], vec![0, 1, 2]];
    assert!(matches!(
        Group::from_table(&rows),
        Err(GroupError::MissingInverse { .. })
    ));
}

#[test]
fn table_round_trip_keeps_labels() {
    let g = named("S3");
    let text = format!("# a comment\n{}", write_table(&g));
    assert_eq!(parse_table(&text).unwrap(), g);
}

#[test]
fn order_limit() {
    let text = write_table(&named("Z16"));
    assert!(matches!(
        groupwl::group::parse_table_with_limit(&text, 8),
        Err(GroupError::TooLarge { order: 16, limit: 8 })
    ));
}

#[test]
fn quotient_of_s4_by_v4_is_s3() {
    let s4 = named("S4");
    let v4 = minimal_normal_subgroups(&s4).remove(0);
    assert_eq!(v4.order(), 4);
    let q = v4.quotient(&s4).unwrap();
    assert_eq!(q.group.order(), 6);
    assert!(!q.group.is_abelian());
}

#[test]
fn non_normal_quotient_fails() {
    let s3 = named("S3");
    let h = s3.elements().find(|&x| s3.element_order(x) == 2).unwrap();
    let sub = SubgroupSet::generate(&s3, &[h]);
    assert!(matches!(sub.quotient(&s3), Err(GroupError::NotNormal { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generate_is_idempotent((_, g) in arb_group(24), picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..3)) {
        let gens: Vec<usize> = picks.iter().map(|i| i.index(g.order())).collect();
        let h = SubgroupSet::generate(&g, &gens);
        prop_assert_eq!(SubgroupSet::generate(&g, h.elements()), h.clone());
        prop_assert_eq!(g.order() % h.order(), 0);
        for &a in h.elements() {
            for &b in h.elements() {
                prop_assert!(h.contains(g.mul(a, g.inv(b))));
            }
        }
    }

    #[test]
    fn projection_is_a_homomorphism((_, g) in arb_group(24)) {
        let normals = [derived_subgroup(&g, &SubgroupSet::whole(&g)), SubgroupSet::center(&g)];
        for n in normals {
            let q = n.quotient(&g).unwrap();
            prop_assert_eq!(q.group.order() * n.order(), g.order());
            for a in g.elements() {
                for b in g.elements() {
                    prop_assert_eq!(q.projection[g.mul(a, b)], q.group.mul(q.projection[a], q.projection[b]));
                }
            }
        }
    }

    #[test]
    fn relabeled_tables_round_trip((_, g) in arb_group(16)) {
        let back = parse_table(&write_table(&g)).unwrap();
        prop_assert_eq!(&back, &g);
        let ident: Vec<usize> = g.elements().collect();
        prop_assert!(g.is_isomorphism(&back, &ident));
    }

    #[test]
    fn inverses_and_orders((_, g) in arb_group(24)) {
        for x in g.elements() {
            prop_assert_eq!(g.mul(x, g.inv(x)), g.identity());
            prop_assert_eq!(g.pow(x, g.element_order(x)), g.identity());
            prop_assert_eq!(g.order() % g.element_order(x), 0);
        }
    }
}
