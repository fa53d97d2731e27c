use groupwl::canon::{canonical_class, canonical_form, color_isomorphic, CanonError, EdgeColoredGraph};
use itertools::Itertools;
use proptest::prelude::*;

fn arb_graph(max_n: usize, colors: u32) -> impl Strategy<Value = EdgeColoredGraph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec(0..colors, n * n).prop_map(move |c| EdgeColoredGraph::complete(n, c))
    })
}

fn arb_graph_perm(max_n: usize, colors: u32) -> impl Strategy<Value = (EdgeColoredGraph, Vec<usize>)> {
    arb_graph(max_n, colors).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

fn brute_isomorphic(a: &EdgeColoredGraph, b: &EdgeColoredGraph) -> bool {
    let n = a.n();
    n == b.n()
        && (0..n)
            .permutations(n)
            .any(|p| (0..n).all(|y| (0..n).all(|z| a.color(y, z) == b.color(p[y], p[z]))))
}

#[test]
fn mode_and_size_mismatches() {
    let loops = EdgeColoredGraph::loops_only(vec![0, 1]);
    let full = EdgeColoredGraph::complete(2, vec![0, 1, 1, 0]);
    assert_eq!(color_isomorphic(&loops, &full), Err(CanonError::ModeMismatch));
    let small = EdgeColoredGraph::complete(1, vec![0]);
    assert!(matches!(color_isomorphic(&small, &full), Err(CanonError::SizeMismatch(1, 2))));
    assert_ne!(canonical_class(&loops), canonical_class(&full));
}

#[test]
fn loops_only_classes_count_colors() {
    let a = EdgeColoredGraph::loops_only(vec![3, 1, 3, 2]);
    let b = EdgeColoredGraph::loops_only(vec![1, 2, 3, 3]);
    let c = EdgeColoredGraph::loops_only(vec![1, 2, 2, 3]);
    assert_eq!(canonical_class(&a), canonical_class(&b));
    assert_ne!(canonical_class(&a), canonical_class(&c));
}

#[test]
fn regular_graphs_need_search() {
    // Directed 6-cycle against two directed 3-cycles: every vertex looks the same.
    let cycle = |len: usize, n: usize| {
        EdgeColoredGraph::complete_from_fn(n, move |y, z| u32::from(z / len == y / len && z % len == (y + 1) % len))
    };
    let one = cycle(6, 6);
    let two = cycle(3, 6);
    assert_ne!(canonical_class(&one), canonical_class(&two));
    assert!(!color_isomorphic(&one, &two).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn class_is_invariant_under_relabeling((g, sigma) in arb_graph_perm(9, 3)) {
        prop_assert_eq!(canonical_class(&g), canonical_class(&g.permute(&sigma)));
    }

    #[test]
    fn labeling_produces_the_form((g, sigma) in arb_graph_perm(8, 3)) {
        let (form, labeling) = canonical_form(&g);
        prop_assert_eq!(&g.permute(&labeling), &form);
        prop_assert_eq!(&canonical_form(&g.permute(&sigma)).0, &form);
        // Canonizing a canonical form changes nothing.
        prop_assert_eq!(canonical_form(&form).0, form);
    }

    #[test]
    fn classes_agree_with_brute_force(a in arb_graph(6, 2), b in arb_graph(6, 2)) {
        let same = canonical_class(&a) == canonical_class(&b);
        prop_assert_eq!(same, brute_isomorphic(&a, &b));
        if a.n() == b.n() {
            prop_assert_eq!(same, color_isomorphic(&a, &b).unwrap());
        }
    }

    #[test]
    fn near_copies_are_told_apart((g, sigma) in arb_graph_perm(6, 3), spot in any::<prop::sample::Index>(), color in 0u32..3) {
        let mut colors = g.permute(&sigma).colors().to_vec();
        let i = spot.index(colors.len());
        colors[i] = color;
        let b = EdgeColoredGraph::complete(g.n(), colors);
        prop_assert_eq!(canonical_class(&g) == canonical_class(&b), brute_isomorphic(&g, &b));
    }

    #[test]
    fn recoloring_both_sides_keeps_the_verdict(a in arb_graph(6, 3), b in arb_graph(6, 3), shift in 1u32..100) {
        let recolor = |g: &EdgeColoredGraph| {
            EdgeColoredGraph::complete(g.n(), g.colors().iter().map(|&c| (c + shift) * 7).collect())
        };
        prop_assert_eq!(
            canonical_class(&a) == canonical_class(&b),
            canonical_class(&recolor(&a)) == canonical_class(&recolor(&b))
        );
    }
}
