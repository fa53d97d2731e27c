#![allow(dead_code)]

use groupwl::catalog;
use groupwl::group::Group;
use proptest::prelude::*;

pub fn named(s: &str) -> Group {
    Group::named_with_limit(&catalog::resolve(s).unwrap(), usize::MAX).unwrap()
}

/// A catalog group of order at most `max`, under a random relabeling.
pub fn arb_group(max: usize) -> impl Strategy<Value = (String, Group)> {
    let entries = catalog::up_to_order(max);
    (0..entries.len()).prop_flat_map(move |i| {
        let e = entries[i].clone();
        let g = e.build().unwrap();
        let n = g.order();
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(move |perm| (e.name.clone(), g.relabel(&perm)))
    })
}

/// A group together with `k` of its elements.
pub fn arb_group_tuple(max: usize, k: usize) -> impl Strategy<Value = (String, Group, Vec<usize>)> {
    arb_group(max).prop_flat_map(move |(name, g)| {
        let n = g.order();
        proptest::collection::vec(0..n, k).prop_map(move |t| (name.clone(), g.clone(), t))
    })
}
