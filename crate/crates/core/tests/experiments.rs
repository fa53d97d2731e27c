use groupwl::catalog;
use groupwl::experiments::{check_equivalence, equal_order_pairs, separation, GridParams};

#[test]
fn catalog_names_resolve_and_build() {
    for e in catalog::catalog() {
        let g = e.build().unwrap();
        assert_eq!(g.order(), e.order(), "{}", e.name);
        assert_eq!(catalog::resolve(&e.name).unwrap(), e.group);
        for alias in e.aliases {
            assert_eq!(catalog::resolve(alias).unwrap(), e.group);
        }
    }
    assert_eq!(catalog::resolve("D30").unwrap().order(), 30);
    assert!(catalog::resolve("Z0").is_err());
}

#[test]
fn pairs_share_orders() {
    let pairs = equal_order_pairs(&catalog::up_to_order(8));
    assert!(pairs.iter().all(|(a, b)| a.order() == b.order()));
    // Orders 4, 6 and 8 have 2, 2 and 5 entries.
    assert!(pairs.iter().any(|(a, b)| a.name == "Q8" && b.name == "dihedral(4)"));
}

#[test]
fn small_grid_passes_and_repeats() {
    let params = GridParams {
        max_order: 4,
        k: 2,
        max_rounds: 2,
        samples: 10,
        seed: 7,
    };
    let a = check_equivalence(&params).unwrap();
    assert!(a.passed());
    assert_eq!(a.key_values(), check_equivalence(&params).unwrap().key_values());
}

#[test]
fn separation_report_lines() {
    let report = separation("A5", &["D30"]).unwrap();
    assert_eq!(
        report.key_values(),
        "separation.A5.D30=first_distinguishing_round:0 stable_round:none\n"
    );
}
