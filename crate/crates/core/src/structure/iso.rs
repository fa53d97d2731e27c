use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::group::{Group, SubgroupSet};

use super::{socle, MarkedType, StructureError};

/// Wall-clock limit for exhaustive searches.
#[derive(Debug, Clone, Copy, Default)]
pub struct SearchBudget {
    pub time: Option<Duration>,
}

impl SearchBudget {
    pub fn unlimited() -> Self {
        SearchBudget { time: None }
    }

    pub fn within(time: Duration) -> Self {
        SearchBudget { time: Some(time) }
    }

    fn deadline(&self) -> Option<Instant> {
        self.time.map(|t| Instant::now() + t)
    }
}

/// Extends an isomorphism `f: Soc(G) → Soc(H)` to `G → H` when `f` is a
/// permutational isomorphism of the conjugation actions.
///
/// For each `g`, the unique `h` whose conjugation on `Soc(H)` equals
/// `f ∘ c_g ∘ f⁻¹` is found by comparing images of a generating set of
/// `Soc(H)`. Uniqueness comes from the trivial centralizers; the assembled
/// map is verified to be an isomorphism before it is returned.
pub fn extend_socle_isomorphism(
    g: &Group,
    h: &Group,
    f: &HashMap<usize, usize>,
) -> Result<Option<Vec<usize>>, StructureError> {
    let soc_g = socle(g);
    let soc_h = socle(h);
    check_socle_iso(g, &soc_g, h, &soc_h, f)?;
    if !SubgroupSet::centralizer(g, soc_g.elements()).is_trivial() {
        return Err(StructureError::NontrivialCentralizer("first"));
    }
    if !SubgroupSet::centralizer(h, soc_h.elements()).is_trivial() {
        return Err(StructureError::NontrivialCentralizer("second"));
    }
    if g.order() != h.order() {
        return Ok(None);
    }

    let f_inv: HashMap<usize, usize> = f.iter().map(|(&a, &b)| (b, a)).collect();
    let targets = soc_h.generators(h);
    let by_action: HashMap<Vec<usize>, usize> = h
        .elements()
        .map(|y| (targets.iter().map(|&t| h.conj(y, t)).collect(), y))
        .collect();

    let mut map = Vec::with_capacity(g.order());
    for x in g.elements() {
        let wanted: Vec<usize> = targets
            .iter()
            .map(|&t| f[&g.conj(x, f_inv[&t])])
            .collect();
        match by_action.get(&wanted) {
            Some(&y) => map.push(y),
            None => return Ok(None),
        }
    }
    Ok(g.is_isomorphism(h, &map).then_some(map))
}

fn check_socle_iso(
    g: &Group,
    soc_g: &SubgroupSet,
    h: &Group,
    soc_h: &SubgroupSet,
    f: &HashMap<usize, usize>,
) -> Result<(), StructureError> {
    let fail = |msg: String| Err(StructureError::NotSocleIso(msg));
    if f.len() != soc_g.order() || soc_g.elements().iter().any(|x| !f.contains_key(x)) {
        return fail(format!(
            "domain has {} elements, the first socle has {}",
            f.len(),
            soc_g.order()
        ));
    }
    if soc_g.order() != soc_h.order() {
        return fail("socle orders differ".into());
    }
    let mut hit = vec![false; h.order()];
    for (&x, &y) in f {
        if y >= h.order() || !soc_h.contains(y) {
            return fail(format!("{x} maps outside the second socle"));
        }
        if std::mem::replace(&mut hit[y], true) {
            return fail(format!("{y} is hit twice"));
        }
    }
    for &a in soc_g.elements() {
        for &b in soc_g.elements() {
            if f[&g.mul(a, b)] != h.mul(f[&a], f[&b]) {
                return fail(format!("f({a}·{b}) != f({a})·f({b})"));
            }
        }
    }
    Ok(())
}

/// Generator-enumeration isomorphism test.
///
/// Fixes the greedy generating sequence of `G` and enumerates image tuples
/// in `H` in lexicographic order, pruning every prefix whose marked type
/// differs. The first full match gives the isomorphism.
pub fn brute_force_isomorphic(
    g: &Group,
    h: &Group,
    budget: SearchBudget,
) -> Result<Option<Vec<usize>>, StructureError> {
    let mut found = None;
    search(g, h, budget, &mut |map| {
        found = Some(map);
        false
    })?;
    Ok(found)
}

/// Every isomorphism `G → H`, in lexicographic order of generator images.
pub fn all_isomorphisms(g: &Group, h: &Group) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    search(g, h, SearchBudget::unlimited(), &mut |map| {
        all.push(map);
        true
    })
    .expect("an unlimited search cannot run out of budget");
    all
}

/// Calls `visit` on each isomorphism until it returns `false`.
fn search(
    g: &Group,
    h: &Group,
    budget: SearchBudget,
    visit: &mut dyn FnMut(Vec<usize>) -> bool,
) -> Result<(), StructureError> {
    if g.order() != h.order() {
        return Ok(());
    }
    let gens = g.generators();
    let prefix_types: Vec<MarkedType> = (0..=gens.len())
        .map(|j| MarkedType::of(g, &gens[..j]))
        .collect();
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let h_orders: Vec<usize> = h.elements().map(|y| h.element_order(y)).collect();
    let deadline = budget.deadline();

    let mut images = Vec::with_capacity(gens.len());
    let mut steps = 0usize;
    descend(
        g,
        h,
        gens,
        &prefix_types,
        &orders,
        &h_orders,
        deadline,
        &mut steps,
        &mut images,
        visit,
    )
    .map(|_| ())
}

/// Returns `Ok(false)` once the visitor asks to stop.
#[allow(clippy::too_many_arguments)]
fn descend(
    g: &Group,
    h: &Group,
    gens: &[usize],
    prefix_types: &[MarkedType],
    orders: &[usize],
    h_orders: &[usize],
    deadline: Option<Instant>,
    steps: &mut usize,
    images: &mut Vec<usize>,
    visit: &mut dyn FnMut(Vec<usize>) -> bool,
) -> Result<bool, StructureError> {
    let depth = images.len();
    if depth == gens.len() {
        let (_, from) = MarkedType::with_elements(g, gens);
        let (_, to) = MarkedType::with_elements(h, images);
        let mut map = vec![0; g.order()];
        for (&a, &b) in from.iter().zip(&to) {
            map[a] = b;
        }
        return Ok(visit(map));
    }
    for y in h.elements() {
        if h_orders[y] != orders[depth] {
            continue;
        }
        *steps += 1;
        if *steps % 1024 == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return Err(StructureError::BudgetExceeded);
        }
        images.push(y);
        if MarkedType::of(h, images) == prefix_types[depth + 1] {
            let go_on = descend(
                g, h, gens, prefix_types, orders, h_orders, deadline, steps, images, visit,
            )?;
            if !go_on {
                images.pop();
                return Ok(false);
            }
        }
        images.pop();
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupName;

    fn named(s: &str) -> Group {
        Group::named(&s.parse::<GroupName>().unwrap()).unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let d4 = named("dihedral(4)");
        let map = brute_force_isomorphic(&d4, &d4, SearchBudget::unlimited()).unwrap().unwrap();
        assert!(d4.is_isomorphism(&d4, &map));
        assert_eq!(map, (0..8).collect::<Vec<_>>());
        let none = |a: &str, b: &str| {
            brute_force_isomorphic(&named(a), &named(b), SearchBudget::unlimited())
                .unwrap()
                .is_none()
        };
        assert!(none("Z4", "Z2xZ2"));
        assert!(none("dihedral(4)", "Q8"));
        assert!(none("Z6", "S3"));
        assert!(!none("S3", "dihedral(3)"));
    }

    #[test]
    fn relabeled_groups_are_found() {
        let g = named("A4");
        let perm: Vec<usize> = (0..12).map(|x| (5 * x + 3) % 12).collect();
        let h = g.relabel(&perm);
        let map = brute_force_isomorphic(&g, &h, SearchBudget::unlimited()).unwrap().unwrap();
        assert!(g.is_isomorphism(&h, &map));
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(all_isomorphisms(&named("S3"), &named("S3")).len(), 6);
        assert_eq!(all_isomorphisms(&named("Q8"), &named("Q8")).len(), 24);
        assert_eq!(all_isomorphisms(&named("Z2xZ2"), &named("Z2xZ2")).len(), 6);
        assert_eq!(all_isomorphisms(&named("A5"), &named("A5")).len(), 120);
    }

    #[test]
    fn identity_extends_on_s5() {
        let s5 = named("S5");
        let soc = socle(&s5);
        let f: HashMap<usize, usize> = soc.elements().iter().map(|&x| (x, x)).collect();
        let map = extend_socle_isomorphism(&s5, &s5, &f).unwrap().unwrap();
        assert_eq!(map, (0..120).collect::<Vec<_>>());
    }

    #[test]
    fn socle_map_is_checked() {
        let s5 = named("S5");
        let soc = socle(&s5);
        let mut f: HashMap<usize, usize> = soc.elements().iter().map(|&x| (x, x)).collect();
        let (a, b) = (soc.elements()[1], soc.elements()[2]);
        f.insert(a, b);
        f.insert(b, a);
        assert!(matches!(
            extend_socle_isomorphism(&s5, &s5, &f),
            Err(StructureError::NotSocleIso(_))
        ));
        let s4 = named("S4");
        let soc = socle(&s4);
        let f: HashMap<usize, usize> = soc.elements().iter().map(|&x| (x, x)).collect();
        assert_eq!(
            extend_socle_isomorphism(&s4, &s4, &f),
            Err(StructureError::NontrivialCentralizer("first"))
        );
    }
}
