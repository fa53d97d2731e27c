//! 1-ary and 2-ary k-dimensional Weisfeiler–Leman colorings of groups.
//!
//! Colorings are computed jointly on `G^k ∪ H^k`, so a color id means the
//! same thing on both sides. Tuples are indexed in base `n` with the first
//! coordinate most significant; left tuples come first, then right tuples.
//!
//! Color ids are dense and assigned by sorting the full list of signatures,
//! which makes them independent of thread scheduling.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_class, CanonicalClass, EdgeColoredGraph};
use crate::group::Group;
use crate::structure::{MarkedType, PartialType};

/// Winning condition of the game and initial coloring: partial isomorphism
/// (I) or marked isomorphism (II).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Version {
    I,
    II,
}

impl fmt::Display for Version {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Version::I => "I",
            Version::II => "II",
        })
    }
}

impl FromStr for Version {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "I" | "i" | "1" => Ok(Version::I),
            "II" | "ii" | "2" => Ok(Version::II),
            other => Err(format!("unknown version {other:?}, expected I or II")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WlError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("{tuples} tuples of order {n} with k = {k} exceed the cap (order ≤ {cap}); pass an override to run anyway")]
    TooLarge { n: usize, k: usize, cap: usize, tuples: usize },
    #[error("stable coloring violates the multiset/identity-color equivalence (multisets equal: {multiset_equal}, identity colors equal: {identity_equal})")]
    CorollaryViolation { multiset_equal: bool, identity_equal: bool },
}

/// Largest group order accepted without override for a given `k`.
pub fn order_cap(k: usize) -> usize {
    match k {
        0 | 1 => usize::MAX,
        2 => 256,
        3 => 40,
        _ => 16,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WlParams {
    pub k: usize,
    pub q: usize,
    pub version: Version,
    /// Skip the order caps.
    pub ignore_caps: bool,
}

impl WlParams {
    pub fn new(k: usize, q: usize, version: Version) -> Self {
        WlParams {
            k,
            q,
            version,
            ignore_caps: false,
        }
    }

    fn check(&self, g: &Group, h: &Group) -> Result<(), WlError> {
        if self.k == 0 {
            return Err(WlError::InvalidParams("k must be at least 1".into()));
        }
        if !(1..=2).contains(&self.q) {
            return Err(WlError::InvalidParams(format!("arity q = {} (supported: 1, 2)", self.q)));
        }
        let n = g.order().max(h.order());
        let tuples = n
            .checked_pow(self.k as u32)
            .filter(|&t| t <= u32::MAX as usize)
            .ok_or_else(|| WlError::InvalidParams(format!("{n}^{} tuples do not fit in memory", self.k)))?;
        let cap = order_cap(self.k);
        if n > cap && !self.ignore_caps {
            return Err(WlError::TooLarge {
                n,
                k: self.k,
                cap,
                tuples,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounds {
    Finite(usize),
    Stable,
}

/// A coloring of `G^k ∪ H^k` after some number of refinement rounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    k: usize,
    q: usize,
    version: Version,
    round: usize,
    orders: [usize; 2],
    identities: [usize; 2],
    colors: Vec<u32>,
    classes: usize,
}

fn tuple_count(n: usize, k: usize) -> usize {
    n.pow(k as u32)
}

/// `p[i] = n^(k-1-i)`, the place value of coordinate `i`.
fn place_values(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|i| n.pow((k - 1 - i) as u32)).collect()
}

fn decode(mut t: usize, n: usize, k: usize) -> Vec<usize> {
    let mut x = vec![0; k];
    for slot in x.iter_mut().rev() {
        *slot = t % n;
        t /= n;
    }
    x
}

fn encode(x: &[usize], n: usize) -> usize {
    x.iter().fold(0, |acc, &d| acc * n + d)
}

/// Dense ids for `items`, numbered in sorted order of the distinct values.
fn dense_ids<T: Ord + Send + Sync + Clone>(items: &[T]) -> (Vec<u32>, usize) {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.par_sort_unstable();
    distinct.dedup();
    let ids = items
        .par_iter()
        .map(|s| distinct.binary_search(s).expect("value is present") as u32)
        .collect();
    (ids, distinct.len())
}

impl Coloring {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn version(&self) -> Version {
        self.version
    }

    pub fn round(&self) -> usize {
        self.round
    }

    /// Number of color classes over both sides.
    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn side(&self, side: Side) -> &[u32] {
        let split = tuple_count(self.orders[0], self.k);
        match side {
            Side::Left => &self.colors[..split],
            Side::Right => &self.colors[split..],
        }
    }

    pub fn side_classes(&self, side: Side) -> usize {
        let mut c = self.side(side).to_vec();
        c.sort_unstable();
        c.dedup();
        c.len()
    }

    pub fn color(&self, side: Side, tuple: &[usize]) -> u32 {
        assert_eq!(tuple.len(), self.k);
        let n = self.orders[side as usize];
        self.side(side)[encode(tuple, n)]
    }

    /// Colors of `(1_G, …, 1_G)` and `(1_H, …, 1_H)`.
    pub fn identity_tuple_colors(&self) -> (u32, u32) {
        let [eg, eh] = self.identities;
        (
            self.color(Side::Left, &vec![eg; self.k]),
            self.color(Side::Right, &vec![eh; self.k]),
        )
    }

    pub fn identity_equal(&self) -> bool {
        let (a, b) = self.identity_tuple_colors();
        a == b
    }

    /// Whether the color multisets on `G^k` and `H^k` coincide.
    pub fn multiset_equal(&self) -> bool {
        let mut a = self.side(Side::Left).to_vec();
        let mut b = self.side(Side::Right).to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    }

    /// Whether every class of `self` lies inside a class of `coarser`.
    pub fn refines(&self, coarser: &Coloring) -> bool {
        if self.colors.len() != coarser.colors.len() {
            return false;
        }
        let mut image = vec![u32::MAX; self.classes];
        self.colors.iter().zip(&coarser.colors).all(|(&fine, &coarse)| {
            let slot = &mut image[fine as usize];
            if *slot == u32::MAX {
                *slot = coarse;
            }
            *slot == coarse
        })
    }

    /// Same partition, ignoring color names.
    pub fn same_partition(&self, other: &Coloring) -> bool {
        self.classes == other.classes && self.refines(other)
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.colors
    }
}

/// Round-0 colors: tuples share a color iff they are partially isomorphic
/// (I) or have the same marked isomorphism type (II).
pub fn initial_coloring(g: &Group, h: &Group, params: &WlParams) -> Result<Coloring, WlError> {
    params.check(g, h)?;
    let k = params.k;
    let jobs: Vec<(&Group, usize)> = [g, h]
        .into_iter()
        .flat_map(|grp| (0..tuple_count(grp.order(), k)).map(move |t| (grp, t)))
        .collect();
    let (colors, classes) = match params.version {
        Version::I => {
            let sigs: Vec<PartialType> = jobs
                .par_iter()
                .map(|&(grp, t)| PartialType::of(grp, &decode(t, grp.order(), k)))
                .collect();
            dense_ids(&sigs)
        }
        Version::II => {
            let sigs: Vec<MarkedType> = jobs
                .par_iter()
                .map(|&(grp, t)| MarkedType::of(grp, &decode(t, grp.order(), k)))
                .collect();
            dense_ids(&sigs)
        }
    };
    Ok(Coloring {
        k,
        q: params.q,
        version: params.version,
        round: 0,
        orders: [g.order(), h.order()],
        identities: [g.identity(), h.identity()],
        colors,
        classes,
    })
}

/// One graph whose class enters the signature of every tuple agreeing
/// with `base` outside coordinates `i` and `j`.
#[derive(Clone, Copy)]
struct GraphJob {
    side: usize,
    pair: usize,
    base: usize,
}

/// Applies the refinement operator once.
///
/// For `q = 2` the new color of `x̄` is the old color together with the
/// classes of `Γ_{x̄,i,j}` for `i ≤ j` in the order `(1,1), (1,2), …, (k,k)`;
/// for `q = 1` only the loop graphs `i = j` enter, which amounts to the
/// multisets `{{χ(x̄_{i←y})}}`.
pub fn refine_step(c: &Coloring) -> Coloring {
    let k = c.k;
    let pairs: Vec<(usize, usize)> = (0..k)
        .flat_map(|i| (i..k).map(move |j| (i, j)))
        .filter(|&(i, j)| c.q == 2 || i == j)
        .collect();
    let offsets = [0, tuple_count(c.orders[0], k)];
    let places = [place_values(c.orders[0], k), place_values(c.orders[1], k)];

    // The graph for (i, j) only depends on the other coordinates, so one job
    // per base tuple with zeros at i and j.
    let mut jobs = Vec::new();
    for side in 0..2 {
        let n = c.orders[side];
        for (pair, &(i, j)) in pairs.iter().enumerate() {
            for t in 0..tuple_count(n, k) {
                let x = decode(t, n, k);
                if x[i] == 0 && x[j] == 0 {
                    jobs.push(GraphJob { side, pair, base: t });
                }
            }
        }
    }

    let graph_classes: Vec<CanonicalClass> = jobs
        .par_iter()
        .map(|job| {
            let n = c.orders[job.side];
            let p = &places[job.side];
            let colors = &c.colors[offsets[job.side]..];
            let (i, j) = pairs[job.pair];
            let graph = if i == j {
                EdgeColoredGraph::loops_only((0..n).map(|y| colors[job.base + y * p[i]]).collect())
            } else {
                EdgeColoredGraph::complete_from_fn(n, |y, z| colors[job.base + y * p[i] + z * p[j]])
            };
            canonical_class(&graph)
        })
        .collect();
    let (class_ids, _) = dense_ids(&graph_classes);

    // lookup[side][pair][base] = class id
    let mut lookup: Vec<Vec<Vec<u32>>> = (0..2)
        .map(|side| vec![vec![u32::MAX; tuple_count(c.orders[side], k)]; pairs.len()])
        .collect();
    for (job, &id) in jobs.iter().zip(&class_ids) {
        lookup[job.side][job.pair][job.base] = id;
    }

    let total = c.colors.len();
    let signatures: Vec<Vec<u32>> = (0..total)
        .into_par_iter()
        .map(|global| {
            let side = usize::from(global >= offsets[1]);
            let t = global - offsets[side];
            let n = c.orders[side];
            let p = &places[side];
            let mut sig = Vec::with_capacity(pairs.len() + 1);
            sig.push(c.colors[global]);
            for (pair, &(i, j)) in pairs.iter().enumerate() {
                let xi = (t / p[i]) % n;
                let mut base = t - xi * p[i];
                if j != i {
                    let xj = (t / p[j]) % n;
                    base -= xj * p[j];
                }
                sig.push(lookup[side][pair][base]);
            }
            sig
        })
        .collect();
    let (colors, classes) = dense_ids(&signatures);
    Coloring {
        round: c.round + 1,
        colors,
        classes,
        ..c.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoundStats {
    pub classes: usize,
    pub left_classes: usize,
    pub right_classes: usize,
}

impl RoundStats {
    fn of(c: &Coloring) -> Self {
        RoundStats {
            classes: c.classes(),
            left_classes: c.side_classes(Side::Left),
            right_classes: c.side_classes(Side::Right),
        }
    }
}

/// Class counts per round, and the round whose partition the next
/// refinement left unchanged.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefinementTrace {
    pub rounds: Vec<RoundStats>,
    pub stable_round: Option<usize>,
}

/// Refines until two consecutive partitions coincide; the returned coloring
/// is the one at the stable round.
pub fn stable_coloring(g: &Group, h: &Group, params: &WlParams) -> Result<(Coloring, RefinementTrace), WlError> {
    let mut c = initial_coloring(g, h, params)?;
    let mut trace = RefinementTrace::default();
    trace.rounds.push(RoundStats::of(&c));
    loop {
        let next = refine_step(&c);
        // The new color includes the old one, so equal counts mean equal
        // partitions.
        if next.classes == c.classes {
            trace.stable_round = Some(c.round);
            return Ok((c, trace));
        }
        c = next;
        trace.rounds.push(RoundStats::of(&c));
    }
}

/// Everything a WL run learns about a pair.
#[derive(Debug, Clone)]
pub struct WlOutcome {
    pub params: WlParams,
    pub rounds: Rounds,
    /// Orders differ: distinguished at round 0 without coloring.
    pub size_mismatch: bool,
    pub trace: RefinementTrace,
    /// First round at which the identity tuples get different colors.
    pub first_distinguishing_round: Option<usize>,
    /// Multiset equality of the last coloring computed.
    pub multiset_equal: Option<bool>,
    pub coloring: Option<Coloring>,
}

impl WlOutcome {
    pub fn distinguished(&self) -> bool {
        self.first_distinguishing_round.is_some()
    }
}

/// Runs the refinement for `rounds` rounds (or to stability), tracking when
/// the identity tuples first separate.
///
/// At stability the two distinguishing criteria, unequal color multisets
/// and unequal identity-tuple colors, are both evaluated and must agree.
pub fn run(g: &Group, h: &Group, params: &WlParams, rounds: Rounds) -> Result<WlOutcome, WlError> {
    if g.order() != h.order() {
        params.check(g, g)?;
        return Ok(WlOutcome {
            params: *params,
            rounds,
            size_mismatch: true,
            trace: RefinementTrace::default(),
            first_distinguishing_round: Some(0),
            multiset_equal: Some(false),
            coloring: None,
        });
    }
    let mut c = initial_coloring(g, h, params)?;
    let mut trace = RefinementTrace::default();
    trace.rounds.push(RoundStats::of(&c));
    let mut first = (!c.identity_equal()).then_some(0);
    loop {
        if let Rounds::Finite(r) = rounds {
            if c.round >= r {
                break;
            }
        }
        let next = refine_step(&c);
        if next.classes == c.classes {
            trace.stable_round = Some(c.round);
            break;
        }
        c = next;
        trace.rounds.push(RoundStats::of(&c));
        if first.is_none() && !c.identity_equal() {
            first = Some(c.round);
        }
    }
    let multiset_equal = c.multiset_equal();
    if trace.stable_round.is_some() && multiset_equal != c.identity_equal() {
        return Err(WlError::CorollaryViolation {
            multiset_equal,
            identity_equal: c.identity_equal(),
        });
    }
    Ok(WlOutcome {
        params: *params,
        rounds,
        size_mismatch: false,
        trace,
        first_distinguishing_round: first,
        multiset_equal: Some(multiset_equal),
        coloring: Some(c),
    })
}

/// Whether the identity tuples have different colors after `rounds`
/// (different orders always count as distinguished).
pub fn distinguishes(g: &Group, h: &Group, params: &WlParams, rounds: Rounds) -> Result<bool, WlError> {
    Ok(run(g, h, params, rounds)?.distinguished())
}

/// Human-readable report of a WL run.
pub struct WlReport<'a> {
    pub left: &'a str,
    pub right: &'a str,
    pub outcome: &'a WlOutcome,
}

impl WlReport<'_> {
    pub fn verdict(&self) -> String {
        let o = self.outcome;
        match (o.first_distinguishing_round, o.trace.stable_round, o.rounds) {
            (Some(r), _, _) => format!("DISTINGUISHED at round {r}"),
            (None, Some(s), _) => format!("NOT DISTINGUISHED (stable at round {s})"),
            (None, None, Rounds::Finite(r)) => format!("NOT DISTINGUISHED (through round {r})"),
            (None, None, Rounds::Stable) => unreachable!("a stable run always records its round"),
        }
    }

    /// Line-oriented `key=value` form.
    pub fn key_values(&self) -> String {
        let o = self.outcome;
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push('=');
            out.push_str(&v);
            out.push('\n');
        };
        kv("left", self.left.to_string());
        kv("right", self.right.to_string());
        kv("k", o.params.k.to_string());
        kv("q", o.params.q.to_string());
        kv("version", o.params.version.to_string());
        kv(
            "rounds",
            match o.rounds {
                Rounds::Finite(r) => r.to_string(),
                Rounds::Stable => "stable".into(),
            },
        );
        kv("size_mismatch", o.size_mismatch.to_string());
        for (r, s) in o.trace.rounds.iter().enumerate() {
            kv(&format!("round.{r}.classes"), s.classes.to_string());
            kv(&format!("round.{r}.left"), s.left_classes.to_string());
            kv(&format!("round.{r}.right"), s.right_classes.to_string());
        }
        kv(
            "stable_round",
            o.trace.stable_round.map_or("none".into(), |r| r.to_string()),
        );
        kv(
            "first_distinguishing_round",
            o.first_distinguishing_round
                .map_or("none".into(), |r| r.to_string()),
        );
        kv(
            "multiset_equal",
            o.multiset_equal.map_or("none".into(), |b| b.to_string()),
        );
        kv("distinguished", o.distinguished().to_string());
        kv("verdict", self.verdict());
        out
    }
}

impl fmt::Display for WlReport<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = self.outcome;
        writeln!(
            f,
            "{} vs {}  k={} q={} version {}",
            self.left, self.right, o.params.k, o.params.q, o.params.version
        )?;
        if o.size_mismatch {
            writeln!(f, "orders differ")?;
        }
        for (r, s) in o.trace.rounds.iter().enumerate() {
            writeln!(
                f,
                "round {r}: {} classes ({} on the left, {} on the right)",
                s.classes, s.left_classes, s.right_classes
            )?;
        }
        writeln!(f, "{}", self.verdict())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupName;

    fn named(s: &str) -> Group {
        Group::named(&s.parse::<GroupName>().unwrap()).unwrap()
    }

    #[test]
    fn z2_k1_has_two_colors() {
        let z2 = named("Z2");
        let c = initial_coloring(&z2, &z2, &WlParams::new(1, 2, Version::I)).unwrap();
        assert_eq!(c.classes(), 2);
        assert_eq!(c.side(Side::Left), c.side(Side::Right));
    }

    #[test]
    fn z4_v4_round_zero() {
        let (z4, v4) = (named("Z4"), named("Z2xZ2"));
        let c2 = initial_coloring(&z4, &v4, &WlParams::new(1, 2, Version::II)).unwrap();
        let right = c2.side(Side::Right);
        for x in [1, 3] {
            assert!(!right.contains(&c2.color(Side::Left, &[x])));
        }
        let c1 = initial_coloring(&z4, &v4, &WlParams::new(1, 2, Version::I)).unwrap();
        assert_eq!(c1.classes(), 2);
        assert!(c1.multiset_equal());
    }

    #[test]
    fn z4_v4_k2_version_one() {
        let (z4, v4) = (named("Z4"), named("Z2xZ2"));
        let params = WlParams::new(2, 2, Version::I);
        let c0 = initial_coloring(&z4, &v4, &params).unwrap();
        assert!(c0.identity_equal());
        let c1 = refine_step(&c0);
        assert!(!c1.identity_equal());
        assert!(distinguishes(&z4, &v4, &params, Rounds::Finite(1)).unwrap());
        assert!(!distinguishes(&z4, &v4, &params, Rounds::Finite(0)).unwrap());
        let (stable, trace) = stable_coloring(&z4, &v4, &params).unwrap();
        assert!(trace.stable_round.unwrap() <= 3);
        assert!(!stable.multiset_equal());
    }

    #[test]
    fn refinement_is_monotone_and_arity_dominates() {
        let (g, h) = (named("dihedral(4)"), named("Q8"));
        for version in [Version::I, Version::II] {
            let mut one = initial_coloring(&g, &h, &WlParams::new(2, 1, version)).unwrap();
            let mut two = initial_coloring(&g, &h, &WlParams::new(2, 2, version)).unwrap();
            for _ in 0..3 {
                let (n1, n2) = (refine_step(&one), refine_step(&two));
                assert!(n1.refines(&one) && n2.refines(&two));
                assert!(n2.refines(&n1));
                one = n1;
                two = n2;
            }
        }
    }

    #[test]
    fn stable_is_a_fixed_point() {
        let g = named("S3");
        let (c, _) = stable_coloring(&g, &g, &WlParams::new(2, 2, Version::I)).unwrap();
        assert!(refine_step(&c).same_partition(&c));
        assert_eq!(c.side(Side::Left), c.side(Side::Right));
    }

    #[test]
    fn trivial_groups_stabilize_immediately() {
        let z1 = named("Z1");
        let (_, trace) = stable_coloring(&z1, &z1, &WlParams::new(2, 2, Version::II)).unwrap();
        assert_eq!(trace.stable_round, Some(0));
    }

    #[test]
    fn size_mismatch_is_round_zero() {
        let out = run(&named("Z4"), &named("Z5"), &WlParams::new(2, 2, Version::I), Rounds::Stable).unwrap();
        assert_eq!(out.first_distinguishing_round, Some(0));
    }

    #[test]
    fn caps_apply() {
        let g = named("Z41");
        assert!(matches!(
            initial_coloring(&g, &g, &WlParams::new(3, 2, Version::I)),
            Err(WlError::TooLarge { cap: 40, .. })
        ));
        assert!(matches!(
            initial_coloring(&g, &g, &WlParams::new(2, 3, Version::I)),
            Err(WlError::InvalidParams(_))
        ));
    }

    #[test]
    fn report_lines() {
        let (z4, v4) = (named("Z4"), named("Z2xZ2"));
        let out = run(&z4, &v4, &WlParams::new(2, 2, Version::I), Rounds::Stable).unwrap();
        let report = WlReport { left: "Z4", right: "Z2xZ2", outcome: &out };
        assert_eq!(report.verdict(), "DISTINGUISHED at round 1");
        assert!(report.key_values().contains("verdict=DISTINGUISHED at round 1\n"));
    }
}
