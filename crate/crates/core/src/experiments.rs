//! Batch checks of the coloring/game equivalences over catalog pairs.
//!
//! Every check returns a report whose `key_values` text depends only on the
//! inputs, so runs with different thread counts can be compared byte for
//! byte.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{canonical_class, color_isomorphic, EdgeColoredGraph};
use crate::catalog::{self, CatalogEntry};
use crate::game::{GameConfig, GameError, GameSpec, Solver, SolverOptions};
use crate::group::{Group, GroupError};
use crate::wl::{initial_coloring, refine_step, run, stable_coloring, Coloring, Rounds, Side, Version, WlError, WlParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Wl(#[from] WlError),
    #[error(transparent)]
    Game(#[from] GameError),
}

pub const VERSIONS: [Version; 2] = [Version::I, Version::II];

/// Ordered pairs of catalog entries with equal orders, including `(a, a)`.
pub fn equal_order_pairs(entries: &[CatalogEntry]) -> Vec<(CatalogEntry, CatalogEntry)> {
    let mut pairs = Vec::new();
    for a in entries {
        for b in entries {
            if a.order() == b.order() {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

/// Seed for one unit of work, so results do not depend on job order.
fn sub_seed(seed: u64, parts: &[usize]) -> u64 {
    parts.iter().fold(seed ^ 0x9e37_79b9_7f4a_7c15, |acc, &p| {
        acc.rotate_left(17).wrapping_mul(0x0100_0000_01b3) ^ p as u64
    })
}

fn push_kv(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key}={value}");
}

#[derive(Debug, Clone, Copy)]
pub struct GameColoringParams {
    pub k: usize,
    pub max_rounds: usize,
    pub samples: usize,
    pub seed: u64,
    pub inverse_pruning: bool,
}

impl Default for GameColoringParams {
    fn default() -> Self {
        GameColoringParams {
            k: 2,
            max_rounds: 2,
            samples: 50,
            seed: 1,
            inverse_pruning: true,
        }
    }
}

/// One comparison: does Spoiler win from `x̄ ↦ ȳ` in `r` rounds, and do the
/// round-`r` colors of `x̄` and `ȳ` differ? Start 0 is the empty board,
/// compared against the identity tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameColoringCell {
    pub left: String,
    pub right: String,
    pub version: Version,
    pub round: usize,
    pub start: usize,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub colors_differ: bool,
    pub spoiler_wins: bool,
}

impl GameColoringCell {
    pub fn agrees(&self) -> bool {
        self.colors_differ == self.spoiler_wins
    }
}

#[derive(Debug, Clone, Default)]
pub struct GameColoringReport {
    pub cells: Vec<GameColoringCell>,
}

impl GameColoringReport {
    pub fn disagreements(&self) -> Vec<&GameColoringCell> {
        self.cells.iter().filter(|c| !c.agrees()).collect()
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("game.{}.{}.{}.r{}.s{}", c.left, c.right, c.version, c.round, c.start),
                format_args!(
                    "colors_differ:{} spoiler_wins:{} agree:{}",
                    c.colors_differ,
                    c.spoiler_wins,
                    c.agrees()
                ),
            );
        }
        push_kv(&mut out, "game.cells", self.cells.len());
        push_kv(&mut out, "game.disagreements", self.disagreements().len());
        out
    }
}

fn random_tuple(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|_| rng.gen_range(0..n)).collect()
}

/// Colorings for rounds `0..=max_rounds` (refined past stability if needed).
fn colorings(g: &Group, h: &Group, params: &WlParams, max_rounds: usize) -> Result<Vec<Coloring>, WlError> {
    let mut all = vec![initial_coloring(g, h, params)?];
    for _ in 0..max_rounds {
        let next = refine_step(all.last().unwrap());
        all.push(next);
    }
    Ok(all)
}

/// The coloring side of the game/coloring equivalence, checked against
/// the game solver on every pair, version, round and start.
pub fn game_vs_coloring(
    pairs: &[(CatalogEntry, CatalogEntry)],
    params: &GameColoringParams,
) -> Result<GameColoringReport, ExperimentError> {
    let jobs: Vec<(usize, Version)> = (0..pairs.len())
        .flat_map(|p| VERSIONS.map(|v| (p, v)))
        .collect();
    let results: Vec<Result<Vec<GameColoringCell>, ExperimentError>> = jobs
        .par_iter()
        .map(|&(p, version)| {
            let (a, b) = &pairs[p];
            let (g, h) = (a.build()?, b.build()?);
            let k = params.k;
            let cols = colorings(&g, &h, &WlParams::new(k, 2, version), params.max_rounds)?;
            let spec = GameSpec::new(k, params.max_rounds, 2, version)?;
            let options = SolverOptions {
                inverse_pruning: params.inverse_pruning,
                ..Default::default()
            };
            let mut solver = Solver::new(&g, &h, &spec, options)?;

            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(params.seed, &[p]));
            let mut starts = vec![(vec![g.identity(); k], vec![h.identity(); k])];
            for _ in 0..params.samples {
                starts.push((random_tuple(&mut rng, g.order(), k), random_tuple(&mut rng, h.order(), k)));
            }
            let mut cells = Vec::new();
            for (s, (x, y)) in starts.iter().enumerate() {
                let config = if s == 0 {
                    GameConfig::empty(k)
                } else {
                    GameConfig::from_tuples(x, y)?
                };
                for (round, c) in cols.iter().enumerate() {
                    cells.push(GameColoringCell {
                        left: a.name.clone(),
                        right: b.name.clone(),
                        version,
                        round,
                        start: s,
                        x: x.clone(),
                        y: y.clone(),
                        colors_differ: c.color(Side::Left, x) != c.color(Side::Right, y),
                        spoiler_wins: solver.wins(&config, round)?,
                    });
                }
            }
            Ok(cells)
        })
        .collect();
    let mut report = GameColoringReport::default();
    for r in results {
        report.cells.extend(r?);
    }
    Ok(report)
}

/// Equal stable color multisets against equal stable identity-tuple
/// colors, for one pair, `k` and version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorollaryCell {
    pub left: String,
    pub right: String,
    pub k: usize,
    pub version: Version,
    pub stable_round: usize,
    pub multiset_equal: bool,
    pub identity_equal: bool,
}

#[derive(Debug, Clone, Default)]
pub struct CorollaryReport {
    pub cells: Vec<CorollaryCell>,
}

impl CorollaryReport {
    pub fn disagreements(&self) -> Vec<&CorollaryCell> {
        self.cells
            .iter()
            .filter(|c| c.multiset_equal != c.identity_equal)
            .collect()
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("corollary.{}.{}.k{}.{}", c.left, c.right, c.k, c.version),
                format_args!(
                    "stable_round:{} multiset_equal:{} identity_equal:{}",
                    c.stable_round, c.multiset_equal, c.identity_equal
                ),
            );
        }
        push_kv(&mut out, "corollary.cells", self.cells.len());
        push_kv(&mut out, "corollary.disagreements", self.disagreements().len());
        out
    }
}

pub fn corollary(pairs: &[(CatalogEntry, CatalogEntry)], ks: &[usize]) -> Result<CorollaryReport, ExperimentError> {
    let jobs: Vec<(usize, usize, Version)> = (0..pairs.len())
        .flat_map(|p| ks.iter().flat_map(move |&k| VERSIONS.map(|v| (p, k, v))))
        .collect();
    let cells: Result<Vec<CorollaryCell>, ExperimentError> = jobs
        .par_iter()
        .map(|&(p, k, version)| {
            let (a, b) = &pairs[p];
            let (g, h) = (a.build()?, b.build()?);
            let (c, trace) = stable_coloring(&g, &h, &WlParams::new(k, 2, version))?;
            Ok(CorollaryCell {
                left: a.name.clone(),
                right: b.name.clone(),
                k,
                version,
                stable_round: trace.stable_round.expect("stable coloring records its round"),
                multiset_equal: c.multiset_equal(),
                identity_equal: c.identity_equal(),
            })
        })
        .collect();
    Ok(CorollaryReport { cells: cells? })
}

/// A uniformly random relabeling of `g`, as `(relabeled group, permutation)`.
pub fn random_relabeling(g: &Group, rng: &mut ChaCha8Rng) -> (Group, Vec<usize>) {
    let mut perm: Vec<usize> = g.elements().collect();
    perm.shuffle(rng);
    (g.relabel(&perm), perm)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SoundnessCell {
    pub group: String,
    pub relabeling: usize,
    pub k: usize,
    pub q: usize,
    pub version: Version,
    pub distinguished: bool,
}

#[derive(Debug, Clone, Default)]
pub struct SoundnessReport {
    pub cells: Vec<SoundnessCell>,
}

impl SoundnessReport {
    pub fn failures(&self) -> Vec<&SoundnessCell> {
        self.cells.iter().filter(|c| c.distinguished).collect()
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("soundness.{}.p{}.k{}.q{}.{}", c.group, c.relabeling, c.k, c.q, c.version),
                c.distinguished,
            );
        }
        push_kv(&mut out, "soundness.cells", self.cells.len());
        push_kv(&mut out, "soundness.failures", self.failures().len());
        out
    }
}

/// Each group against random relabelings of itself, at the stable round.
pub fn soundness(
    entries: &[CatalogEntry],
    relabelings: usize,
    ks: &[usize],
    seed: u64,
) -> Result<SoundnessReport, ExperimentError> {
    let jobs: Vec<(usize, usize)> = (0..entries.len())
        .flat_map(|e| (0..relabelings).map(move |p| (e, p)))
        .collect();
    let results: Vec<Result<Vec<SoundnessCell>, ExperimentError>> = jobs
        .par_iter()
        .map(|&(e, p)| {
            let entry = &entries[e];
            let g = entry.build()?;
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, &[e, p]));
            let (h, _) = random_relabeling(&g, &mut rng);
            let mut cells = Vec::new();
            for &k in ks {
                for q in [1, 2] {
                    for version in VERSIONS {
                        let out = run(&g, &h, &WlParams::new(k, q, version), Rounds::Stable)?;
                        cells.push(SoundnessCell {
                            group: entry.name.clone(),
                            relabeling: p,
                            k,
                            q,
                            version,
                            distinguished: out.distinguished(),
                        });
                    }
                }
            }
            Ok(cells)
        })
        .collect();
    let mut report = SoundnessReport::default();
    for r in results {
        report.cells.extend(r?);
    }
    Ok(report)
}

/// One cell of the version comparison: whether each of the three colorings
/// distinguishes the pair. `lifted` is Version I at `(k + 2, r + 1)`,
/// absent when `k + 2` exceeds the limit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VersionCell {
    pub left: String,
    pub right: String,
    pub k: usize,
    pub rounds: Rounds,
    pub version_one: bool,
    pub version_two: bool,
    pub lifted: Option<bool>,
}

impl VersionCell {
    pub fn holds(&self) -> bool {
        (!self.version_one || self.version_two) && (!self.version_two || self.lifted.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Default)]
pub struct VersionReport {
    pub cells: Vec<VersionCell>,
}

fn rounds_label(r: Rounds) -> String {
    match r {
        Rounds::Finite(r) => r.to_string(),
        Rounds::Stable => "stable".into(),
    }
}

impl VersionReport {
    pub fn failures(&self) -> Vec<&VersionCell> {
        self.cells.iter().filter(|c| !c.holds()).collect()
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("versions.{}.{}.k{}.r{}", c.left, c.right, c.k, rounds_label(c.rounds)),
                format_args!(
                    "I:{} II:{} I_lifted:{} holds:{}",
                    c.version_one,
                    c.version_two,
                    c.lifted.map_or("skipped".to_string(), |b| b.to_string()),
                    c.holds()
                ),
            );
        }
        push_kv(&mut out, "versions.cells", self.cells.len());
        push_kv(&mut out, "versions.failures", self.failures().len());
        out
    }
}

/// Version I ⇒ Version II at `(k, r)`, and Version II at `(k, r)` ⇒
/// Version I at `(k + 2, r + 1)` when `k + 2 ≤ max_lifted_k`.
pub fn version_comparison(
    pairs: &[(CatalogEntry, CatalogEntry)],
    ks: &[usize],
    rounds: &[Rounds],
    max_lifted_k: usize,
) -> Result<VersionReport, ExperimentError> {
    let jobs: Vec<(usize, usize)> = (0..pairs.len())
        .flat_map(|p| ks.iter().map(move |&k| (p, k)))
        .collect();
    let results: Vec<Result<Vec<VersionCell>, ExperimentError>> = jobs
        .par_iter()
        .map(|&(p, k)| {
            let (a, b) = &pairs[p];
            let (g, h) = (a.build()?, b.build()?);
            let distinguished = |k: usize, version: Version, r: Rounds| -> Result<bool, ExperimentError> {
                let mut params = WlParams::new(k, 2, version);
                params.ignore_caps = true;
                Ok(run(&g, &h, &params, r)?.distinguished())
            };
            let mut cells = Vec::new();
            for &r in rounds {
                let version_one = distinguished(k, Version::I, r)?;
                let version_two = distinguished(k, Version::II, r)?;
                // The lifted coloring only matters when Version II separates.
                let lifted = if k + 2 <= max_lifted_k && version_two {
                    let next = match r {
                        Rounds::Finite(r) => Rounds::Finite(r + 1),
                        Rounds::Stable => Rounds::Stable,
                    };
                    Some(distinguished(k + 2, Version::I, next)?)
                } else {
                    None
                };
                cells.push(VersionCell {
                    left: a.name.clone(),
                    right: b.name.clone(),
                    k,
                    rounds: r,
                    version_one,
                    version_two,
                    lifted,
                });
            }
            Ok(cells)
        })
        .collect();
    let mut report = VersionReport::default();
    for r in results {
        report.cells.extend(r?);
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparationCell {
    pub left: String,
    pub right: String,
    pub first_round: Option<usize>,
    pub stable_round: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct SeparationReport {
    pub cells: Vec<SeparationCell>,
}

impl SeparationReport {
    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("separation.{}.{}", c.left, c.right),
                format_args!(
                    "first_distinguishing_round:{} stable_round:{}",
                    c.first_round.map_or("none".into(), |r| r.to_string()),
                    c.stable_round.map_or("none".into(), |r| r.to_string()),
                ),
            );
        }
        out
    }
}

/// `left` against each of `rights`, 2-ary, `k = 2`, Version II, to
/// stability.
pub fn separation(left: &str, rights: &[&str]) -> Result<SeparationReport, ExperimentError> {
    let g = Group::named_with_limit(&catalog::resolve(left)?, usize::MAX)?;
    let mut report = SeparationReport::default();
    for &right in rights {
        let h = Group::named_with_limit(&catalog::resolve(right)?, usize::MAX)?;
        let out = run(&g, &h, &WlParams::new(2, 2, Version::II), Rounds::Stable)?;
        report.cells.push(SeparationCell {
            left: left.to_string(),
            right: right.to_string(),
            first_round: out.first_distinguishing_round,
            stable_round: out.trace.stable_round,
        });
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonCell {
    pub index: usize,
    pub n: usize,
    pub colors: u32,
    /// Class of the graph equals the class of a random relabeling.
    pub relabeled_match: bool,
    /// Classes of two independent graphs are equal.
    pub classes_equal: bool,
    /// The exhaustive oracle finds them isomorphic.
    pub oracle_isomorphic: bool,
}

impl CanonCell {
    pub fn passes(&self) -> bool {
        self.relabeled_match && self.classes_equal == self.oracle_isomorphic
    }
}

#[derive(Debug, Clone, Default)]
pub struct CanonReport {
    pub cells: Vec<CanonCell>,
}

impl CanonReport {
    pub fn failures(&self) -> Vec<&CanonCell> {
        self.cells.iter().filter(|c| !c.passes()).collect()
    }

    pub fn key_values(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            push_kv(
                &mut out,
                &format!("canon.{}", c.index),
                format_args!(
                    "n:{} colors:{} relabeled_match:{} classes_equal:{} oracle:{}",
                    c.n, c.colors, c.relabeled_match, c.classes_equal, c.oracle_isomorphic
                ),
            );
        }
        let iso = self.cells.iter().filter(|c| c.oracle_isomorphic).count();
        push_kv(&mut out, "canon.samples", self.cells.len());
        push_kv(&mut out, "canon.isomorphic_pairs", iso);
        push_kv(&mut out, "canon.failures", self.failures().len());
        out
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, colors: u32) -> EdgeColoredGraph {
    EdgeColoredGraph::complete(n, (0..n * n).map(|_| rng.gen_range(0..colors)).collect())
}

/// Random complete digraphs with `1..=max_n` vertices and up to four
/// colors, checked against relabelings and against the exhaustive oracle.
///
/// Independent pairs are drawn with few vertices or colors often enough
/// that both isomorphic and non-isomorphic pairs occur.
pub fn canon_completeness(samples: usize, max_n: usize, seed: u64) -> Result<CanonReport, ExperimentError> {
    let cells: Vec<CanonCell> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, &[i]));
            let n = rng.gen_range(1..=max_n);
            let colors = rng.gen_range(1..=4u32);
            let a = random_graph(&mut rng, n, colors);
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.shuffle(&mut rng);
            let relabeled_match = canonical_class(&a) == canonical_class(&a.permute(&sigma));
            // Every other sample compares against a relabeled copy with a
            // single entry possibly changed, so near-misses are covered.
            let b = if i % 2 == 0 {
                random_graph(&mut rng, n, colors)
            } else {
                let mut colors_b = a.permute(&sigma).colors().to_vec();
                let spot = rng.gen_range(0..n * n);
                colors_b[spot] = rng.gen_range(0..colors);
                EdgeColoredGraph::complete(n, colors_b)
            };
            let classes_equal = canonical_class(&a) == canonical_class(&b);
            let oracle_isomorphic = color_isomorphic(&a, &b).expect("same size and mode");
            CanonCell {
                index: i,
                n,
                colors,
                relabeled_match,
                classes_equal,
                oracle_isomorphic,
            }
        })
        .collect();
    Ok(CanonReport { cells })
}

/// Parameters of the `check-equivalence` grid.
#[derive(Debug, Clone, Copy)]
pub struct GridParams {
    pub max_order: usize,
    pub k: usize,
    pub max_rounds: usize,
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct GridReport {
    pub game: GameColoringReport,
    pub corollary: CorollaryReport,
    pub versions: VersionReport,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.game.disagreements().is_empty()
            && self.corollary.disagreements().is_empty()
            && self.versions.failures().is_empty()
    }

    pub fn key_values(&self) -> String {
        let mut out = self.game.key_values();
        out.push_str(&self.corollary.key_values());
        out.push_str(&self.versions.key_values());
        push_kv(&mut out, "passed", self.passed());
        out
    }
}

/// The game/coloring equivalence (orders up to the game limit), the
/// multiset/identity equivalence, and the version comparison, over all
/// equal-order catalog pairs up to `max_order`.
pub fn check_equivalence(params: &GridParams) -> Result<GridReport, ExperimentError> {
    let entries = catalog::up_to_order(params.max_order);
    let pairs = equal_order_pairs(&entries);
    let game_entries = catalog::up_to_order(params.max_order.min(crate::game::DEFAULT_MAX_GAME_ORDER));
    let game_pairs: Vec<_> = equal_order_pairs(&game_entries)
        .into_iter()
        .filter(|(a, _)| a.order() > 1)
        .collect();
    let game = game_vs_coloring(
        &game_pairs,
        &GameColoringParams {
            k: params.k,
            max_rounds: params.max_rounds,
            samples: params.samples,
            seed: params.seed,
            inverse_pruning: true,
        },
    )?;
    let corollary = corollary(&pairs, &[params.k])?;
    let mut rounds: Vec<Rounds> = (0..=params.max_rounds).map(Rounds::Finite).collect();
    rounds.push(Rounds::Stable);
    let versions = version_comparison(&pairs, &[params.k], &rounds, 4)?;
    Ok(GridReport {
        game,
        corollary,
        versions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_are_ordered_and_equal_order() {
        let pairs = equal_order_pairs(&catalog::up_to_order(4));
        // Z1, Z2, Z3 alone; Z4 and Z2xZ2 pair up four ways.
        assert_eq!(pairs.len(), 3 + 4);
    }

    #[test]
    fn small_game_grid_agrees() {
        let pairs = equal_order_pairs(&catalog::up_to_order(4))
            .into_iter()
            .filter(|(a, _)| a.order() == 4)
            .collect::<Vec<_>>();
        let params = GameColoringParams {
            samples: 5,
            ..Default::default()
        };
        let report = game_vs_coloring(&pairs, &params).unwrap();
        assert!(report.disagreements().is_empty(), "{:?}", report.disagreements());
    }

    #[test]
    fn canon_sample_passes() {
        let report = canon_completeness(40, 5, 3).unwrap();
        assert!(report.failures().is_empty());
    }
}
