//! Exact solver for the q-ary bijective pebble game on two groups.
//!
//! A round: Spoiler picks up between one and `min(q, k)` pebble pairs
//! (naming the same pebble twice picks up just that one), Duplicator picks
//! a bijection `f: G → H`, and Spoiler places between one and all of the
//! lifted pebbles on elements `v` with partners `f(v)`; unplaced lifted
//! pebbles go back to the side. Spoiler wins as soon as the pebbled map
//! fails the version's condition.
//!
//! The condition is evaluated on the whole configuration before each round
//! and after the last placement, so `win(c, 0)` is just `fails(c)`. Failure
//! is monotone under removing pebbles, so checking before the pickup is the
//! same as checking after it for some pickup.
//!
//! Game values are computed by backward induction, memoized on the sorted
//! multiset of pebbled pairs (pebble names do not matter) and the number of
//! rounds left.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::{Duration, Instant};

use itertools::Itertools;
use thiserror::Error;

use crate::group::Group;
use crate::structure::{MarkedType, PartialType};
use crate::wl::Version;

/// Inputs larger than this are refused unless the limit is raised.
pub const DEFAULT_MAX_GAME_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("groups have different orders: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("game budget exhausted")]
    BudgetExceeded,
    #[error("group order {order} exceeds the game limit {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GameSpec {
    pub k: usize,
    pub r: usize,
    pub q: usize,
    pub version: Version,
}

impl GameSpec {
    pub fn new(k: usize, r: usize, q: usize, version: Version) -> Result<Self, GameError> {
        if k == 0 {
            return Err(GameError::InvalidSpec("k must be at least 1".into()));
        }
        if !(1..=3).contains(&q) {
            return Err(GameError::InvalidSpec(format!("arity q = {q} (supported: 1, 2, 3)")));
        }
        Ok(GameSpec { k, r, q, version })
    }

    /// Most pebbles lifted in one round.
    pub fn lift_size(&self) -> usize {
        self.q.min(self.k)
    }
}

/// Pebble `i` is either beside the board or on a pair `(g, h)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GameConfig {
    pebbles: Vec<Option<(usize, usize)>>,
}

impl GameConfig {
    pub fn empty(k: usize) -> Self {
        GameConfig { pebbles: vec![None; k] }
    }

    /// Pebble `i` on `x_i ↦ y_i`.
    pub fn from_tuples(x: &[usize], y: &[usize]) -> Result<Self, GameError> {
        if x.len() != y.len() {
            return Err(GameError::InvalidConfig(format!(
                "tuple lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        Ok(GameConfig {
            pebbles: x.iter().zip(y).map(|(&a, &b)| Some((a, b))).collect(),
        })
    }

    pub fn from_pebbles(pebbles: Vec<Option<(usize, usize)>>) -> Self {
        GameConfig { pebbles }
    }

    pub fn pebbles(&self) -> &[Option<(usize, usize)>] {
        &self.pebbles
    }

    pub fn k(&self) -> usize {
        self.pebbles.len()
    }

    fn key(&self) -> Key {
        let mut key: Key = self
            .pebbles
            .iter()
            .flatten()
            .map(|&(a, b)| (a as u16, b as u16))
            .collect();
        key.sort_unstable();
        key
    }

    fn validate(&self, spec: &GameSpec, g: &Group, h: &Group) -> Result<(), GameError> {
        if self.pebbles.len() != spec.k {
            return Err(GameError::InvalidConfig(format!(
                "{} pebbles for k = {}",
                self.pebbles.len(),
                spec.k
            )));
        }
        for &(a, b) in self.pebbles.iter().flatten() {
            if a >= g.order() || b >= h.order() {
                return Err(GameError::InvalidConfig(format!("pair ({a}, {b}) is out of range")));
            }
        }
        Ok(())
    }
}

type Key = Vec<(u16, u16)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub bijection: Vec<usize>,
    /// `(pebble, g)`; the partner is `bijection[g]`.
    pub placements: Vec<(usize, usize)>,
    pub child: Certificate,
}

/// Spoiler's winning strategy as a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The configuration already fails the version's condition.
    Win,
    /// Lift these pebbles; answer every bijection with a branch.
    Move { lift: Vec<usize>, branches: Vec<Branch> },
}

impl Certificate {
    pub fn depth(&self) -> usize {
        match self {
            Certificate::Win => 0,
            Certificate::Move { branches, .. } => {
                1 + branches.iter().map(|b| b.child.depth()).max().unwrap_or(0)
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        let pad = "  ".repeat(indent);
        match self {
            Certificate::Win => writeln!(f, "{pad}win"),
            Certificate::Move { lift, branches } => {
                writeln!(f, "{pad}lift {}", lift.iter().join(" "))?;
                for b in branches {
                    let places = b
                        .placements
                        .iter()
                        .map(|&(p, g)| format!("p{p}:{g}->{}", b.bijection[g]))
                        .join(" ");
                    writeln!(f, "{pad}  f {} place {places}", b.bijection.iter().join(" "))?;
                    b.child.write(f, indent + 2)?;
                }
                Ok(())
            }
        }
    }
}

/// Indented text tree: `lift …` lines, one `f … place …` line per
/// bijection, and `win` at the leaves.
impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Only let Duplicator play identity-preserving, inverse-compatible
    /// bijections where that provably cannot change the value.
    pub inverse_pruning: bool,
    pub max_nodes: Option<usize>,
    pub time_limit: Option<Duration>,
    pub max_order: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            inverse_pruning: false,
            max_nodes: None,
            time_limit: None,
            max_order: DEFAULT_MAX_GAME_ORDER,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GameResult {
    pub spoiler_wins: bool,
    pub certificate: Option<Certificate>,
    /// Configurations evaluated.
    pub nodes: usize,
}

pub struct Solver<'a> {
    g: &'a Group,
    h: &'a Group,
    k: usize,
    q: usize,
    version: Version,
    options: SolverOptions,
    n: usize,
    bijections: Vec<Vec<u8>>,
    preserves_identity: Vec<bool>,
    preserves_inverses: Vec<bool>,
    fail_memo: HashMap<Key, bool>,
    win_memo: HashMap<(Key, usize), bool>,
    move_memo: HashMap<(Key, usize, usize), bool>,
    nodes: usize,
    deadline: Option<Instant>,
}

impl<'a> Solver<'a> {
    pub fn new(g: &'a Group, h: &'a Group, spec: &GameSpec, options: SolverOptions) -> Result<Self, GameError> {
        if g.order() != h.order() {
            return Err(GameError::SizeMismatch(g.order(), h.order()));
        }
        let n = g.order();
        if n > options.max_order {
            return Err(GameError::TooLarge {
                order: n,
                limit: options.max_order,
            });
        }
        if n > u8::MAX as usize + 1 {
            return Err(GameError::TooLarge { order: n, limit: 256 });
        }
        let bijections: Vec<Vec<u8>> = (0..n as u8).permutations(n).collect();
        let preserves_identity = bijections
            .iter()
            .map(|f| f[g.identity()] as usize == h.identity())
            .collect();
        let preserves_inverses = bijections
            .iter()
            .map(|f| g.elements().all(|x| f[g.inv(x)] as usize == h.inv(f[x] as usize)))
            .collect();
        Ok(Solver {
            g,
            h,
            k: spec.k,
            q: spec.q,
            version: spec.version,
            deadline: options.time_limit.map(|t| Instant::now() + t),
            options,
            n,
            bijections,
            preserves_identity,
            preserves_inverses,
            fail_memo: HashMap::new(),
            win_memo: HashMap::new(),
            move_memo: HashMap::new(),
            nodes: 0,
        })
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Whether the pebbled map fails the version's condition.
    pub fn fails(&mut self, config: &GameConfig) -> bool {
        self.fails_key(&config.key())
    }

    fn fails_key(&mut self, key: &Key) -> bool {
        if let Some(&v) = self.fail_memo.get(key) {
            return v;
        }
        let x: Vec<usize> = key.iter().map(|&(a, _)| a as usize).collect();
        let y: Vec<usize> = key.iter().map(|&(_, b)| b as usize).collect();
        let fails = match self.version {
            Version::I => PartialType::of(self.g, &x) != PartialType::of(self.h, &y),
            Version::II => MarkedType::of(self.g, &x) != MarkedType::of(self.h, &y),
        };
        self.fail_memo.insert(key.clone(), fails);
        fails
    }

    pub fn wins(&mut self, config: &GameConfig, rounds: usize) -> Result<bool, GameError> {
        self.win(&config.key(), rounds)
    }

    fn tick(&mut self) -> Result<(), GameError> {
        self.nodes += 1;
        if self.options.max_nodes.is_some_and(|m| self.nodes > m) {
            return Err(GameError::BudgetExceeded);
        }
        if self.nodes % 256 == 0 && self.deadline.is_some_and(|d| Instant::now() > d) {
            return Err(GameError::BudgetExceeded);
        }
        Ok(())
    }

    fn win(&mut self, key: &Key, rounds: usize) -> Result<bool, GameError> {
        if self.fails_key(key) {
            return Ok(true);
        }
        if rounds == 0 {
            return Ok(false);
        }
        if let Some(&v) = self.win_memo.get(&(key.clone(), rounds)) {
            return Ok(v);
        }
        self.tick()?;
        let mut value = false;
        for (rest, lifted) in self.remainders(key) {
            if self.move_wins(&rest, rounds, lifted)? {
                value = true;
                break;
            }
        }
        self.win_memo.insert((key.clone(), rounds), value);
        Ok(value)
    }

    fn lift_size(&self) -> usize {
        self.q.min(self.k)
    }

    /// Distinct pickups: the multiset left on the board and how many pebbles
    /// are in hand. A pickup takes up to `lift_size` pebbles, pebbles beside
    /// the board included, so only the on-board ones change the
    /// configuration; holding more pebbles never hurts Spoiler.
    fn remainders(&self, key: &Key) -> Vec<(Key, usize)> {
        let l = self.lift_size();
        let beside = self.k - key.len();
        let mut out = BTreeSet::new();
        for removed in 0..=l.min(key.len()) {
            let lifted = l.min(removed + beside);
            if lifted == 0 {
                continue;
            }
            for drop in (0..key.len()).combinations(removed) {
                let rest: Key = key
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !drop.contains(i))
                    .map(|(_, &p)| p)
                    .collect();
                out.insert((rest, lifted));
            }
        }
        out.into_iter().collect()
    }

    /// Which bijections Duplicator may be restricted to without changing
    /// the value: any other choice loses to an immediate placement.
    fn allowed(&self, rest: &Key, lifted: usize, index: usize) -> bool {
        if !self.options.inverse_pruning {
            return true;
        }
        // f(1) ≠ 1 loses to the single pebble 1 ↦ f(1).
        if !self.preserves_identity[index] {
            return false;
        }
        // f(x⁻¹) ≠ f(x)⁻¹ loses to x, x⁻¹ when the failure is visible: always
        // for marked types, and for partial types once 1 ↦ 1 is pebbled too.
        let identity_pair = (self.g.identity() as u16, self.h.identity() as u16);
        let inverses_visible = lifted >= 2
            && (self.version == Version::II || lifted >= 3 || rest.contains(&identity_pair));
        !inverses_visible || self.preserves_inverses[index]
    }

    fn with_placements(rest: &Key, pairs: &[(u16, u16)]) -> Key {
        let mut key = rest.clone();
        key.extend_from_slice(pairs);
        key.sort_unstable();
        key
    }

    /// For every allowed bijection, some placement of `1..=lifted` pebbles
    /// on top of `rest` wins within `rounds - 1`.
    fn move_wins(&mut self, rest: &Key, rounds: usize, lifted: usize) -> Result<bool, GameError> {
        let memo_key = (rest.clone(), rounds, lifted);
        if let Some(&v) = self.move_memo.get(&memo_key) {
            return Ok(v);
        }
        let n = self.n;
        let mut local: HashMap<Vec<(u16, u16)>, bool> = HashMap::new();
        let mut value = true;
        for index in 0..self.bijections.len() {
            if !self.allowed(rest, lifted, index) {
                continue;
            }
            let mut answered = false;
            'search: for j in 1..=lifted {
                for vs in (0..n).combinations(j) {
                    let pairs: Vec<(u16, u16)> = vs
                        .iter()
                        .map(|&v| (v as u16, self.bijections[index][v] as u16))
                        .collect();
                    let won = match local.get(&pairs) {
                        Some(&w) => w,
                        None => {
                            let w = self.win(&Self::with_placements(rest, &pairs), rounds - 1)?;
                            local.insert(pairs, w);
                            w
                        }
                    };
                    if won {
                        answered = true;
                        break 'search;
                    }
                }
            }
            if !answered {
                value = false;
                break;
            }
        }
        self.move_memo.insert(memo_key, value);
        Ok(value)
    }

    /// Smallest `r ≤ max_rounds` at which Spoiler wins.
    pub fn minimal_rounds(&mut self, config: &GameConfig, max_rounds: usize) -> Result<Option<usize>, GameError> {
        let key = config.key();
        if !self.win(&key, max_rounds)? {
            return Ok(None);
        }
        let (mut lo, mut hi) = (0, max_rounds);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.win(&key, mid)? {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Ok(Some(lo))
    }

    /// A winning strategy from `config`, answering every one of the `n!`
    /// bijections, or `None` when Duplicator survives.
    pub fn certificate(&mut self, config: &GameConfig, rounds: usize) -> Result<Option<Certificate>, GameError> {
        if !self.win(&config.key(), rounds)? {
            return Ok(None);
        }
        self.build(config, rounds).map(Some)
    }

    fn build(&mut self, config: &GameConfig, rounds: usize) -> Result<Certificate, GameError> {
        if self.fails(config) {
            return Ok(Certificate::Win);
        }
        let mut chosen = None;
        'lifts: for size in 1..=self.lift_size() {
            for lift in (0..self.k).combinations(size) {
                let mut lifted = config.clone();
                for &p in &lift {
                    lifted.pebbles[p] = None;
                }
                if self.move_wins(&lifted.key(), rounds, size)? {
                    chosen = Some((lift, lifted));
                    break 'lifts;
                }
            }
        }
        let (lift, lifted) = chosen.expect("a won position has a winning lift");
        let l = lift.len();

        let mut branches = Vec::with_capacity(self.bijections.len());
        for index in 0..self.bijections.len() {
            let f: Vec<usize> = self.bijections[index].iter().map(|&x| x as usize).collect();
            let mut found = None;
            'search: for j in 1..=l {
                for vs in (0..self.n).combinations(j) {
                    let mut child = lifted.clone();
                    for (&p, &v) in lift.iter().zip(&vs) {
                        child.pebbles[p] = Some((v, f[v]));
                    }
                    if self.win(&child.key(), rounds - 1)? {
                        found = Some((vs, child));
                        break 'search;
                    }
                }
            }
            let (vs, child) = found.expect("every bijection has a winning answer");
            let sub = self.build(&child, rounds - 1)?;
            branches.push(Branch {
                bijection: f,
                placements: lift.iter().copied().zip(vs).collect(),
                child: sub,
            });
        }
        Ok(Certificate::Move { lift, branches })
    }
}

/// Solves the game from `start`; a certificate is attached on wins when
/// `with_certificate` is set.
pub fn spoiler_wins(
    g: &Group,
    h: &Group,
    spec: &GameSpec,
    start: &GameConfig,
    options: SolverOptions,
    with_certificate: bool,
) -> Result<GameResult, GameError> {
    let mut solver = Solver::new(g, h, spec, options)?;
    start.validate(spec, g, h)?;
    let wins = solver.wins(start, spec.r)?;
    let certificate = if wins && with_certificate {
        solver.certificate(start, spec.r)?
    } else {
        None
    };
    Ok(GameResult {
        spoiler_wins: wins,
        certificate,
        nodes: solver.nodes(),
    })
}

/// Replays `cert` against every bijection at every node. `Ok(false)` when
/// some line of play is missing or does not end in a failing
/// configuration within `spec.r` rounds.
pub fn verify_certificate(
    g: &Group,
    h: &Group,
    spec: &GameSpec,
    start: &GameConfig,
    cert: &Certificate,
) -> Result<bool, GameError> {
    if g.order() != h.order() {
        return Err(GameError::SizeMismatch(g.order(), h.order()));
    }
    start.validate(spec, g, h)?;
    let bijections: Vec<Vec<usize>> = (0..g.order()).permutations(g.order()).collect();
    let mut verifier = Verifier {
        g,
        h,
        spec,
        bijections,
    };
    verifier.check(start, spec.r, cert)
}

struct Verifier<'a> {
    g: &'a Group,
    h: &'a Group,
    spec: &'a GameSpec,
    bijections: Vec<Vec<usize>>,
}

impl Verifier<'_> {
    fn fails(&self, config: &GameConfig) -> bool {
        let key = config.key();
        let x: Vec<usize> = key.iter().map(|&(a, _)| a as usize).collect();
        let y: Vec<usize> = key.iter().map(|&(_, b)| b as usize).collect();
        match self.spec.version {
            Version::I => PartialType::of(self.g, &x) != PartialType::of(self.h, &y),
            Version::II => MarkedType::of(self.g, &x) != MarkedType::of(self.h, &y),
        }
    }

    fn check(&mut self, config: &GameConfig, rounds: usize, cert: &Certificate) -> Result<bool, GameError> {
        let malformed = |m: String| Err(GameError::MalformedCertificate(m));
        let (lift, branches) = match cert {
            Certificate::Win => return Ok(self.fails(config)),
            Certificate::Move { lift, branches } => (lift, branches),
        };
        if rounds == 0 {
            return Ok(false);
        }
        let k = self.spec.k;
        if lift.is_empty() || lift.len() > self.spec.lift_size() || lift.iter().any(|&p| p >= k) || !lift.iter().all_unique() {
            return malformed(format!("bad lift {lift:?}"));
        }
        let n = self.g.order();
        let mut by_bijection: HashMap<&[usize], &Branch> = HashMap::new();
        for b in branches {
            let mut seen = vec![false; n];
            if b.bijection.len() != n || b.bijection.iter().any(|&y| y >= n || std::mem::replace(&mut seen[y], true)) {
                return malformed(format!("{:?} is not a bijection", b.bijection));
            }
            if b.placements.is_empty()
                || b.placements.len() > lift.len()
                || b.placements.iter().any(|&(p, v)| !lift.contains(&p) || v >= n)
                || !b.placements.iter().map(|&(p, _)| p).all_unique()
            {
                return malformed(format!("bad placements {:?}", b.placements));
            }
            if by_bijection.insert(&b.bijection, b).is_some() {
                return malformed(format!("bijection {:?} answered twice", b.bijection));
            }
        }
        let mut lifted = config.clone();
        for &p in lift {
            lifted.pebbles[p] = None;
        }
        for index in 0..self.bijections.len() {
            let f = self.bijections[index].clone();
            let Some(branch) = by_bijection.get(f.as_slice()) else {
                return Ok(false);
            };
            let mut child = lifted.clone();
            for &(p, v) in &branch.placements {
                child.pebbles[p] = Some((v, f[v]));
            }
            if !self.check(&child, rounds - 1, &branch.child)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}
