//! Swap descent on `g(M) = sum m_i^2`.
//!
//! The neighbourhood of a matching with `P` pairs is every `(a, b, reconnection)` with
//! `a < b`, scanned lexicographically: `2 * C(P, 2)` moves. A descent ends at a
//! swap-local minimum, certified by a full scan that finds no move with `delta_g < 0`.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::ModelError;
use crate::generate::{derive_seed, rng};
use crate::model::{ColouredClique, PerfectMatching, Reconnection, ScoredMatching, SwapMove};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PivotRule {
    /// First improving move in scan order.
    #[default]
    FirstImprovement,
    /// Most negative `delta_g`; ties go to the earliest move in scan order.
    BestImprovement,
    /// Uniform among all improving moves, driven by a seeded RNG.
    RandomImprovement { seed: u64 },
}

impl PivotRule {
    pub fn name(&self) -> &'static str {
        match self {
            PivotRule::FirstImprovement => "first",
            PivotRule::BestImprovement => "best",
            PivotRule::RandomImprovement { .. } => "random",
        }
    }

    /// Same rule, with a random rule re-seeded to `seed`.
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            PivotRule::RandomImprovement { .. } => PivotRule::RandomImprovement { seed },
            other => other,
        }
    }
}

impl fmt::Display for PivotRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PivotRule {
    type Err = String;

    /// Accepts `first`, `best`, `random` (seed 0) or `random:<seed>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" => Ok(PivotRule::FirstImprovement),
            "best" => Ok(PivotRule::BestImprovement),
            "random" => Ok(PivotRule::RandomImprovement { seed: 0 }),
            _ => match s.strip_prefix("random:").map(str::parse) {
                Some(Ok(seed)) => Ok(PivotRule::RandomImprovement { seed }),
                _ => Err(format!(
                    "unknown pivot rule {s:?} (expected first, best, random or random:<seed>)"
                )),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentConfig {
    pub pivot: PivotRule,
    /// Resume first-improvement scans where the last improving move was found.
    pub rotate: bool,
    /// Try this many random moves per step before falling back to a full scan.
    pub sample: Option<usize>,
    pub record_steps: bool,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            pivot: PivotRule::FirstImprovement,
            rotate: true,
            sample: None,
            record_steps: false,
        }
    }
}

impl DescentConfig {
    pub fn with_pivot(pivot: PivotRule) -> Self {
        Self {
            pivot,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DescentTrace {
    pub g_initial: u64,
    pub g_final: u64,
    pub accepted: u64,
    /// Full neighbourhood scans performed.
    pub full_scans: u64,
    /// Accepted moves in order; empty unless recording was requested.
    pub steps: Vec<SwapMove>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Position {
    a: usize,
    b: usize,
    rec: Reconnection,
}

impl Position {
    const START: Position = Position {
        a: 0,
        b: 1,
        rec: Reconnection::Cross1,
    };

    fn advance(self, pairs: usize) -> Position {
        if self.rec == Reconnection::Cross1 {
            return Position {
                rec: Reconnection::Cross2,
                ..self
            };
        }
        let (mut a, mut b) = (self.a, self.b + 1);
        if b == pairs {
            a += 1;
            b = a + 1;
            if b == pairs {
                return Position::START;
            }
        }
        Position {
            a,
            b,
            rec: Reconnection::Cross1,
        }
    }
}

struct Scanner {
    pivot: PivotRule,
    rng: Option<ChaCha8Rng>,
    cursor: Position,
    rotate: bool,
}

impl Scanner {
    fn new(pivot: PivotRule, rotate: bool) -> Self {
        let rng = match pivot {
            PivotRule::RandomImprovement { seed } => Some(rng(seed)),
            _ => None,
        };
        Self {
            pivot,
            rng,
            cursor: Position::START,
            rotate,
        }
    }

    fn full_scan(&mut self, clique: &ColouredClique, state: &ScoredMatching) -> Option<SwapMove> {
        let pairs = state.matching().len();
        if pairs < 2 {
            return None;
        }
        let total = state.neighbourhood_size();
        let to_move = |p: Position, delta_g: i64| SwapMove {
            edge_a: p.a,
            edge_b: p.b,
            reconnection: p.rec,
            delta_g,
        };
        match self.pivot {
            PivotRule::FirstImprovement => {
                let mut p = if self.rotate {
                    self.cursor
                } else {
                    Position::START
                };
                for _ in 0..total {
                    let d = state.delta(clique, p.a, p.b, p.rec);
                    if d < 0 {
                        self.cursor = p;
                        return Some(to_move(p, d));
                    }
                    p = p.advance(pairs);
                }
                None
            }
            PivotRule::BestImprovement => {
                let mut best: Option<SwapMove> = None;
                let mut p = Position::START;
                for _ in 0..total {
                    let d = state.delta(clique, p.a, p.b, p.rec);
                    if d < 0 && best.is_none_or(|m| d < m.delta_g) {
                        best = Some(to_move(p, d));
                    }
                    p = p.advance(pairs);
                }
                best
            }
            PivotRule::RandomImprovement { .. } => {
                let mut improving = Vec::new();
                let mut p = Position::START;
                for _ in 0..total {
                    let d = state.delta(clique, p.a, p.b, p.rec);
                    if d < 0 {
                        improving.push(to_move(p, d));
                    }
                    p = p.advance(pairs);
                }
                if improving.is_empty() {
                    return None;
                }
                let rng = self.rng.as_mut().expect("random pivot carries an rng");
                Some(improving[rng.random_range(0..improving.len())])
            }
        }
    }

    fn sampled(
        &mut self,
        clique: &ColouredClique,
        state: &ScoredMatching,
        rng: &mut ChaCha8Rng,
        samples: usize,
    ) -> Option<SwapMove> {
        let pairs = state.matching().len();
        if pairs < 2 {
            return None;
        }
        for _ in 0..samples {
            let a = rng.random_range(0..pairs);
            let mut b = rng.random_range(0..pairs - 1);
            if b >= a {
                b += 1;
            }
            let rec = if rng.random_bool(0.5) {
                Reconnection::Cross1
            } else {
                Reconnection::Cross2
            };
            let (a, b) = (a.min(b), a.max(b));
            let d = state.delta(clique, a, b, rec);
            if d < 0 {
                return Some(SwapMove {
                    edge_a: a,
                    edge_b: b,
                    reconnection: rec,
                    delta_g: d,
                });
            }
        }
        None
    }
}

/// An improving swap chosen by `rule`, or `None` iff the matching is a swap-local minimum.
/// A random rule draws from a fresh RNG seeded with its seed.
pub fn find_improving_swap(
    clique: &ColouredClique,
    state: &ScoredMatching,
    rule: PivotRule,
) -> Option<SwapMove> {
    Scanner::new(rule, false).full_scan(clique, state)
}

/// True iff no swap strictly decreases `g`.
pub fn is_local_minimum(clique: &ColouredClique, state: &ScoredMatching) -> bool {
    find_improving_swap(clique, state, PivotRule::FirstImprovement).is_none()
}

/// Applies improving swaps until none is left.
pub fn descend_state(
    clique: &ColouredClique,
    mut state: ScoredMatching,
    config: &DescentConfig,
) -> (ScoredMatching, DescentTrace) {
    let start = Instant::now();
    let mut scanner = Scanner::new(config.pivot, config.rotate);
    let mut sampler = config.sample.map(|s| {
        let seed = match config.pivot {
            PivotRule::RandomImprovement { seed } => seed,
            _ => 0,
        };
        (rng(derive_seed(seed, 0x5a)), s)
    });
    let mut trace = DescentTrace {
        g_initial: state.g(),
        g_final: state.g(),
        accepted: 0,
        full_scans: 0,
        steps: Vec::new(),
        elapsed: Duration::ZERO,
    };
    loop {
        let sampled = sampler
            .as_mut()
            .and_then(|(rng, s)| scanner.sampled(clique, &state, rng, *s));
        let mv = match sampled {
            Some(mv) => mv,
            None => {
                trace.full_scans += 1;
                match scanner.full_scan(clique, &state) {
                    Some(mv) => mv,
                    None => break,
                }
            }
        };
        state
            .apply(clique, &mv)
            .expect("scanner only yields valid pair indices");
        trace.accepted += 1;
        if config.record_steps {
            trace.steps.push(mv);
        }
    }
    trace.g_final = state.g();
    trace.elapsed = start.elapsed();
    (state, trace)
}

/// Descends from `initial` to a swap-local minimum of `g`.
pub fn descend(
    clique: &ColouredClique,
    initial: PerfectMatching,
    config: &DescentConfig,
) -> Result<(PerfectMatching, DescentTrace), ModelError> {
    let state = ScoredMatching::new(clique, initial)?;
    let (state, trace) = descend_state(clique, state, config);
    Ok((state.into_matching(), trace))
}
