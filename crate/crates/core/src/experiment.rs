//! Seeded experiment runners: a parameter sweep of single descents and a multi-start
//! search for local minima with large `f`. Both run instances independently on the
//! worker pool and return rows in a fixed order, so output is reproducible.

use std::collections::HashSet;
use std::io::Write;

use csv::{QuoteStyle, WriterBuilder};
use serde::Serialize;

use crate::bounds::check_bounds;
use crate::error::ModelError;
use crate::generate::{derive_seed, random_balanced, random_matching};
use crate::model::{ColouredClique, ScoredMatching};
use crate::oracle::{exact_minima, OracleConfig, DEFAULT_VERTEX_CAP};
use crate::par::{map_slice, Exec};
use crate::search::{descend_state, DescentConfig, PivotRule};

/// Seed streams, so that colouring, start matching and pivot RNG never share a stream.
const STREAM_START: u64 = 1;
const STREAM_PIVOT: u64 = 2;
const STREAM_MULTI: u64 = 1 << 32;

/// One descent in a sweep. Column order is the CSV header order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub pivot: String,
    pub g_initial: u64,
    pub g_final: u64,
    pub f_final: u64,
    pub swaps: u64,
    /// `f^2 <= 2nk^2`
    pub warmup_bound_holds: bool,
    /// `(2nk-1)(g - n^2 k) <= 4nk(nk-1)`
    pub g_bound_holds: bool,
    /// Zero unless timing was requested, which keeps reruns byte-identical.
    pub wallclock_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepGrid {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub seeds: Vec<u64>,
    pub pivot: PivotRule,
    pub timing: bool,
}

/// Descends once from a seeded start on the seeded colouring.
pub fn sweep_one(
    n: usize,
    k: usize,
    seed: u64,
    pivot: PivotRule,
    timing: bool,
) -> Result<SweepRecord, ModelError> {
    let clique = random_balanced(n, k, seed)?;
    let start = random_matching(&clique, derive_seed(seed, STREAM_START));
    let config = DescentConfig::with_pivot(pivot.with_seed(derive_seed(seed, STREAM_PIVOT)));
    let (state, trace) = descend_state(&clique, ScoredMatching::new(&clique, start)?, &config);
    let bounds = check_bounds(&clique, &state);
    Ok(SweepRecord {
        n,
        k,
        seed,
        pivot: pivot.name().to_string(),
        g_initial: trace.g_initial,
        g_final: trace.g_final,
        f_final: state.scores(n).f,
        swaps: trace.accepted,
        warmup_bound_holds: bounds.f_bound,
        g_bound_holds: bounds.g_bound,
        wallclock_ms: if timing {
            trace.elapsed.as_millis() as u64
        } else {
            0
        },
    })
}

/// Runs every `(n, k, seed)` of the grid; rows come back sorted by `(n, k, seed)`.
pub fn run_sweep(grid: &SweepGrid, exec: Exec) -> Result<Vec<SweepRecord>, ModelError> {
    let mut jobs: Vec<(usize, usize, u64)> = Vec::new();
    for &n in &grid.ns {
        for &k in &grid.ks {
            jobs.extend(grid.seeds.iter().map(|&s| (n, k, s)));
        }
    }
    jobs.sort_unstable();
    jobs.dedup();
    map_slice(exec, &jobs, |&(n, k, s)| {
        sweep_one(n, k, s, grid.pivot, grid.timing)
    })
    .into_iter()
    .collect()
}

fn write_rows<W: Write, R: Serialize>(out: W, rows: &[R]) -> csv::Result<()> {
    let mut w = WriterBuilder::new()
        .quote_style(QuoteStyle::Never)
        .from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// CSV with a fixed header. Empty input writes nothing.
pub fn write_sweep_csv<W: Write>(out: W, rows: &[SweepRecord]) -> csv::Result<()> {
    write_rows(out, rows)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalConfig {
    /// Descents per colouring.
    pub starts: usize,
    pub pivot: PivotRule,
    /// Oracle vertex cap; larger instances get no oracle columns.
    pub oracle_cap: usize,
}

impl Default for ExtremalConfig {
    fn default() -> Self {
        Self {
            starts: 32,
            pivot: PivotRule::RandomImprovement { seed: 0 },
            oracle_cap: DEFAULT_VERTEX_CAP,
        }
    }
}

/// Multi-start summary for one colouring. Oracle columns are empty when `2nk` exceeds
/// the cap.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    pub starts: usize,
    pub distinct_minima: usize,
    pub max_local_f: u64,
    pub min_local_f: u64,
    /// `f^2 <= 2nk^2` for every local minimum found.
    pub bound_holds: bool,
    pub oracle_min_f: Option<u64>,
    /// `min_local_f - oracle_min_f`
    pub gap: Option<u64>,
    /// Largest `f` over all swap-local minima, from the oracle.
    pub oracle_max_local_f: Option<u64>,
}

/// Multi-start descent on a given colouring. `seed` drives the starts and pivot RNGs.
pub fn search_extremal_on(
    clique: &ColouredClique,
    seed: u64,
    config: &ExtremalConfig,
) -> Result<ExtremalRecord, ModelError> {
    let (n, k) = (clique.n(), clique.k());
    let mut seen = HashSet::new();
    let mut max_f = 0;
    let mut min_f = u64::MAX;
    let mut bound_holds = true;
    for i in 0..config.starts.max(1) as u64 {
        let stream = derive_seed(seed, STREAM_MULTI + i);
        let start = random_matching(clique, derive_seed(stream, STREAM_START));
        let descent =
            DescentConfig::with_pivot(config.pivot.with_seed(derive_seed(stream, STREAM_PIVOT)));
        let (state, _) = descend_state(clique, ScoredMatching::new(clique, start)?, &descent);
        let f = state.scores(n).f;
        max_f = max_f.max(f);
        min_f = min_f.min(f);
        bound_holds &= check_bounds(clique, &state).f_bound;
        seen.insert(state.into_matching());
    }
    let oracle = exact_minima(
        clique,
        &OracleConfig {
            cap: config.oracle_cap,
            argmin_cap: 1,
            exec: Exec::Sequential,
        },
    )
    .ok();
    let oracle_min_f = oracle.as_ref().map(|o| o.min_f);
    Ok(ExtremalRecord {
        n,
        k,
        seed,
        starts: config.starts.max(1),
        distinct_minima: seen.len(),
        max_local_f: max_f,
        min_local_f: min_f,
        bound_holds,
        oracle_min_f,
        gap: oracle_min_f.map(|o| min_f - o),
        oracle_max_local_f: oracle.and_then(|o| o.max_local_min_f()),
    })
}

/// One row per seed, in the order given, each on the seeded balanced colouring.
pub fn search_extremal(
    n: usize,
    k: usize,
    seeds: &[u64],
    config: &ExtremalConfig,
    exec: Exec,
) -> Result<Vec<ExtremalRecord>, ModelError> {
    map_slice(exec, seeds, |&seed| {
        let clique = random_balanced(n, k, seed)?;
        search_extremal_on(&clique, seed, config)
    })
    .into_iter()
    .collect()
}

pub fn write_extremal_csv<W: Write>(out: W, rows: &[ExtremalRecord]) -> csv::Result<()> {
    write_rows(out, rows)
}
