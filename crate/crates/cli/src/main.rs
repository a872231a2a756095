//! `balmatch`: generate colourings, run swap descent, verify exhaustively, audit, sweep.
//!
//! Exit status: 0 success, 1 usage, 2 parse or validation failure, 3 audit identity
//! failure. `BALMATCH_THREADS` sets the worker count.

mod range;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use balmatch::audit::{audit, AuditConfig, Threshold};
use balmatch::bounds::check_bounds;
use balmatch::experiment::{
    run_sweep, search_extremal, search_extremal_on, write_extremal_csv, write_sweep_csv,
    ExtremalConfig, SweepGrid,
};
use balmatch::generate::{derive_seed, random_balanced, random_matching};
use balmatch::io::{
    format_colouring, format_matching, read_colouring, read_matching, ColouringFile,
};
use balmatch::model::{ColouredClique, ScoredMatching};
use balmatch::oracle::{exact_minima, k6_search, K6Mode, OracleConfig, DEFAULT_VERTEX_CAP};
use balmatch::search::{descend_state, DescentConfig, PivotRule};
use balmatch::Exec;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "balmatch", version, about = "Colour-balanced perfect matchings in edge-coloured cliques")]
struct Cli {
    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a seeded random balanced colouring of K_{2nk}.
    Gen {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Descend from a seeded (or given) matching to a swap-local minimum of g.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        /// Starting matching file; a seeded random matching when omitted.
        #[arg(long)]
        init: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// first, best, random or random:<seed>
        #[arg(long, default_value = "first")]
        pivot: PivotRule,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write accepted moves as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Enumerate every perfect matching of a small instance.
    Oracle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        list_local_minima: bool,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        /// Report whether this matching is a swap-local minimum of g.
        #[arg(long)]
        check: Option<PathBuf>,
    },
    /// Run the grouping, tally and level pipeline on a matching.
    Audit {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        matching: PathBuf,
        /// exp (alias paper), const:C or pow:B
        #[arg(long, default_value = "exp")]
        theta: Threshold,
        #[arg(long, value_enum, default_value_t = Format::Kv)]
        format: Format,
    },
    /// One descent per (n, k, seed); CSV rows sorted by (n, k, seed).
    Sweep {
        /// N, A-B or a comma list
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        k_range: String,
        /// Number of seeds per (n, k), starting at --seed-base.
        #[arg(long)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        #[arg(long, default_value = "first")]
        pivot: PivotRule,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock milliseconds (otherwise 0, keeping reruns identical).
        #[arg(long)]
        timing: bool,
    },
    /// Multi-start descent looking for local minima with large f.
    SearchExtremal {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        k: Option<u64>,
        /// Use this colouring instead of seeded random ones.
        #[arg(long = "in", conflicts_with_all = ["n", "k"])]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        seeds: u64,
        #[arg(long, default_value_t = 0)]
        seed_base: u64,
        /// Descents per colouring.
        #[arg(long, default_value_t = 32)]
        starts: usize,
        #[arg(long, default_value = "random")]
        pivot: PivotRule,
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Max over balanced 3-colourings of K6 of the min f over its 15 matchings.
    K6 {
        /// Check this many random colourings instead of all of them.
        #[arg(long)]
        sample: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the witness colouring here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Kv,
    Json,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Identity,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Identity => 3,
        }
    }
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Invalid(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn emit(path: Option<&Path>, text: &str) -> Outcome {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display()))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_with(path: Option<&Path>, write: impl FnOnce(&mut Vec<u8>) -> Result<(), String>) -> Outcome {
    let mut buf = Vec::new();
    write(&mut buf).map_err(Failure::Invalid)?;
    emit(path, &String::from_utf8_lossy(&buf))
}

fn load(path: &Path) -> Result<ColouredClique, Failure> {
    let ColouringFile { clique, balanced } = read_colouring(path)?;
    if !balanced {
        eprintln!("warning: {} is not colour-balanced; bound checks are n/a", path.display());
    }
    Ok(clique)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("BALMATCH_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("BALMATCH_THREADS={value:?} is not a positive integer")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Invalid(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn solve(
    input: &Path,
    init: Option<&Path>,
    seed: u64,
    pivot: PivotRule,
    out: Option<&Path>,
    trace_path: Option<&Path>,
) -> Outcome {
    let start = Instant::now();
    let clique = load(input)?;
    let initial = match init {
        Some(p) => read_matching(p, clique.num_vertices())?,
        None => random_matching(&clique, derive_seed(seed, 1)),
    };
    let config = DescentConfig {
        pivot: pivot.with_seed(derive_seed(seed, 2)),
        record_steps: trace_path.is_some(),
        ..DescentConfig::default()
    };
    let state = ScoredMatching::new(&clique, initial)?;
    let (state, trace) = descend_state(&clique, state, &config);
    let scores = state.scores(clique.n());
    let bounds = if clique.is_balanced() {
        if check_bounds(&clique, &state).all_hold() { "ok" } else { "fail" }
    } else {
        "n/a"
    };
    if let Some(p) = out {
        emit(Some(p), &format_matching(state.matching()))?;
    }
    if let Some(p) = trace_path {
        let mut text = String::from("step,edge_a,edge_b,reconnection,delta_g\n");
        for (i, mv) in trace.steps.iter().enumerate() {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                i + 1,
                mv.edge_a,
                mv.edge_b,
                mv.reconnection.name(),
                mv.delta_g
            ));
        }
        emit(Some(p), &text)?;
    }
    println!(
        "n={} k={} seed={} g0={} g={} f={} swaps={} ms={} bounds={}",
        clique.n(),
        clique.k(),
        seed,
        trace.g_initial,
        trace.g_final,
        scores.f,
        trace.accepted,
        start.elapsed().as_millis(),
        bounds
    );
    Ok(())
}

fn oracle(input: &Path, list: bool, cap: usize, check: Option<&Path>, exec: Exec) -> Outcome {
    let clique = load(input)?;
    let config = OracleConfig {
        cap,
        exec,
        ..OracleConfig::default()
    };
    let result = exact_minima(&clique, &config)?;
    let max_local = result
        .max_local_min_f()
        .map_or_else(|| "n/a".to_string(), |f| f.to_string());
    println!(
        "vertices={} matchings={} min_f={} min_g={} local_minima={} max_local_f={}",
        clique.num_vertices(),
        result.matching_count,
        result.min_f,
        result.min_g,
        result.local_minima.len(),
        max_local
    );
    if let Some(m) = result.argmin_f.first() {
        println!("argmin_f={m}");
    }
    if list {
        for (m, f, g) in &result.local_minima {
            println!("local_min={m} f={f} g={g}");
        }
    }
    if let Some(p) = check {
        let m = read_matching(p, clique.num_vertices())?;
        println!("local_minimum={}", result.is_enumerated_local_minimum(&m));
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    configure_threads()?;
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match cli.command {
        Command::Gen { n, k, seed, out } => {
            let clique = random_balanced(n as usize, k as usize, seed)?;
            emit(out.as_deref(), &format_colouring(&clique))
        }
        Command::Solve { input, init, seed, pivot, out, trace } => {
            solve(&input, init.as_deref(), seed, pivot, out.as_deref(), trace.as_deref())
        }
        Command::Oracle { input, list_local_minima, cap, check } => {
            oracle(&input, list_local_minima, cap, check.as_deref(), exec)
        }
        Command::Audit { input, matching, theta, format } => {
            let clique = load(&input)?;
            let m = read_matching(&matching, clique.num_vertices())?;
            let report = audit(&clique, &m, &AuditConfig { threshold: theta, exec })?;
            let text = match format {
                Format::Kv => report.to_key_value(),
                Format::Json => format!("{:#}\n", report.to_json()),
            };
            emit(None, &text)?;
            if report.identities_pass() {
                Ok(())
            } else {
                Err(Failure::Identity)
            }
        }
        Command::Sweep { n_range, k_range, seeds, seed_base, pivot, out, timing } => {
            let grid = SweepGrid {
                ns: range::parse_positive_list(&n_range).map_err(Failure::Usage)?,
                ks: range::parse_positive_list(&k_range).map_err(Failure::Usage)?,
                seeds: (seed_base..seed_base + seeds).collect(),
                pivot,
                timing,
            };
            let rows = run_sweep(&grid, exec)?;
            emit_with(out.as_deref(), |buf| {
                write_sweep_csv(buf, &rows).map_err(|e| e.to_string())
            })
        }
        Command::SearchExtremal { n, k, input, seeds, seed_base, starts, pivot, cap, out } => {
            let config = ExtremalConfig { starts, pivot, oracle_cap: cap };
            let rows = match (input, n, k) {
                (Some(p), _, _) => vec![search_extremal_on(&load(&p)?, seed_base, &config)?],
                (None, Some(n), Some(k)) => {
                    let seeds: Vec<u64> = (seed_base..seed_base + seeds).collect();
                    search_extremal(n as usize, k as usize, &seeds, &config, exec)?
                }
                _ => return Err(Failure::Usage("search-extremal needs --n and --k, or --in".into())),
            };
            emit_with(out.as_deref(), |buf| {
                write_extremal_csv(buf, &rows).map_err(|e| e.to_string())
            })
        }
        Command::K6 { sample, seed, out } => {
            let mode = match sample {
                Some(count) => K6Mode::Sampled { seed, count },
                None => K6Mode::Exhaustive,
            };
            let report = k6_search(mode, exec);
            println!(
                "colourings={} max_min_f={} witness_index={} positive_min_f={}",
                report.colourings_checked,
                report.max_min_f,
                report.witness_index,
                report.positive_min_f
            );
            match out {
                Some(p) => emit(Some(&p), &format_colouring(&report.witness)),
                None => Ok(()),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Usage(msg) | Failure::Invalid(msg) => eprintln!("error: {msg}"),
                Failure::Identity => eprintln!("error: an unconditional audit identity failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}
