//! Sequential against rayon-parallel execution for the data-parallel workloads.

use std::hint::black_box;

use balmatch::audit::{compute_tallies, group_colours, Threshold};
use balmatch::experiment::{run_sweep, SweepGrid};
use balmatch::generate::{random_balanced, random_matching};
use balmatch::model::compute_histogram;
use balmatch::oracle::{exact_minima, k6_search, K6Mode, OracleConfig};
use balmatch::search::PivotRule;
use balmatch::Exec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn k6(c: &mut Criterion) {
    let mut group = c.benchmark_group("k6_sampled");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| k6_search(K6Mode::Sampled { seed: 1, count: 50_000 }, black_box(exec)))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let clique = random_balanced(2, 3, 5).unwrap();
    let mut group = c.benchmark_group("oracle_k12");
    group.sample_size(10);
    for (name, exec) in MODES {
        let config = OracleConfig { exec, ..OracleConfig::default() };
        group.bench_function(name, |b| b.iter(|| exact_minima(black_box(&clique), &config).unwrap()));
    }
    group.finish();
}

fn tallies(c: &mut Criterion) {
    let mut group = c.benchmark_group("tallies");
    for (n, k) in [(5, 6), (10, 8)] {
        let clique = random_balanced(n, k, 3).unwrap();
        let m = random_matching(&clique, 4);
        let hist = compute_histogram(&clique, &m).unwrap();
        let grouping = group_colours(&hist, Threshold::Constant(1));
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, 2 * n * k), &exec, |b, &exec| {
                b.iter(|| compute_tallies(&clique, &m, &hist, &grouping, exec))
            });
        }
    }
    group.finish();
}

fn sweep(c: &mut Criterion) {
    let grid = SweepGrid {
        ns: vec![1, 2, 3],
        ks: vec![2, 3, 4],
        seeds: (0..4).collect(),
        pivot: PivotRule::FirstImprovement,
        timing: false,
    };
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| run_sweep(black_box(&grid), exec).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, k6, oracle, tallies, sweep);
criterion_main!(benches);
