//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use balmatch::audit::levels::{project_levels, Relation};
use balmatch::audit::{
    audit, check_identities, compute_tallies, group_colours, AuditConfig, Threshold,
};
use balmatch::bounds::check_bounds;
use balmatch::generate::{derive_seed, random_balanced, random_matching, rng};
use balmatch::model::{
    apply_swap, compute_histogram, edges, reconnected_edges, swap_delta_g, weight,
    ColouredClique, PerfectMatching, Reconnection, ScoredMatching, SwapMove,
};
use balmatch::oracle::{exact_minima, k6_search, K6Mode, OracleConfig, K6_COLOURINGS};
use balmatch::par::{current_threads, map_slice};
use balmatch::search::{descend, DescentConfig, PivotRule};
use balmatch::Exec;
use common::{all_matchings, naive_counts, naive_f, naive_g, naive_is_local_min};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Average weight inside and outside the matching, summed edge by edge.
fn naive_average_gap(c: &ColouredClique, m: &PerfectMatching) -> BigRational {
    let counts = naive_counts(c, m);
    let w = |u: usize, v: usize| counts[c.colour(u, v) as usize - 1] as i64;
    let (mut inside, mut outside, mut n_in, mut n_out) = (0i64, 0i64, 0i64, 0i64);
    for (u, v) in edges(c.num_vertices()) {
        if m.partner(u) == v {
            inside += w(u, v);
            n_in += 1;
        } else {
            outside += w(u, v);
            n_out += 1;
        }
    }
    BigRational::new(inside.into(), n_in.into()) - BigRational::new(outside.into(), n_out.into())
}

fn ac1() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = 0;
    for mask in 0u32..64 {
        if mask.count_ones() != 3 {
            continue;
        }
        let c = ColouredClique::new(1, 2, (0..6).map(|i| 1 + (mask >> i & 1)).collect()).unwrap();
        let res = exact_minima(&c, &OracleConfig::default()).unwrap();
        let naive = all_matchings(4).iter().map(|m| naive_f(&c, m)).min().unwrap();
        checked += 1;
        if res.min_f != 0 || naive != 0 {
            bad += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        checked == 20 && bad == 0 && t < Duration::from_secs(1),
        format!("K4 balanced 2-colourings: {checked} checked, min f = 0 for all but {bad}; {}", secs(t)),
    )
}

fn ac2() -> Outcome {
    let s0 = Instant::now();
    let seq = k6_search(K6Mode::Exhaustive, Exec::Sequential);
    let t_seq = s0.elapsed();
    let s1 = Instant::now();
    let par = k6_search(K6Mode::Exhaustive, Exec::Parallel);
    let t_par = s1.elapsed();
    let witness_min = all_matchings(6)
        .iter()
        .map(|m| naive_f(&par.witness, m))
        .min()
        .unwrap();
    let pass = seq == par
        && par.colourings_checked == K6_COLOURINGS
        && par.max_min_f == 2
        && par.positive_min_f >= 1
        && par.witness.is_balanced()
        && witness_min == 2
        && t_seq < Duration::from_secs(60)
        && t_par < Duration::from_secs(10);
    outcome(
        pass,
        format!(
            "K6 balanced 3-colourings: {} checked, max min f = {}, attained by {} (witness #{} re-verified min f = {}); sequential {}, parallel {} on {} thread(s)",
            par.colourings_checked,
            par.max_min_f,
            par.positive_min_f,
            par.witness_index,
            witness_min,
            secs(t_seq),
            secs(t_par),
            current_threads()
        ),
    )
}

/// Local minima from the bound-suite grid, kept for the prefix check.
type Grid = Vec<(ColouredClique, PerfectMatching)>;

fn ac3() -> (Outcome, Grid) {
    let start = Instant::now();
    let mut jobs = Vec::new();
    for n in 1..=5usize {
        for k in 2..=6usize {
            if 2 * n * k <= 60 {
                for s in 0..8u64 {
                    jobs.push((n, k, s));
                }
            }
        }
    }
    let pivots = [
        PivotRule::FirstImprovement,
        PivotRule::BestImprovement,
        PivotRule::RandomImprovement { seed: 0 },
    ];
    let results = map_slice(Exec::Parallel, &jobs, |&(n, k, s)| {
        let seed = derive_seed(0xb0b, (n * 100 + k) as u64 * 1000 + s);
        let c = random_balanced(n, k, seed).unwrap();
        let pivot = pivots[s as usize % 3].with_seed(seed);
        let (m, _) = descend(&c, random_matching(&c, seed ^ 1), &DescentConfig::with_pivot(pivot)).unwrap();
        let state = ScoredMatching::new(&c, m.clone()).unwrap();
        let b = check_bounds(&c, &state);
        let (f, g) = (naive_f(&c, &m) as u128, naive_g(&c, &m) as u128);
        let (n2, k2) = (n as u128, k as u128);
        let nk = n2 * k2;
        let gap_ok = nk < 2 || naive_average_gap(&c, &m) <= rat(2);
        let independent = gap_ok
            && (2 * nk - 1) * (g - n2 * n2 * k2) <= 4 * nk * (nk - 1)
            && f * f <= 2 * n2 * k2 * k2
            && f <= 4u128.pow((k2 * k2) as u32);
        let local = naive_is_local_min(&c, &m);
        (b.all_hold() && independent && local, c, m)
    });
    let total = results.len();
    let failures = results.iter().filter(|r| !r.0).count();
    let t = start.elapsed();
    let grid = results.into_iter().map(|(_, c, m)| (c, m)).collect();
    (
        outcome(
            total >= 200 && failures == 0 && t < Duration::from_secs(120),
            format!(
                "warm-up bounds on {total} descents over n in 1..5, k in 2..6: {failures} failures (average gap, g bound, f^2 <= 2nk^2, f <= 4^(k^2), local minimum re-verified); {}",
                secs(t)
            ),
        ),
        grid,
    )
}

fn ac4() -> Outcome {
    let thresholds = [
        Threshold::Exponential,
        Threshold::Constant(0),
        Threshold::Constant(1),
        Threshold::Constant(3),
        Threshold::Power(2),
    ];
    let mut pairs = 0;
    let mut failures = 0;
    let mut multi_group = 0;
    let mut printed_form_mismatch = 0;
    let mut rows = 0;
    for seed in 0..120u64 {
        let n = 1 + seed as usize % 3;
        let k = 2 + (seed as usize / 3) % 4;
        let c = random_balanced(n, k, derive_seed(seed, 44)).unwrap();
        let m = random_matching(&c, derive_seed(seed, 45));
        let hist = compute_histogram(&c, &m).unwrap();
        let grouping = group_colours(&hist, thresholds[seed as usize % thresholds.len()]);
        let tally = compute_tallies(&c, &m, &hist, &grouping, Exec::Parallel);
        pairs += 1;
        if grouping.t() > 1 {
            multi_group += 1;
        }
        let checks = check_identities(&tally, &c);
        if checks.iter().any(|x| x.failed()) {
            failures += 1;
        }
        // independent re-derivation of the listed sums
        let nk = (n * k) as i64;
        let v = 2 * nk;
        let mut ok = tally.y.iter().flatten().sum::<i64>() == 2 * nk * (nk - 1)
            && tally.p.iter().flatten().sum::<i64>() == 2 * nk * (nk - 1)
            && tally.z.iter().flatten().sum::<i64>() == 0
            && tally.xi.iter().sum::<i64>() == 0;
        for i in 0..grouping.t() {
            let size = grouping.groups[i].len() as i64;
            let p_i = tally.p_vec[i];
            ok &= tally.y[i].iter().sum::<i64>() == size * n as i64 * (v - 1) - p_i;
            ok &= tally.p[i].iter().sum::<i64>() == 2 * p_i * (nk - 1);
            let lhs = BigRational::new(tally.xi[i].into(), size.into());
            let rhs = rat(n as i64 * (v - 1)) - BigRational::new((p_i * (v - 1)).into(), size.into());
            ok &= lhs == rhs;
            let printed = rat(n as i64 * (v - 1)) - BigRational::new((p_i * (v - 3)).into(), size.into());
            rows += 1;
            if lhs != printed {
                printed_form_mismatch += 1;
            }
        }
        if !ok {
            failures += 1;
        }
    }
    println!(
        "AC4 note: the variant xi_i/|A_i| = n(2nk-1) - p_i(2nk-3)/|A_i| disagrees on {printed_form_mismatch}/{rows} group rows (it differs by 2p_i/|A_i|); the checked form uses (2nk-1), which is what the unsimplified sum gives"
    );
    outcome(
        pairs >= 100 && failures == 0 && multi_group > 0,
        format!(
            "tally identities on {pairs} arbitrary (balanced colouring, matching) pairs, {multi_group} with t > 1: {failures} failures"
        ),
    )
}

fn ac5() -> Outcome {
    let mut r = rng(0xc1a1);
    let mut instances = 0;
    let mut moves = 0u64;
    let mut triggered = 0u64;
    let mut failures = 0u64;
    for _ in 0..150 {
        let (n, k) = loop {
            let (n, k) = (r.random_range(1..=5usize), r.random_range(1..=10usize));
            if 2 * n * k <= 20 {
                break (n, k);
            }
        };
        let c = random_balanced(n, k, r.random()).unwrap();
        let m = random_matching(&c, r.random());
        let hist = compute_histogram(&c, &m).unwrap();
        let g = naive_g(&c, &m) as i64;
        instances += 1;
        for a in 0..m.len() {
            for b in a + 1..m.len() {
                for rec in Reconnection::ALL {
                    moves += 1;
                    let d = swap_delta_g(&c, &m, &hist, a, b, rec).unwrap();
                    let next = apply_swap(&m, &SwapMove { edge_a: a, edge_b: b, reconnection: rec, delta_g: d }).unwrap();
                    if naive_g(&c, &next) as i64 - g != d {
                        failures += 1;
                    }
                    let (u, v) = m.pairs()[a];
                    let (x, y) = m.pairs()[b];
                    let (e1, e2) = reconnected_edges(&m, a, b, rec);
                    let gain = weight(&c, &hist, u, v) as i64 + weight(&c, &hist, x, y) as i64
                        - weight(&c, &hist, e1.0, e1.1) as i64
                        - weight(&c, &hist, e2.0, e2.1) as i64;
                    if gain > 4 {
                        triggered += 1;
                        if !(d < 0 && -d >= 2 * (gain - 4)) {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(
        failures == 0 && triggered > 0,
        format!(
            "swap property on {instances} instances (2nk <= 20): {moves} moves checked exhaustively, {triggered} with weight gain > 4, {failures} failures"
        ),
    )
}

fn ac6() -> Outcome {
    let mut runs = 0;
    let mut failures = 0;
    for (n, k) in [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1), (2, 2), (3, 1), (4, 1), (5, 1)] {
        for seed in 0..6u64 {
            let c = random_balanced(n, k, seed).unwrap();
            let res = exact_minima(&c, &OracleConfig::default()).unwrap();
            for pivot in [
                PivotRule::FirstImprovement,
                PivotRule::BestImprovement,
                PivotRule::RandomImprovement { seed },
            ] {
                for start in 0..3u64 {
                    let (m, trace) =
                        descend(&c, random_matching(&c, seed * 7 + start), &DescentConfig::with_pivot(pivot)).unwrap();
                    runs += 1;
                    if !res.is_enumerated_local_minimum(&m) || trace.g_final < res.min_g {
                        failures += 1;
                    }
                }
            }
        }
    }
    outcome(
        failures == 0,
        format!("oracle consistency for 2nk <= 10: {runs} descents, {failures} outside the enumerated local-minimum set or below min g"),
    )
}

fn ac7() -> Outcome {
    let rel = Relation { left: (0, 2), right: (1, 1) };
    let worked = project_levels(3, &[rel], vec![9.into(), 4.into(), 1.into()]);
    let third = |x: i64| BigRational::new(x.into(), 3.into());
    let worked_ok = worked.a == vec![third(26), third(14), third(2)];
    let mut r = rng(0x1e7e15);
    let mut systems = 0;
    let mut failures = 0;
    for _ in 0..500 {
        let t = r.random_range(1..=8usize);
        let rels: Vec<Relation> = (0..r.random_range(0..12))
            .map(|_| Relation {
                left: (r.random_range(0..t), r.random_range(0..t)),
                right: (r.random_range(0..t), r.random_range(0..t)),
            })
            .collect();
        let b: Vec<BigInt> = (0..t).map(|_| BigInt::from(r.random_range(-40i64..300))).collect();
        let sys = project_levels(t, &rels, b.clone());
        systems += 1;
        // N a = 0 for every relation, recomputed here
        let null_ok = rels.iter().all(|rel| {
            let row = rel.row(t);
            row.iter().zip(&sys.a).map(|(&x, a)| rat(x) * a).sum::<BigRational>().is_zero()
        });
        let residual_ok = sys.null_basis.iter().all(|v| {
            v.iter()
                .zip(b.iter().zip(&sys.a))
                .map(|(x, (bi, ai))| x * (BigRational::from_integer(bi.clone()) - ai))
                .sum::<BigRational>()
                .is_zero()
        });
        if !(null_ok && residual_ok && sys.null_ok && sys.residual_ok) {
            failures += 1;
        }
    }
    outcome(
        worked_ok && failures == 0,
        format!("level solver: worked t=3 example gives (26/3, 14/3, 2/3): {worked_ok}; {systems} random systems with t <= 8, {failures} with nonzero N a or residual"),
    )
}

fn ac8(grid: &Grid) -> Outcome {
    let thresholds = [Threshold::Exponential, Threshold::Constant(1), Threshold::Constant(0), Threshold::Power(2)];
    let results = map_slice(Exec::Parallel, grid, |(c, m)| {
        thresholds
            .iter()
            .map(|&threshold| {
                let r = audit(c, m, &AuditConfig { threshold, exec: Exec::Sequential }).unwrap();
                let ok = r.local_minimum
                    && r.prefix.all_nonnegative()
                    && r.prefix.sums.last() == Some(&0)
                    && r.prefix.down_swaps == 0;
                (ok, r.t() > 1)
            })
            .collect::<Vec<_>>()
    });
    let audits = results.iter().map(Vec::len).sum::<usize>();
    let failures = results.iter().flatten().filter(|r| !r.0).count();
    let multi = results.iter().flatten().filter(|r| r.1).count();
    outcome(
        !grid.is_empty() && failures == 0,
        format!(
            "prefix sums of z on {} local minima x {} thresholds ({audits} audits, {multi} with t > 1): {failures} with a negative prefix, nonzero total or downward swap",
            grid.len(),
            thresholds.len()
        ),
    )
}

fn main() -> ExitCode {
    let mut all = true;
    let mut report = |name: &str, o: Outcome| {
        all &= o.pass;
        println!("{name} {} {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    };
    report("AC1", ac1());
    report("AC2", ac2());
    let (o3, grid) = ac3();
    report("AC3", o3);
    report("AC4", ac4());
    report("AC5", ac5());
    report("AC6", ac6());
    report("AC7", ac7());
    report("AC8", ac8(&grid));
    if all {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: FAILED");
        ExitCode::FAILURE
    }
}
