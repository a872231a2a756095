mod common;

use balmatch::audit::{
    audit, check_identities, classify_pairs, compute_tallies, group_colours, AuditConfig,
    ColourGrouping, Threshold,
};
use balmatch::generate::{random_balanced, random_matching};
use balmatch::model::{compute_histogram, ColouredClique, PerfectMatching};
use balmatch::search::{descend, DescentConfig};
use balmatch::Exec;
use common::{clique_and_matching, matching_from_perm, naive_counts, naive_g, swap_neighbours};
use num_bigint::BigUint;
use proptest::prelude::*;

fn threshold() -> impl Strategy<Value = Threshold> {
    prop_oneof![
        Just(Threshold::Exponential),
        (0u64..12).prop_map(Threshold::Constant),
        (1u64..4).prop_map(Threshold::Power),
    ]
}

/// Swap tallies by listing every swap: each unordered pair of matching edges and each
/// reconnection, counted in both orders.
fn brute_tallies(
    c: &ColouredClique,
    m: &PerfectMatching,
    grouping: &ColourGrouping,
) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
    let t = grouping.t();
    let alpha = |u: usize, v: usize| grouping.group_of(c.colour(u, v));
    let mut y = vec![vec![0; t]; t];
    let mut p = vec![vec![0; t]; t];
    let pairs = m.pairs();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let (u, v) = pairs[a];
            let (x, w) = pairs[b];
            let (ea, eb) = (alpha(u, v), alpha(x, w));
            for (g, h) in [((u, x), (v, w)), ((u, w), (v, x))] {
                let (ga, ha) = (alpha(g.0, g.1), alpha(h.0, h.1));
                y[ga][ha] += 1;
                y[ha][ga] += 1;
                p[ea][eb] += 1;
                p[eb][ea] += 1;
            }
        }
    }
    (y, p)
}

fn balanced_pair() -> impl Strategy<Value = (ColouredClique, PerfectMatching)> {
    (1usize..=3, 1usize..=4, any::<u64>())
        .prop_filter("size", |&(n, k, _)| 2 * n * k <= 18)
        .prop_flat_map(|(n, k, seed)| {
            let c = random_balanced(n, k, seed).unwrap();
            let v = c.num_vertices();
            let perm = Just((0..v).collect::<Vec<_>>()).prop_shuffle();
            (Just(c), perm.prop_map(|p| matching_from_perm(&p)))
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn tallies_match_swap_enumeration((c, m) in clique_and_matching(16), theta in threshold()) {
        let hist = compute_histogram(&c, &m).unwrap();
        let grouping = group_colours(&hist, theta);
        let tally = compute_tallies(&c, &m, &hist, &grouping, Exec::Parallel);
        let (y, p) = brute_tallies(&c, &m, &grouping);
        prop_assert_eq!(&tally.y, &y);
        prop_assert_eq!(&tally.p, &p);
        let nk = (c.n() * c.k()) as i64;
        prop_assert_eq!(y.iter().flatten().sum::<i64>(), 2 * nk * (nk - 1));
    }

    #[test]
    fn identities_hold_on_balanced_pairs((c, m) in balanced_pair(), theta in threshold()) {
        let r = audit(&c, &m, &AuditConfig { threshold: theta, exec: Exec::Sequential }).unwrap();
        prop_assert!(r.balanced);
        prop_assert!(r.identities_pass(), "{:?}", r.checks);
    }

    #[test]
    fn unconditional_identities_hold_on_any_pair((c, m) in clique_and_matching(16), theta in threshold()) {
        let hist = compute_histogram(&c, &m).unwrap();
        let grouping = group_colours(&hist, theta);
        let tally = compute_tallies(&c, &m, &hist, &grouping, Exec::Sequential);
        for check in check_identities(&tally, &c) {
            prop_assert!(!check.failed(), "{:?}", check);
        }
    }

    #[test]
    fn grouping_is_a_contiguous_separated_partition(counts in proptest::collection::vec(0u64..40, 1..9), theta in threshold()) {
        let k = counts.len();
        let hist = balmatch::model::ColourHistogram::from_counts(counts.clone());
        let g = group_colours(&hist, theta);
        let flat: Vec<u32> = g.groups.iter().flatten().copied().collect();
        prop_assert_eq!(&flat, &g.order);
        let mut sorted = flat.clone();
        sorted.sort();
        prop_assert_eq!(sorted, (1..=k as u32).collect::<Vec<_>>());
        for w in g.order.windows(2) {
            prop_assert!(counts[w[0] as usize - 1] >= counts[w[1] as usize - 1]);
        }
        for (i, members) in g.groups.iter().enumerate() {
            let ms: Vec<u64> = members.iter().map(|&c| counts[c as usize - 1]).collect();
            prop_assert_eq!(g.lo[i], *ms.iter().min().unwrap());
            prop_assert_eq!(g.hi[i], *ms.iter().max().unwrap());
            for &c in members {
                prop_assert_eq!(g.group_of(c), i);
            }
        }
        for mg in &g.merges {
            prop_assert!(BigUint::from(mg.gap) <= theta.at(mg.merges_before, k));
        }
        prop_assert!(g.t() == 1 || g.separated());
    }

    #[test]
    fn classes_are_totally_ordered(counts in proptest::collection::vec(0u64..60, 1..8), theta in threshold()) {
        let hist = balmatch::model::ColourHistogram::from_counts(counts);
        let g = group_colours(&hist, theta);
        let cls = classify_pairs(&g);
        let t = g.t();
        let mut seen = 0;
        for (q, class) in cls.classes.iter().enumerate() {
            seen += class.len();
            for &p in class {
                prop_assert_eq!(cls.class_of(p), q);
                prop_assert_eq!(cls.class_of((p.1, p.0)), q);
            }
        }
        prop_assert_eq!(seen, t * t);
        for i in 0..t { for j in 0..t { for a in 0..t { for b in 0..t {
            let (p, r) = ((i, j), (a, b));
            let (cp, cr) = (cls.class_of(p), cls.class_of(r));
            if cp < cr {
                prop_assert!(cls.dominates(p, r));
            }
            if cls.incomparable(p, r) {
                prop_assert_eq!(cp, cr);
            }
        }}}}
        prop_assert!(cls.totally_ordered);
    }

    #[test]
    fn down_swaps_are_improving_moves((c, m) in clique_and_matching(14), theta in threshold()) {
        let r = audit(&c, &m, &AuditConfig { threshold: theta, exec: Exec::Sequential }).unwrap();
        let g = naive_g(&c, &m);
        let improving = swap_neighbours(&m).iter().filter(|w| naive_g(&c, w) < g).count() as u64;
        prop_assert!(r.prefix.down_swaps <= improving);
        prop_assert_eq!(*r.prefix.sums.last().unwrap(), 0);
    }

    #[test]
    fn local_minima_have_nonnegative_prefixes((c, m) in clique_and_matching(16), theta in threshold()) {
        let (m, _) = descend(&c, m, &DescentConfig::default()).unwrap();
        let r = audit(&c, &m, &AuditConfig { threshold: theta, exec: Exec::Parallel }).unwrap();
        prop_assert!(r.local_minimum);
        prop_assert!(r.prefix.all_nonnegative(), "{:?}", r.prefix);
        prop_assert_eq!(r.prefix.down_swaps, 0);
        prop_assert!(r.contradictions().is_empty(), "{:?}", r.contradictions());
    }
}

#[test]
fn contrived_histogram_gives_several_groups() {
    // random matchings on a balanced K_24 spread their colour counts enough that a
    // threshold of 1 leaves several groups
    let c = random_balanced(3, 4, 2).unwrap();
    let mut best = 0;
    for seed in 0..200 {
        let m = random_matching(&c, seed);
        let r = audit(&c, &m, &AuditConfig { threshold: Threshold::Constant(1), exec: Exec::Sequential }).unwrap();
        assert!(r.identities_pass());
        assert_eq!(r.t(), r.grouping.t());
        best = best.max(r.t());
    }
    assert!(best >= 3, "t reached only {best}");
}

#[test]
fn parallel_and_sequential_tallies_agree() {
    let c = random_balanced(3, 3, 8).unwrap();
    let m = random_matching(&c, 1);
    let hist = compute_histogram(&c, &m).unwrap();
    assert_eq!(hist.counts(), naive_counts(&c, &m).as_slice());
    let g = group_colours(&hist, Threshold::Constant(0));
    assert_eq!(
        compute_tallies(&c, &m, &hist, &g, Exec::Sequential),
        compute_tallies(&c, &m, &hist, &g, Exec::Parallel)
    );
}
