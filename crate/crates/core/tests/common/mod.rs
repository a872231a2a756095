//! Independent reference computations and proptest strategies shared by the
//! integration tests. Nothing here calls the incremental code paths under test.

#![allow(dead_code)]

use balmatch::model::{edges, ColouredClique, PerfectMatching};
use proptest::prelude::*;

/// Colour counts over the matching, by direct lookup.
pub fn naive_counts(clique: &ColouredClique, m: &PerfectMatching) -> Vec<u64> {
    let mut counts = vec![0u64; clique.k()];
    for &(u, v) in m.pairs() {
        counts[clique.colour(u, v) as usize - 1] += 1;
    }
    counts
}

pub fn naive_g(clique: &ColouredClique, m: &PerfectMatching) -> u64 {
    naive_counts(clique, m).iter().map(|c| c * c).sum()
}

pub fn naive_f(clique: &ColouredClique, m: &PerfectMatching) -> u64 {
    let n = clique.n() as i64;
    naive_counts(clique, m)
        .iter()
        .map(|&c| (c as i64 - n).unsigned_abs())
        .sum()
}

/// All perfect matchings of `0..v` by recursion on the smallest free vertex.
pub fn all_matchings(v: usize) -> Vec<PerfectMatching> {
    fn rec(free: &mut Vec<usize>, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if free.is_empty() {
            out.push(cur.clone());
            return;
        }
        let a = free.remove(0);
        for i in 0..free.len() {
            let b = free.remove(i);
            cur.push((a, b));
            rec(free, cur, out);
            cur.pop();
            free.insert(i, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    rec(&mut (0..v).collect(), &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|pairs| PerfectMatching::new(pairs, v).unwrap())
        .collect()
}

/// Every matching one swap away (both reconnections of every pair of pairs).
pub fn swap_neighbours(m: &PerfectMatching) -> Vec<PerfectMatching> {
    let pairs = m.pairs();
    let mut out = Vec::new();
    for a in 0..pairs.len() {
        for b in a + 1..pairs.len() {
            let (u, v) = pairs[a];
            let (x, y) = pairs[b];
            for (e1, e2) in [((u, x), (v, y)), ((u, y), (v, x))] {
                let mut next: Vec<_> = pairs.to_vec();
                next[a] = e1;
                next[b] = e2;
                out.push(PerfectMatching::new(next, m.num_vertices()).unwrap());
            }
        }
    }
    out
}

pub fn naive_is_local_min(clique: &ColouredClique, m: &PerfectMatching) -> bool {
    let g = naive_g(clique, m);
    swap_neighbours(m).iter().all(|w| naive_g(clique, w) >= g)
}

/// `(n, k)` with `2nk <= max_vertices`.
pub fn small_params(max_vertices: usize) -> impl Strategy<Value = (usize, usize)> {
    (1..=max_vertices / 2, 1..=max_vertices / 2)
        .prop_filter("2nk within bound", move |&(n, k)| 2 * n * k <= max_vertices)
}

/// Arbitrary (not necessarily balanced) colouring.
pub fn arbitrary_clique(max_vertices: usize) -> impl Strategy<Value = ColouredClique> {
    small_params(max_vertices).prop_flat_map(|(n, k)| {
        let e = edges(2 * n * k).count();
        proptest::collection::vec(1..=k as u32, e)
            .prop_map(move |colours| ColouredClique::new(n, k, colours).unwrap())
    })
}

/// Random matching on `v` vertices from a permutation.
pub fn matching_from_perm(perm: &[usize]) -> PerfectMatching {
    let pairs = perm.chunks(2).map(|c| (c[0], c[1])).collect();
    PerfectMatching::new(pairs, perm.len()).unwrap()
}

pub fn clique_and_matching(
    max_vertices: usize,
) -> impl Strategy<Value = (ColouredClique, PerfectMatching)> {
    arbitrary_clique(max_vertices).prop_flat_map(|c| {
        let v = c.num_vertices();
        let perm = Just((0..v).collect::<Vec<_>>()).prop_shuffle();
        (Just(c), perm.prop_map(|p| matching_from_perm(&p)))
    })
}
