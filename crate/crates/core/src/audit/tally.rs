//! Swap tallies over group pairs.
//!
//! The swap set is realised as ordered pairs `(g, h)` of non-matching edges where
//! `g = {u, x}` and `h = {partner(u), partner(x)}` is the edge completing the same
//! reconnection. `g -> h` is an involution on `E \ M`, so there are `4 C(nk, 2)`
//! elements, `y` is symmetric, and row sums of `y` count non-matching edges per group.

use serde::Serialize;

use crate::audit::grouping::ColourGrouping;
use crate::model::{ColourHistogram, ColouredClique, PerfectMatching};
use crate::par::{map_range, Exec};

pub type Table = Vec<Vec<i64>>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SwapTally {
    /// Swaps ending in colours from groups `(i, j)`.
    pub y: Table,
    /// Matching edges per group.
    pub p_vec: Vec<i64>,
    /// Swaps starting from groups `(i, j)`: `2 p_i p_j`, or `2 p_i (p_i - 1)` on the diagonal.
    pub p: Table,
    pub z: Table,
    /// Row sums of `z`.
    pub xi: Vec<i64>,
    pub sizes: Vec<usize>,
}

impl SwapTally {
    pub fn t(&self) -> usize {
        self.xi.len()
    }
}

pub fn destination_counts(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    grouping: &ColourGrouping,
    exec: Exec,
) -> Table {
    let t = grouping.t();
    let v = clique.num_vertices();
    let group = |a: usize, b: usize| grouping.group_of(clique.colour(a, b));
    let rows = map_range(exec, 0..v, |u| {
        let mut local = vec![vec![0i64; t]; t];
        let pu = matching.partner(u);
        for x in u + 1..v {
            if x == pu {
                continue;
            }
            let px = matching.partner(x);
            local[group(u, x)][group(pu, px)] += 1;
        }
        local
    });
    rows.into_iter().fold(vec![vec![0; t]; t], |mut acc, local| {
        for (a, l) in acc.iter_mut().zip(local) {
            for (x, y) in a.iter_mut().zip(l) {
                *x += y;
            }
        }
        acc
    })
}

/// Builds `p`, `z` and `xi` from destination counts `y` and the histogram.
pub fn tally_from_counts(y: Table, hist: &ColourHistogram, grouping: &ColourGrouping) -> SwapTally {
    let t = grouping.t();
    let p_vec: Vec<i64> = grouping
        .groups
        .iter()
        .map(|g| g.iter().map(|&c| hist.count(c) as i64).sum())
        .collect();
    let p: Table = (0..t)
        .map(|i| {
            (0..t)
                .map(|j| {
                    if i == j {
                        2 * p_vec[i] * (p_vec[i] - 1)
                    } else {
                        2 * p_vec[i] * p_vec[j]
                    }
                })
                .collect()
        })
        .collect();
    let z: Table = y
        .iter()
        .zip(&p)
        .map(|(yr, pr)| yr.iter().zip(pr).map(|(a, b)| a - b).collect())
        .collect();
    let xi = z.iter().map(|r| r.iter().sum()).collect();
    SwapTally {
        y,
        p_vec,
        p,
        z,
        xi,
        sizes: grouping.sizes(),
    }
}

pub fn compute_tallies(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    hist: &ColourHistogram,
    grouping: &ColourGrouping,
    exec: Exec,
) -> SwapTally {
    let y = destination_counts(clique, matching, grouping, exec);
    tally_from_counts(y, hist, grouping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::audit::grouping::{group_colours, Threshold};
    use crate::model::compute_histogram;

    #[test]
    fn k4_single_group() {
        let c = ColouredClique::new(1, 2, vec![1, 1, 2, 2, 1, 2]).unwrap();
        let m = PerfectMatching::new(vec![(0, 1), (2, 3)], 4).unwrap();
        let hist = compute_histogram(&c, &m).unwrap();
        let g = group_colours(&hist, Threshold::Exponential);
        let tally = compute_tallies(&c, &m, &hist, &g, Exec::Sequential);
        assert_eq!(tally.y, vec![vec![4]]);
        assert_eq!(tally.p_vec, vec![2]);
        assert_eq!(tally.p, vec![vec![4]]);
        assert_eq!(tally.z, vec![vec![0]]);
        assert_eq!(tally.xi, vec![0]);
    }

    #[test]
    fn brute_force_swap_enumeration_agrees() {
        // enumerate swaps directly: for every ordered pair of matching edges and both
        // orientations of the second, record the groups of the two new edges
        let c = crate::generate::random_balanced(2, 3, 4).unwrap();
        let m = crate::generate::random_matching(&c, 9);
        let hist = compute_histogram(&c, &m).unwrap();
        let g = group_colours(&hist, Threshold::Constant(0));
        let t = g.t();
        let mut brute = vec![vec![0i64; t]; t];
        let pairs = m.pairs();
        for (a, &(u, v)) in pairs.iter().enumerate() {
            for (b, &(x, y)) in pairs.iter().enumerate() {
                if a == b {
                    continue;
                }
                for (x, y) in [(x, y), (y, x)] {
                    let ux = g.group_of(c.colour(u, x));
                    let vy = g.group_of(c.colour(v, y));
                    brute[ux][vy] += 1;
                }
            }
        }
        // each non-matching edge is hit once as {u,x} and once as {v,y} across the two
        // orders of the pair; the realisation counts it once as the first coordinate
        let fast = destination_counts(&c, &m, &g, Exec::Parallel);
        let total: i64 = fast.iter().flatten().sum();
        assert_eq!(total, 4 * 6 * 5 / 2);
        for i in 0..t {
            for j in 0..t {
                assert_eq!(2 * fast[i][j], brute[i][j] + brute[j][i]);
            }
        }
    }
}
