//! Level vectors: labels `a_1..a_t` with `a_i + a_j = a_i' + a_j'` for every relation
//! `(i,j) ~ (i',j')`, obtained as the exact projection of the group minima onto the null
//! space of the relation matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::audit::grouping::ColourGrouping;
use crate::audit::linalg::{self, dot, mat_vec, null_space, project_onto_null_space, Q};
use crate::audit::order::{GroupPair, PairClassification};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Relation {
    pub left: GroupPair,
    pub right: GroupPair,
}

impl Relation {
    /// `+1` at `i, j`, `-1` at `i', j'`; coincident columns add up.
    pub fn row(&self, t: usize) -> Vec<i64> {
        let mut row = vec![0; t];
        row[self.left.0] += 1;
        row[self.left.1] += 1;
        row[self.right.0] -= 1;
        row[self.right.1] -= 1;
        row
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSystem {
    pub t: usize,
    /// Relations that contributed a new row to `N`.
    pub relations: Vec<Relation>,
    /// The relation matrix `N`.
    pub rows: Vec<Vec<i64>>,
    pub b: Vec<BigInt>,
    /// `N b`
    pub epsilon: Vec<BigInt>,
    pub a: Vec<BigRational>,
    pub rank: usize,
    pub null_basis: Vec<Vec<BigRational>>,
    /// `N a = 0`
    pub null_ok: bool,
    /// `b - a` is orthogonal to every null-space basis vector.
    pub residual_ok: bool,
    /// `max_i |a_i - b_i|`
    pub max_deviation: BigRational,
    pub a_strictly_decreasing: bool,
}

/// Builds `N` from `relations` (dropping zero rows and repeats up to sign) and projects
/// `b` onto its null space.
pub fn project_levels(t: usize, relations: &[Relation], b: Vec<BigInt>) -> LevelSystem {
    assert_eq!(b.len(), t);
    let mut rows: Vec<Vec<i64>> = Vec::new();
    let mut used = Vec::new();
    for rel in relations {
        let mut row = rel.row(t);
        if row.iter().all(|&x| x == 0) {
            continue;
        }
        if row.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            row.iter_mut().for_each(|x| *x = -*x);
        }
        if !rows.contains(&row) {
            rows.push(row);
            used.push(*rel);
        }
    }
    let n_q = linalg::to_rational(&rows);
    let b_q: Vec<Q> = b.iter().cloned().map(Q::from_integer).collect();
    let a = project_onto_null_space(&n_q, &b_q);
    let null_basis = null_space(&n_q, t);
    let rank = t - null_basis.len();

    let epsilon = rows
        .iter()
        .map(|r| r.iter().zip(&b).map(|(&x, bi)| BigInt::from(x) * bi).sum())
        .collect();
    let null_ok = mat_vec(&n_q, &a).iter().all(Zero::is_zero);
    let diff: Vec<Q> = b_q.iter().zip(&a).map(|(x, y)| x - y).collect();
    let residual_ok = null_basis.iter().all(|k| dot(k, &diff).is_zero());
    let max_deviation = diff
        .iter()
        .map(|d| d.abs())
        .max()
        .unwrap_or_else(Q::zero);
    let a_strictly_decreasing = a.windows(2).all(|w| w[0] > w[1]);
    LevelSystem {
        t,
        relations: used,
        rows,
        b,
        epsilon,
        a,
        rank,
        null_basis,
        null_ok,
        residual_ok,
        max_deviation,
        a_strictly_decreasing,
    }
}

/// Generating relations: every unordered pair of distinct incomparable group pairs.
pub fn generating_relations(classification: &PairClassification) -> Vec<Relation> {
    let pairs: Vec<GroupPair> = classification.pairs().collect();
    let mut out = Vec::new();
    for (n, &p) in pairs.iter().enumerate() {
        for &q in &pairs[n + 1..] {
            if classification.incomparable(p, q) {
                out.push(Relation { left: p, right: q });
            }
        }
    }
    out
}

/// Level system for a grouping, with `b_i` the smallest multiplicity in `A_i`.
pub fn solve_levels(grouping: &ColourGrouping, classification: &PairClassification) -> LevelSystem {
    let b = grouping.lo.iter().map(|&x| BigInt::from(x)).collect();
    project_levels(grouping.t(), &generating_relations(classification), b)
}

/// Sums `a_i + a_j` agree within each class and strictly decrease from class to class.
pub fn class_order_consistent(levels: &LevelSystem, classification: &PairClassification) -> bool {
    let sum = |(i, j): GroupPair| &levels.a[i] + &levels.a[j];
    let reps: Vec<Q> = classification
        .classes
        .iter()
        .map(|class| sum(class[0]))
        .collect();
    let within = classification
        .classes
        .iter()
        .zip(&reps)
        .all(|(class, r)| class.iter().all(|&p| sum(p) == *r));
    within && reps.windows(2).all(|w| w[0] > w[1])
}
