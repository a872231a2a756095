//! Exact rational Gauss-Jordan elimination, null spaces and orthogonal projection.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Q = BigRational;

pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn to_rational(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| q(x)).collect())
        .collect()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Q>>, cols: usize) -> (Vec<Vec<Q>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(found) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, found);
        let inv = rows[rank][col].recip();
        for x in rows[rank].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    (rows, pivots)
}

/// A basis of `{x : rows * x = 0}`, one vector per free column.
pub fn null_space(rows: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let (reduced, pivots) = rref(rows.to_vec(), cols);
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Q::zero(); cols];
            v[free] = Q::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                v[p] = -row[free].clone();
            }
            v
        })
        .collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn mat_vec(rows: &[Vec<Q>], x: &[Q]) -> Vec<Q> {
    rows.iter().map(|r| dot(r, x)).collect()
}

/// Solves a nonsingular square system by Gauss-Jordan elimination.
fn solve_square(matrix: Vec<Vec<Q>>, rhs: Vec<Q>) -> Vec<Q> {
    let n = rhs.len();
    let augmented = matrix
        .into_iter()
        .zip(rhs)
        .map(|(mut row, r)| {
            row.push(r);
            row
        })
        .collect();
    let (reduced, pivots) = rref(augmented, n);
    assert_eq!(pivots.len(), n, "Gram matrix of independent rows is nonsingular");
    reduced.into_iter().map(|row| row[n].clone()).collect()
}

/// Euclidean projection of `b` onto the null space of `rows`.
///
/// Takes an independent basis `R` of the row space, solves the normal equations
/// `(R R^T) lambda = R b` and returns `b - R^T lambda`.
pub fn project_onto_null_space(rows: &[Vec<Q>], b: &[Q]) -> Vec<Q> {
    let cols = b.len();
    let (basis, _) = rref(rows.to_vec(), cols);
    if basis.is_empty() {
        return b.to_vec();
    }
    let gram: Vec<Vec<Q>> = basis
        .iter()
        .map(|ri| basis.iter().map(|rj| dot(ri, rj)).collect())
        .collect();
    let lambda = solve_square(gram, mat_vec(&basis, b));
    let mut a = b.to_vec();
    for (row, l) in basis.iter().zip(&lambda) {
        for (x, r) in a.iter_mut().zip(row) {
            *x -= l * r;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_rank_and_null_space() {
        let rows = to_rational(&[vec![1, -2, 1], vec![2, -4, 2], vec![0, 1, -1]]);
        let (reduced, pivots) = rref(rows.clone(), 3);
        assert_eq!(reduced.len(), 2);
        assert_eq!(pivots, vec![0, 1]);
        let ns = null_space(&rows, 3);
        assert_eq!(ns, vec![vec![q(1), q(1), q(1)]]);
        assert!(mat_vec(&rows, &ns[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn projection_of_worked_example() {
        let rows = to_rational(&[vec![1, -2, 1]]);
        let a = project_onto_null_space(&rows, &[q(9), q(4), q(1)]);
        let third = |x: i64| Q::new(BigInt::from(x), BigInt::from(3));
        assert_eq!(a, vec![third(26), third(14), third(2)]);
    }

    #[test]
    fn empty_system_is_identity() {
        let b = vec![q(3), q(-1)];
        assert_eq!(project_onto_null_space(&[], &b), b);
        assert_eq!(null_space(&[], 2).len(), 2);
    }
}
