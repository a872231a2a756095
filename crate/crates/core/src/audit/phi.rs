//! The pairing `phi = sum_i a_i xi_i` and the sign premises around it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhiReport {
    pub phi: BigRational,
    /// `|A_1|` copies of `xi_1/|A_1|`, then `|A_2|` copies of `xi_2/|A_2|`, ...
    pub nu: Vec<BigRational>,
    /// `sum_c a_(group of c) nu_c` equals `phi`.
    pub stretched_sum_ok: bool,
    pub a_strictly_decreasing: bool,
    pub nu_weakly_increasing: bool,
    pub nu_nonconstant: bool,
    pub nu_zero_sum: bool,
    /// Premises of the negative side all hold.
    pub expects_negative: bool,
    /// Premises of the nonnegative side hold (supplied by the caller).
    pub expects_nonnegative: bool,
}

impl PhiReport {
    pub fn negative(&self) -> bool {
        self.phi.is_negative()
    }

    pub fn nonnegative(&self) -> bool {
        !self.phi.is_negative()
    }

    /// Both sign premises hold at once, which the level argument rules out.
    pub fn contradiction(&self) -> bool {
        self.expects_negative && self.expects_nonnegative
    }
}

/// Computes `phi` from levels `a`, row sums `xi` and group sizes.
pub fn compute_phi(
    a: &[BigRational],
    xi: &[i64],
    sizes: &[usize],
    expects_nonnegative: bool,
) -> PhiReport {
    assert!(a.len() == xi.len() && xi.len() == sizes.len());
    let phi: BigRational = a
        .iter()
        .zip(xi)
        .map(|(ai, &x)| ai * BigInt::from(x))
        .sum();
    let mut nu = Vec::new();
    let mut stretched_a = Vec::new();
    for ((ai, &x), &size) in a.iter().zip(xi).zip(sizes) {
        let v = BigRational::new(BigInt::from(x), BigInt::from(size));
        for _ in 0..size {
            nu.push(v.clone());
            stretched_a.push(ai.clone());
        }
    }
    let stretched: BigRational = stretched_a.iter().zip(&nu).map(|(x, y)| x * y).sum();
    let a_strictly_decreasing = a.windows(2).all(|w| w[0] > w[1]);
    let nu_weakly_increasing = nu.windows(2).all(|w| w[0] <= w[1]);
    let nu_nonconstant = nu.windows(2).any(|w| w[0] != w[1]);
    let nu_zero_sum = nu.iter().sum::<BigRational>().is_zero();
    PhiReport {
        stretched_sum_ok: stretched == phi,
        phi,
        nu,
        a_strictly_decreasing,
        nu_weakly_increasing,
        nu_nonconstant,
        nu_zero_sum,
        expects_negative: a_strictly_decreasing
            && nu_weakly_increasing
            && nu_nonconstant
            && nu_zero_sum,
        expects_nonnegative,
    }
}
