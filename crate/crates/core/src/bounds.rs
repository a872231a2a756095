//! Exact checks of the averaging bounds that every swap-local minimum of `g` satisfies
//! on a balanced colouring.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::model::{average_weights, ColouredClique, ScoredMatching};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    /// `w(M)/|M| - w(E\M)/|E\M| <= 2`; `None` when `nk < 2`.
    pub average_gap: Option<bool>,
    /// `(2nk-1)(g - n^2 k) <= 4nk(nk-1)`
    pub g_bound: bool,
    /// `f^2 <= 2nk^2`, i.e. `f <= k sqrt(2n)`
    pub f_bound: bool,
    /// `f <= 4^(k^2)`
    pub f_trivial: bool,
    /// `f^2 <= k (g - n^2 k)`
    pub cauchy_schwarz: bool,
}

impl BoundCheck {
    pub fn all_hold(&self) -> bool {
        self.average_gap.unwrap_or(true)
            && self.g_bound
            && self.f_bound
            && self.f_trivial
            && self.cauchy_schwarz
    }
}

/// `w(M)/|M| - w(E\M)/|E\M|`, or `None` when `nk < 2`.
pub fn average_gap(clique: &ColouredClique, state: &ScoredMatching) -> Option<BigRational> {
    average_weights(clique, state.matching())
        .ok()
        .map(|(inside, outside)| inside - outside)
}

pub fn check_bounds(clique: &ColouredClique, state: &ScoredMatching) -> BoundCheck {
    let n = clique.n() as u128;
    let k = clique.k() as u128;
    let nk = n * k;
    let s = state.scores(clique.n());
    let (f, g) = (s.f as u128, s.g as u128);
    // g >= n^2 k always, since sum x_i = 0 makes sum m_i^2 = n^2 k + sum x_i^2
    let excess = g - n * n * k;
    let two = BigRational::from_integer(BigInt::from(2));
    BoundCheck {
        average_gap: average_gap(clique, state).map(|gap| gap <= two),
        g_bound: (2 * nk - 1) * excess <= 4 * nk * (nk - 1),
        f_bound: f * f <= 2 * n * k * k,
        f_trivial: BigUint::from(f) <= BigUint::from(4u32).pow((k * k) as u32),
        cauchy_schwarz: f * f <= k * excess,
    }
}
