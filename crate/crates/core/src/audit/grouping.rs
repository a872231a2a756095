//! Grouping colours with similar multiplicities into contiguous blocks `A_1..A_t`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::model::{ColourHistogram, Colour};

/// Merge threshold as a function of the number of merges `l` made so far.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Threshold {
    /// `4^((l+1)k)`
    #[default]
    Exponential,
    /// A fixed gap `C`.
    Constant(u64),
    /// `base^((l+1)k)`
    Power(u64),
}

impl Threshold {
    pub fn at(&self, merges: usize, k: usize) -> BigUint {
        let exponent = ((merges + 1) * k) as u32;
        match *self {
            Threshold::Exponential => BigUint::from(4u32).pow(exponent),
            Threshold::Constant(c) => BigUint::from(c),
            Threshold::Power(base) => BigUint::from(base).pow(exponent),
        }
    }

    pub fn is_exponential(&self) -> bool {
        *self == Threshold::Exponential
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Exponential => f.write_str("exp"),
            Threshold::Constant(c) => write!(f, "const:{c}"),
            Threshold::Power(b) => write!(f, "pow:{b}"),
        }
    }
}

impl FromStr for Threshold {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || format!("invalid threshold {s:?} (expected exp, const:<C> or pow:<B>)");
        if s == "exp" || s == "paper" {
            return Ok(Threshold::Exponential);
        }
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let value: u64 = value.parse().map_err(|_| bad())?;
        match kind {
            "const" => Ok(Threshold::Constant(value)),
            "pow" => Ok(Threshold::Power(value)),
            _ => Err(bad()),
        }
    }
}

/// One merge of adjacent groups `index` and `index + 1` (0-based, at the time of merging).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Merge {
    pub index: usize,
    pub gap: u64,
    pub merges_before: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColourGrouping {
    pub k: usize,
    pub threshold: Threshold,
    /// Colours sorted by multiplicity, largest first; ties by colour index.
    pub order: Vec<Colour>,
    /// Groups in sorted order; each is a contiguous run of `order`.
    pub groups: Vec<Vec<Colour>>,
    /// Smallest and largest multiplicity in each group.
    pub lo: Vec<u64>,
    pub hi: Vec<u64>,
    pub merges: Vec<Merge>,
    alpha: Vec<usize>,
}

impl ColourGrouping {
    pub fn t(&self) -> usize {
        self.groups.len()
    }

    /// Number of merges performed, `k - t`.
    pub fn ell(&self) -> usize {
        self.k - self.t()
    }

    /// 0-based group containing colour `c`.
    #[inline]
    pub fn group_of(&self, c: Colour) -> usize {
        self.alpha[c as usize - 1]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn widths(&self) -> Vec<u64> {
        self.lo.iter().zip(&self.hi).map(|(l, h)| h - l).collect()
    }

    /// Gaps between consecutive groups, `d(A_i, A_{i+1})`.
    pub fn gaps(&self) -> Vec<u64> {
        (1..self.t()).map(|i| self.lo[i - 1] - self.hi[i]).collect()
    }

    /// Threshold in force when the merging stopped.
    pub fn final_threshold(&self) -> BigUint {
        self.threshold.at(self.ell(), self.k)
    }

    /// Every pair of distinct groups is further apart than the final threshold.
    pub fn separated(&self) -> bool {
        let theta = self.final_threshold();
        self.gaps().iter().all(|&g| BigUint::from(g) > theta)
    }
}

/// Starting from singletons in sorted order, repeatedly merges the lowest-indexed adjacent
/// pair whose gap is at most the current threshold, until one group is left or no
/// pair qualifies.
pub fn group_colours(hist: &ColourHistogram, threshold: Threshold) -> ColourGrouping {
    let k = hist.k();
    let mut order: Vec<Colour> = (1..=k as Colour).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(hist.count(c)), c));
    let mut groups: Vec<Vec<Colour>> = order.iter().map(|&c| vec![c]).collect();
    let mut lo: Vec<u64> = order.iter().map(|&c| hist.count(c)).collect();
    let mut hi = lo.clone();
    let mut merges = Vec::new();
    while groups.len() > 1 {
        let done = k - groups.len();
        let theta = threshold.at(done, k);
        let Some(i) =
            (0..groups.len() - 1).find(|&i| BigUint::from(lo[i] - hi[i + 1]) <= theta)
        else {
            break;
        };
        merges.push(Merge {
            index: i,
            gap: lo[i] - hi[i + 1],
            merges_before: done,
        });
        let tail = groups.remove(i + 1);
        groups[i].extend(tail);
        lo[i] = lo.remove(i + 1);
        hi.remove(i + 1);
    }
    let mut alpha = vec![0; k];
    for (g, members) in groups.iter().enumerate() {
        for &c in members {
            alpha[c as usize - 1] = g;
        }
    }
    ColourGrouping {
        k,
        threshold,
        order,
        groups,
        lo,
        hi,
        merges,
        alpha,
    }
}
