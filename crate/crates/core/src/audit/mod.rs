//! An exact certificate pipeline over a `(clique, matching)` pair:
//! grouping -> pair classification -> swap tallies -> level vector -> `phi`.
//!
//! Every check records its exact left and right sides. Checks come in three kinds:
//! unconditional identities (a failure is an implementation bug), claims whose
//! hypotheses may or may not hold for the given input (enforced only when they do),
//! and informational flags.

pub mod grouping;
pub mod levels;
pub mod linalg;
pub mod order;
pub mod phi;
mod report;
pub mod tally;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

pub use grouping::{group_colours, ColourGrouping, Threshold};
pub use levels::{class_order_consistent, project_levels, solve_levels, LevelSystem, Relation};
pub use order::{classify_pairs, PairClassification};
pub use phi::{compute_phi, PhiReport};
pub use tally::{compute_tallies, SwapTally};

use crate::error::ModelError;
use crate::model::{ColouredClique, PerfectMatching, ScoredMatching};
use crate::par::Exec;
use crate::search::is_local_minimum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Identity,
    /// A claim; `enforced` says whether its hypotheses hold for this input.
    Claim { enforced: bool },
    Info,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    pub status: Status,
    pub lhs: String,
    pub rhs: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, kind: CheckKind, ok: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Self {
            name: name.into(),
            kind,
            status: Status::from_bool(ok),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    fn eq<T: PartialEq + ToString>(name: impl Into<String>, lhs: T, rhs: T) -> Self {
        Self::new(name, CheckKind::Identity, lhs == rhs, lhs, rhs)
    }

    fn skipped(name: impl Into<String>, kind: CheckKind, reason: &str) -> Self {
        Self {
            name: name.into(),
            kind,
            status: Status::Skip,
            lhs: reason.to_string(),
            rhs: String::new(),
        }
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Row, column and total identities that hold for every matching of a balanced clique.
pub fn check_identities(tally: &SwapTally, clique: &ColouredClique) -> Vec<CheckResult> {
    let t = tally.t();
    let n = clique.n() as i64;
    let nk = clique.matching_size() as i64;
    let v = 2 * nk;
    let balanced = clique.is_balanced();
    let pairs_total = 2 * nk * (nk - 1);
    let sum = |m: &tally::Table| m.iter().flatten().sum::<i64>();
    let symmetric = |m: &tally::Table| (0..t).all(|i| (0..t).all(|j| m[i][j] == m[j][i]));

    let mut out = vec![
        CheckResult::eq("y_total", sum(&tally.y), pairs_total),
        CheckResult::eq("p_total", sum(&tally.p), pairs_total),
        CheckResult::eq("z_total", sum(&tally.z), 0),
        CheckResult::eq("xi_total", tally.xi.iter().sum::<i64>(), 0),
        CheckResult::eq("p_vec_total", tally.p_vec.iter().sum::<i64>(), nk),
        CheckResult::eq("y_symmetric", symmetric(&tally.y), true),
        CheckResult::eq("p_symmetric", symmetric(&tally.p), true),
        CheckResult::eq("z_symmetric", symmetric(&tally.z), true),
    ];
    let balance_kind = CheckKind::Identity;
    for i in 0..t {
        let size = tally.sizes[i] as i64;
        let p_i = tally.p_vec[i];
        let y_row: i64 = tally.y[i].iter().sum();
        let p_row: i64 = tally.p[i].iter().sum();
        let label = i + 1;
        if balanced {
            out.push(CheckResult::eq(
                format!("y_row.{label}"),
                y_row,
                size * n * (v - 1) - p_i,
            ));
        } else {
            out.push(CheckResult::skipped(format!("y_row.{label}"), balance_kind, "unbalanced"));
        }
        out.push(CheckResult::eq(format!("p_row.{label}"), p_row, 2 * p_i * (nk - 1)));
        if balanced {
            let lhs = ratio(tally.xi[i], size);
            // |A_i| n (2nk-1) - p_i - 2 p_i (nk-1), divided by |A_i|
            let rhs = ratio(n * (v - 1), 1) - ratio(p_i * (v - 1), size);
            out.push(CheckResult::eq(format!("xi_ratio.{label}"), lhs, rhs));
        } else {
            out.push(CheckResult::skipped(format!("xi_ratio.{label}"), balance_kind, "unbalanced"));
        }
    }
    if balanced {
        let xi_ratio: Vec<BigRational> =
            (0..t).map(|i| ratio(tally.xi[i], tally.sizes[i] as i64)).collect();
        let p_ratio: Vec<BigRational> =
            (0..t).map(|i| ratio(tally.p_vec[i], tally.sizes[i] as i64)).collect();
        let xi_up = xi_ratio.windows(2).all(|w| w[0] < w[1]);
        let p_down = p_ratio.windows(2).all(|w| w[0] > w[1]);
        out.push(CheckResult::eq("xi_increasing_iff_p_decreasing", xi_up, p_down));
    } else {
        out.push(CheckResult::skipped(
            "xi_increasing_iff_p_decreasing",
            balance_kind,
            "unbalanced",
        ));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrefixReport {
    /// `sum_{q <= h} sum_{(i,j) in B_q} z_ij` for `h = 1..s`.
    pub sums: Vec<i64>,
    /// Swaps whose source class precedes (dominates) their destination class.
    pub down_swaps: u64,
    pub enforced: bool,
}

impl PrefixReport {
    pub fn all_nonnegative(&self) -> bool {
        self.sums.iter().all(|&x| x >= 0)
    }

    /// A negative prefix or a downward swap at a verified local minimum.
    pub fn contradiction(&self) -> bool {
        self.enforced && (!self.all_nonnegative() || self.down_swaps > 0)
    }
}

/// Prefix sums of `z` over the ordered classes, and a direct scan for swaps that move
/// from an earlier class to a later one (every such swap is contradicting).
pub fn check_prefix_z(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    grouping: &ColourGrouping,
    tally: &SwapTally,
    classification: &PairClassification,
    local_minimum: bool,
) -> PrefixReport {
    let mut running = 0;
    let sums = classification
        .classes
        .iter()
        .map(|class| {
            running += class.iter().map(|&(i, j)| tally.z[i][j]).sum::<i64>();
            running
        })
        .collect();
    let group = |u: usize, v: usize| grouping.group_of(clique.colour(u, v));
    let pairs = matching.pairs();
    let mut down_swaps = 0;
    for (a, &(u, v)) in pairs.iter().enumerate() {
        for &(x0, y0) in &pairs[a + 1..] {
            let source = classification.class_of((group(u, v), group(x0, y0)));
            for (x, y) in [(x0, y0), (y0, x0)] {
                let dest = classification.class_of((group(u, x), group(v, y)));
                if source < dest {
                    down_swaps += 1;
                }
            }
        }
    }
    PrefixReport {
        sums,
        down_swaps,
        enforced: local_minimum,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditConfig {
    pub threshold: Threshold,
    pub exec: Exec,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self {
            threshold: Threshold::Exponential,
            exec: Exec::Parallel,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AuditReport {
    pub n: usize,
    pub k: usize,
    pub balanced: bool,
    pub local_minimum: bool,
    pub f: u64,
    pub g: u64,
    pub grouping: ColourGrouping,
    pub classification: PairClassification,
    pub tally: SwapTally,
    pub levels: LevelSystem,
    pub class_order_consistent: bool,
    pub prefix: PrefixReport,
    pub phi: PhiReport,
    pub checks: Vec<CheckResult>,
}

impl AuditReport {
    pub fn t(&self) -> usize {
        self.grouping.t()
    }

    pub fn s(&self) -> usize {
        self.classification.s()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Every unconditional identity passed.
    pub fn identities_pass(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| c.kind == CheckKind::Identity && c.failed())
    }

    /// Failed claims whose hypotheses hold for this input.
    pub fn contradictions(&self) -> Vec<&CheckResult> {
        self.checks
            .iter()
            .filter(|c| c.kind == (CheckKind::Claim { enforced: true }) && c.failed())
            .collect()
    }
}

/// Runs the full pipeline.
pub fn audit(
    clique: &ColouredClique,
    matching: &PerfectMatching,
    config: &AuditConfig,
) -> Result<AuditReport, ModelError> {
    let state = ScoredMatching::new(clique, matching.clone())?;
    let hist = state.histogram();
    let scores = state.scores(clique.n());
    let local_minimum = is_local_minimum(clique, &state);
    let balanced = clique.is_balanced();
    let k = clique.k();

    let grouping = group_colours(hist, config.threshold);
    let classification = classify_pairs(&grouping);
    let tally = compute_tallies(clique, matching, hist, &grouping, config.exec);
    let levels = solve_levels(&grouping, &classification);
    let consistent = class_order_consistent(&levels, &classification);
    let prefix = check_prefix_z(clique, matching, &grouping, &tally, &classification, local_minimum);
    let standard_regime = config.threshold.is_exponential() && k >= 4;
    let phi = compute_phi(
        &levels.a,
        &tally.xi,
        &tally.sizes,
        local_minimum && balanced && consistent && prefix.all_nonnegative(),
    );

    let mut checks = check_identities(&tally, clique);
    let t = grouping.t();
    let s = classification.s();

    checks.push(CheckResult::eq(
        "prefix_z_total",
        prefix.sums.last().copied().unwrap_or(0),
        0,
    ));
    for (h, &sum) in prefix.sums.iter().enumerate() {
        checks.push(CheckResult::new(
            format!("prefix_z.{}", h + 1),
            CheckKind::Claim { enforced: local_minimum },
            sum >= 0,
            sum,
            0,
        ));
    }
    checks.push(CheckResult::new(
        "no_down_swaps",
        CheckKind::Claim { enforced: local_minimum },
        prefix.down_swaps == 0,
        prefix.down_swaps,
        0,
    ));
    checks.push(CheckResult::eq("levels_null", levels.null_ok, true));
    checks.push(CheckResult::eq("levels_residual", levels.residual_ok, true));
    checks.push(CheckResult::eq(
        "classes_totally_ordered",
        classification.totally_ordered,
        true,
    ));
    checks.push(CheckResult::new(
        "class_count_bound",
        CheckKind::Claim { enforced: standard_regime },
        classification.class_count_bound,
        s,
        2 * t - 1,
    ));
    checks.push(CheckResult::new(
        "coordinate_separation",
        CheckKind::Claim { enforced: standard_regime },
        classification.coordinate_separation,
        classification.coordinate_separation,
        true,
    ));
    checks.push(CheckResult::new(
        "group_separation",
        CheckKind::Info,
        grouping.separated(),
        format!("{:?}", grouping.gaps()),
        grouping.final_threshold(),
    ));
    if t == 1 {
        // |m_i - n| <= width(A_1) since min m <= n <= max m
        let width = grouping.widths()[0];
        let bound = BigUint::from(4u32).pow((k * (k - 1) + 1) as u32);
        let max_dev = hist
            .counts()
            .iter()
            .map(|&m| m.abs_diff(clique.n() as u64))
            .max()
            .unwrap_or(0);
        checks.push(CheckResult::new(
            "single_group_width",
            CheckKind::Claim {
                enforced: config.threshold.is_exponential(),
            },
            max_dev <= width && BigUint::from(width) < bound,
            format!("{max_dev}<={width}"),
            bound,
        ));
    }
    checks.push(CheckResult::new(
        "levels_decreasing",
        CheckKind::Info,
        levels.a_strictly_decreasing,
        levels.a_strictly_decreasing,
        true,
    ));
    checks.push(CheckResult::new(
        "class_order_consistent",
        CheckKind::Info,
        consistent,
        consistent,
        true,
    ));
    checks.push(CheckResult::eq("phi_stretched", phi.stretched_sum_ok, true));
    checks.push(CheckResult::new(
        "phi_sign",
        CheckKind::Claim {
            enforced: phi.expects_nonnegative,
        },
        phi.nonnegative(),
        &phi.phi,
        0,
    ));

    Ok(AuditReport {
        n: clique.n(),
        k,
        balanced,
        local_minimum,
        f: scores.f,
        g: scores.g,
        grouping,
        classification,
        tally,
        levels,
        class_order_consistent: consistent,
        prefix,
        phi,
        checks,
    })
}
