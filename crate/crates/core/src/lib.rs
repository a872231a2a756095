//! Colour-balanced perfect matchings in edge-coloured complete graphs.
//!
//! An instance is `K_{2nk}` with every edge coloured from `1..=k`, each colour used
//! equally often. The library finds perfect matchings whose colour counts stay close to
//! `n` by swap descent on `g(M) = sum m_i^2`, verifies small cases exhaustively, and runs
//! an exact audit (colour grouping, swap tallies, level vectors) on any matching.
//!
//! ```
//! use balmatch::{descend, random_balanced, random_matching, DescentConfig, ScoredMatching};
//!
//! let clique = random_balanced(2, 3, 7).unwrap();
//! let start = random_matching(&clique, 1);
//! let (m, _trace) = descend(&clique, start, &DescentConfig::default()).unwrap();
//! let f = ScoredMatching::new(&clique, m).unwrap().scores(2).f;
//! assert!(f * f <= 2 * 2 * 3 * 3);
//! ```

pub mod audit;
pub mod bounds;
pub mod error;
pub mod experiment;
pub mod generate;
pub mod io;
pub mod model;
pub mod oracle;
pub mod par;
pub mod search;

pub use audit::{audit, AuditConfig, AuditReport, Threshold};
pub use bounds::{check_bounds, BoundCheck};
pub use error::{IoError, ModelError, OracleError, ParseError};
pub use generate::{derive_seed, random_balanced, random_matching};
pub use model::{
    compute_histogram, f_score, g_score, ColourHistogram, ColouredClique, PerfectMatching,
    Reconnection, ScoredMatching, Scores, SwapMove,
};
pub use oracle::{exact_minima, k6_search, K6Mode, OracleConfig, OracleResult};
pub use par::Exec;
pub use search::{descend, is_local_minimum, DescentConfig, DescentTrace, PivotRule};
