use thiserror::Error;

/// Errors raised while building or manipulating instances and matchings.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("n and k must both be positive (got n={n}, k={k})")]
    NonPositiveParameters { n: usize, k: usize },
    #[error("expected {expected} edge colours for K_{vertices}, got {found}")]
    ColourCount {
        vertices: usize,
        expected: usize,
        found: usize,
    },
    #[error("edge {edge} has colour {colour}, outside 1..={k}")]
    ColourOutOfRange { edge: usize, colour: u32, k: usize },
    #[error("matching covers {found} vertices but the clique has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("vertex {vertex} is out of range for {vertices} vertices")]
    VertexOutOfRange { vertex: usize, vertices: usize },
    #[error("vertex {0} appears in more than one pair")]
    RepeatedVertex(usize),
    #[error("vertex {0} is not covered by the matching")]
    MissingVertex(usize),
    #[error("swap needs two distinct matching pairs in 0..{pairs} (got {a} and {b})")]
    InvalidMove { a: usize, b: usize, pairs: usize },
    #[error("average weights need at least two matching edges (nk={0})")]
    DegenerateInstance(usize),
}

/// Errors from the exhaustive oracle.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("refusing to enumerate perfect matchings on {vertices} vertices: the limit is {cap} (raise the cap explicitly to go further)")]
    CapExceeded { vertices: usize, cap: usize },
    #[error("perfect matchings need an even number of vertices, got {0}")]
    OddVertexCount(usize),
}

/// A parse or validation failure in one of the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, token {position}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub position: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, position: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            position,
            message: message.into(),
        }
    }
}

/// Anything that can go wrong reading or writing instance files.
#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Invalid(#[from] ModelError),
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
}
