use thiserror::Error;

/// Errors raised while building sources or evaluating regions and bounds.
///
/// Node indices carried by variants are 0-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: table has {actual} entries but alphabet sizes imply {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("alphabet sizes must be positive and non-empty")]
    InvalidAlphabet,

    #[error("table has {cells} cells, above the cap of {cap}")]
    SizeCap { cells: usize, cap: usize },

    #[error("negative probability {value} at entry {index}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("non-finite probability at entry {index}")]
    NonFinite { index: usize },

    #[error("probabilities sum to {sum}, not 1 within {tol:e}")]
    NotNormalized { sum: f64, tol: f64 },

    #[error("invalid Markov chain specification: {0}")]
    InvalidMarkovSpec(String),

    #[error("index {index} out of range for {n} variables")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("index {0} appears more than once")]
    DuplicateIndex(usize),

    #[error("subset must not be empty")]
    EmptySubset,

    #[error("target and conditioning sets overlap at index {0}")]
    OverlappingSets(usize),

    #[error("ordering is not a permutation of {n} indices")]
    NotPermutation { n: usize },

    #[error("{n} sources exceed the region enumeration cap of {cap}")]
    EnumerationCap { n: usize, cap: usize },

    #[error("rate vector has {actual} entries, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("rate {value} at index {index} is negative or not finite")]
    InvalidRate { index: usize, value: f64 },

    #[error("operation requires exactly 2 sources, got {0}")]
    NotTwoNodes(usize),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid correlation graph: {0}")]
    InvalidGraph(String),

    #[error("unknown metric `{0}` (expected mutual_information or normalized_mi)")]
    UnknownMetric(String),

    #[error("threshold must be non-negative, got {0}")]
    InvalidThreshold(f64),

    #[error("pairwise metric needs two distinct nodes, got {0} twice")]
    SameNode(usize),

    #[error("graph has {graph} nodes but source has {source_n}")]
    NodeCountMismatch { graph: usize, source_n: usize },

    #[error("mixed bound needs k >= 2, r >= 0 and k + r + 1 < N; got k = {k}, r = {r}, N = {n}")]
    InvalidMixedParams { k: usize, r: usize, n: usize },

    #[error("no observations")]
    EmptySamples,

    #[error("row {row}, column {column}: symbol {symbol} outside alphabet of size {size}")]
    SymbolOutOfRange {
        row: usize,
        column: usize,
        symbol: usize,
        size: usize,
    },

    #[error("row {row} has {actual} symbols, expected {expected}")]
    RowWidth {
        row: usize,
        expected: usize,
        actual: usize,
    },

    #[error("smoothing must be non-negative and finite, got {0}")]
    InvalidSmoothing(f64),

    #[error("at least one bound configuration is required")]
    NoConfigs,

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
