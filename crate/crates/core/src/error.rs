use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("not a continuant pair: {0}")]
    NotAContinuantPair(String),

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for size {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("malformed graph document: {0}")]
    MalformedDocument(String),

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("factorization failed: {0}")]
    FactorizationFailed(String),

    /// A structural identity that must hold by construction did not.
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),

    /// A fiber of the word -> divisor map exceeded the divisor count of its value.
    #[error("fiber bound violated: {0}")]
    FiberBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
