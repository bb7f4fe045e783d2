//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building graphs, transforms,
/// distributions, or filters.
#[derive(Debug, Error)]
pub enum Error {
    /// A weight matrix violated the undirected-graph invariants
    /// (symmetry, zero diagonal, non-negative weights, at least one vertex).
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    /// Vector/matrix sizes do not agree.
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A 1-based vertex or spectral index fell outside `1..=max`.
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    /// Graph chirps require a nonzero rate and fractional powers a nonzero
    /// exponent.
    #[error("a must be nonzero")]
    ZeroOrder,

    /// A parameter failed its precondition (reported verbatim).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An eigendecomposition or spectral factorization did not reach the
    /// required accuracy. Reported, never silently degraded.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Text input (edge lists, CSV) could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
