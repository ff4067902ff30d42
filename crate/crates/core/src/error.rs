use thiserror::Error;

/// Errors raised by state construction, measures and searches.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("spin quantum number must satisfy 2j >= 1 (got 2j = {0})")]
    InvalidSpin(u32),

    #[error("invalid spin quantum number literal {0:?}")]
    ParseSpin(String),

    #[error("coefficient vector has length {got}, expected 2j + 1 = {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("direction has zero length")]
    ZeroDirection,

    #[error("order t = {t} out of range for 2j = {two_j} (need 1 <= t < 2j)")]
    OrderOutOfRange { t: usize, two_j: u32 },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("direction list is empty")]
    EmptyDirections,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("2j = {two_j} too large for dense construction (limit {limit})")]
    TooLarge { two_j: u32, limit: u32 },

    #[error("reduced density matrix has eigenvalue {0:e} below the roundoff threshold")]
    NegativeEigenvalue(f64),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("optimizer did not converge: {0}")]
    NotConverged(String),

    #[error("point configuration has {got} points, expected 2j = {expected}")]
    PointCount { expected: usize, got: usize },

    #[error("unknown catalog entry {0:?}")]
    UnknownState(String),

    #[error("cannot parse complex literal {0:?}")]
    ParseComplex(String),
}

pub type Result<T> = std::result::Result<T, Error>;
