use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{function}: argument {arg} outside domain ({reason})")]
    Domain {
        function: &'static str,
        arg: f64,
        reason: &'static str,
    },

    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error(
        "quadrature did not reach tolerance: estimate {estimate:e}, error {error:e} after {intervals} intervals"
    )]
    Quadrature {
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("scale matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("dispersion level {a} below noise floor {floor}")]
    BelowNoiseFloor { a: f64, floor: f64 },

    #[error("zero drift: use the closed-form Cauchy reduction")]
    ZeroDrift,

    #[error("density is not normalized: integral {integral}")]
    NotNormalized { integral: f64 },

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("empty input: {0}")]
    Empty(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
