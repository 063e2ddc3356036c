//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// `find_root` was handed a bracket on which f does not change sign.
    #[error("no sign change on bracket [{lo}, {hi}] (f = {f_lo} .. {f_hi})")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    /// An iterative routine ran out of iterations before meeting its tolerance.
    #[error("{what} did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { what: &'static str, iterations: usize, residual: f64 },

    /// A distribution (or its JSON form) violates a construction invariant.
    #[error("invalid distribution: {0}")]
    Validation(String),

    /// The distribution document is not valid JSON for the expected schema.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    /// Exact convolution would exceed the configured atom-count limit.
    #[error("convolution support would exceed the limit of {limit} atoms (needs {needed})")]
    SizeLimit { limit: usize, needed: usize },

    /// Total variance is zero, so nothing can be standardized.
    #[error("degenerate variance: B_n = 0")]
    DegenerateVariance,

    /// The requested closed form exists only for the canonical weight functions.
    #[error("closed forms are only available for the canonical weight functions")]
    UnsupportedWeight,

    /// A custom weight failed its monotonicity spot-check.
    #[error("weight function rejected: {0}")]
    InvalidWeight(String),

    /// epsilon = infinity paired with a weight whose tail ratio is unknown.
    #[error("epsilon = inf is not supported for custom weight functions")]
    InfiniteEpsilonUnsupported,

    /// An optimized objective returned a non-finite value.
    #[error("objective returned a non-finite value at p = {p}")]
    NonFiniteObjective { p: f64 },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain { what, detail: detail.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
