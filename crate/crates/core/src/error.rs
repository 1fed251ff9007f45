use thiserror::Error;

/// Errors raised by the library.
///
/// `IllConditioned` and `NonConvergence` are the numerical failures: both mean
/// the current working precision could not make a decision safely, and
/// retrying with a larger `precision_bits` is the expected remedy.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    Singular,

    #[error("ill-conditioned decision: {0}")]
    IllConditioned(String),

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("root finder did not converge: {0}")]
    NonConvergence(String),

    #[error("blocks are not in canonical order: {0}")]
    BadOrdering(String),

    #[error("matrix is not a {k}-th power")]
    NotAPower { k: u32 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("out of regime: {0}")]
    OutOfRegime(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { message: String, offset: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
