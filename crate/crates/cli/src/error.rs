use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 2;
pub const EXIT_UNRESOLVED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{message} (line {line}, column {column})")]
    Parse { line: usize, column: usize, message: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] waring_core::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::DimensionMismatch(_) => "dimension_mismatch",
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                waring_core::Error::Singular => "singular",
                waring_core::Error::IllConditioned(_) => "ill_conditioned",
                waring_core::Error::IndexOutOfRange { .. } => "index_out_of_range",
                waring_core::Error::DimensionMismatch(_) => "dimension_mismatch",
                waring_core::Error::NonConvergence(_) => "non_convergence",
                waring_core::Error::BadOrdering(_) => "bad_ordering",
                waring_core::Error::NotAPower { .. } => "not_a_power",
                waring_core::Error::PreconditionViolated(_) => "precondition_violated",
                waring_core::Error::OutOfRegime(_) => "out_of_regime",
                waring_core::Error::InvariantViolation(_) => "invariant_violation",
                waring_core::Error::Parse { .. } => "parse",
            },
        }
    }

    /// Bad input of any kind is a usage error; numerical failures and broken
    /// invariants are internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(
                waring_core::Error::InvariantViolation(_)
                | waring_core::Error::IllConditioned(_)
                | waring_core::Error::NonConvergence(_),
            ) => EXIT_INTERNAL,
            _ => EXIT_USAGE,
        }
    }
}
