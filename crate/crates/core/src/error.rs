use thiserror::Error;

/// Errors raised by the exact engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("empty point set")]
    EmptyPointSet,

    /// An infinitesimal product or quotient needed a coefficient beyond the
    /// configured truncation degree.
    #[error("infinitesimal degree overflow (max degree {max_degree})")]
    DegreeOverflow { max_degree: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The certified search hit its iteration cap without a verified answer.
    #[error("undecided: {what} (after {iterations} iterations)")]
    Undecided { what: String, iterations: usize },

    #[error("unbounded: {0}")]
    Unbounded(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// A self-check failed. Always a bug in this crate, never a user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub fn is_undecided(&self) -> bool {
        matches!(self, Error::Undecided { .. })
    }
}
