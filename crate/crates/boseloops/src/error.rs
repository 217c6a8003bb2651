//! Error type shared by every module of the crate.
//!
//! Each variant maps onto one of the command-line exit codes (see
//! [`Error::exit_code`]): domain and configuration problems exit with `2`,
//! numerical convergence failures with `3`, and I/O failures with `4`.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by the numerical routines and the command-line front end.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the routine.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series, quadrature or root-finder did not reach its tolerance.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// The chemical-potential solver could not bracket the root.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// The operation is not defined for the supplied trap model.
    #[error("model error: {0}")]
    Model(String),

    /// The state sits in a regime where the requested asymptotics are undefined.
    #[error("regime error: {0}")]
    Regime(String),

    /// Points or indices do not match the trap dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch {
        /// Dimension of the trap.
        expected: usize,
        /// Dimension that was supplied.
        got: usize,
    },

    /// A δ-scaled density was requested at the origin.
    #[error("origin error: δ-scaled densities are defined for x ≠ 0 only")]
    Origin,

    /// An eigenfunction-sum oracle was truncated with a tail bound above tolerance.
    #[error("truncation warning: value {value:e} carries tail bound {tail_bound:e}")]
    TruncationWarning {
        /// The truncated sum.
        value: f64,
        /// Upper bound on the neglected remainder.
        tail_bound: f64,
    },

    /// Malformed or inconsistent run configuration.
    #[error("configuration error: {0}")]
    Config(String),

    /// Reading or writing a file failed.
    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code associated with the error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Convergence(_) | Error::Bracket(_) | Error::TruncationWarning { .. } => 3,
            Error::Io(_) => 4,
            _ => 2,
        }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
