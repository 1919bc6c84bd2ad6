//! Error types shared across the library.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("{context}: argument {value} violates `{requirement}`")]
    Domain {
        context: &'static str,
        value: f64,
        requirement: &'static str,
    },

    /// The gamma function was evaluated at one of its poles.
    #[error("gamma: pole at non-positive integer argument {0}")]
    Pole(f64),

    /// The result exceeds the double-precision range.
    #[error("{context}: result overflows f64 for argument {value}")]
    Overflow { context: &'static str, value: f64 },

    /// An iterative evaluation failed to meet its tolerance.
    #[error("{context}: no convergence to {tolerance:e} within {limit} steps")]
    NoConvergence {
        context: &'static str,
        tolerance: f64,
        limit: usize,
    },

    /// Structurally invalid input: bad grids, malformed matrices,
    /// inconsistent configuration.
    #[error("{context}: {reason}")]
    Invalid {
        context: &'static str,
        reason: String,
    },
}

impl Error {
    pub(crate) fn invalid(context: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            context,
            reason: reason.into(),
        }
    }
}
