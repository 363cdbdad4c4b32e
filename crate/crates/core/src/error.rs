//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failures reported by the engine.
///
/// The variants line up with the exit codes of the command-line front end:
/// parse errors, exceeded resource budgets and broken internal invariants are
/// kept apart so callers can react to each differently.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input (words, class-function expressions, lists).
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A configurable resource limit would be exceeded.
    #[error("budget exceeded: {budget} (limit {limit})")]
    Budget { budget: String, limit: u128 },
    /// Input that is well formed but violates an operation's precondition.
    #[error("invalid input: {0}")]
    Invalid(String),
    /// A cross-check between two independent computations failed.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn budget(budget: impl Into<String>, limit: impl TryInto<u128>) -> Self {
        Error::Budget {
            budget: budget.into(),
            limit: limit.try_into().unwrap_or(u128::MAX),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }

    pub(crate) fn invariant(message: impl Into<String>) -> Self {
        Error::Invariant(message.into())
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
