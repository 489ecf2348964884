use thiserror::Error;

use crate::dsl::ParseError;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown event '{0}'")]
    UnknownEvent(String),

    #[error("invalid event table: {0}")]
    EventTable(String),

    #[error("definition of '{0}' refers to itself")]
    Cycle(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("no feasible start found after {starts} restarts; feasibility unknown")]
    UnknownFeasibility { starts: usize },

    #[error("{0}")]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
