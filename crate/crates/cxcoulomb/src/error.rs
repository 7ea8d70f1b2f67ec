use std::fmt;

use cxcoulomb_core::Error;

/// Failure of a command, carrying its process exit code.
#[derive(Debug)]
pub enum RunError {
    /// Rejected input: bad flags, invalid quantum numbers, broken regime.
    Invalid(String),
    /// A check or numerical solve failed.
    Failed(String),
    Io(std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Invalid(_) => 2,
            RunError::Failed(_) | RunError::Io(_) => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Invalid(msg) => write!(f, "invalid input: {msg}"),
            RunError::Failed(msg) => write!(f, "failed: {msg}"),
            RunError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl std::error::Error for RunError {}

impl From<std::io::Error> for RunError {
    fn from(err: std::io::Error) -> Self {
        RunError::Io(err)
    }
}

impl From<csv::Error> for RunError {
    fn from(err: csv::Error) -> Self {
        RunError::Io(err.into())
    }
}

impl From<serde_json::Error> for RunError {
    fn from(err: serde_json::Error) -> Self {
        RunError::Io(err.into())
    }
}

impl From<Error> for RunError {
    fn from(err: Error) -> Self {
        match err {
            Error::NotConverged { .. }
            | Error::LostTracking { .. }
            | Error::GridTooCoarse { .. }
            | Error::InconsistentLevel { .. }
            | Error::SingularTransform { .. } => RunError::Failed(err.to_string()),
            _ => RunError::Invalid(err.to_string()),
        }
    }
}
