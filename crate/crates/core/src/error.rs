use std::path::PathBuf;

use thiserror::Error;

use crate::model::ContinuousState;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for {n} spins")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("instance too large for exhaustive search: n = {n} exceeds limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("relaxation did not converge after {sweeps} sweeps at T = {temperature}")]
    Diverged {
        sweeps: u64,
        temperature: f64,
        state: Box<ContinuousState>,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("malformed instance: {0}")]
    Structure(String),

    #[error("unsupported document version {found} (this build reads version {supported})")]
    Version { found: u32, supported: u32 },

    #[error(
        "integrity check failed: document hash {expected} does not match problem hash {actual}"
    )]
    Integrity { expected: String, actual: String },

    #[error("every run in the batch failed ({failed} failed, {skipped} skipped)")]
    AllRunsFailed { failed: usize, skipped: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
