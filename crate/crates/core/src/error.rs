use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// `floor(level * x_j)` exceeds the sample size, so the order statistic
    /// `X_{n - floor(level * x_j) + 1, n}` does not exist.
    #[error("threshold index {index} exceeds sample size {n} (level {level}, coordinate {coordinate})")]
    ThresholdOutOfRange {
        level: f64,
        coordinate: usize,
        index: usize,
        n: usize,
    },

    #[error("degenerate estimate: {0}")]
    Degenerate(&'static str),

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: plotting failed: {message}")]
    Plot { path: PathBuf, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
