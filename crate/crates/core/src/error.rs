use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A coordinate or parameter lies outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("need at least {required} samples, got {actual}")]
    TooFewSamples { required: usize, actual: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    /// Malformed input file. `line` is 1-based and counts the header.
    #[error("{}:{line}: {message}", path.display())]
    Format {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("unsupported session version {found} (this build reads version {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn require_len(actual: usize, required: usize) -> Result<()> {
    if actual < required {
        Err(Error::TooFewSamples { required, actual })
    } else {
        Ok(())
    }
}

pub(crate) fn require_same_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        Err(Error::LengthMismatch { left, right })
    } else {
        Ok(())
    }
}
