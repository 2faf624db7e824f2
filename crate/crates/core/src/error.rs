use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid radar configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: String, actual: String },

    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },

    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),

    #[error("truncated payload: {0}")]
    TruncatedPayload(String),

    #[error("dimension overflow: {0}")]
    DimensionOverflow(String),

    #[error("scatterer out of range: {0}")]
    ScattererOutOfRange(String),

    #[error("motion exceeds unambiguous velocity: {speed:.3} m/s >= {limit:.3} m/s")]
    MotionExceedsVelocity { speed: f64, limit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("training diverged at epoch {epoch} (loss = {loss})")]
    Divergence { epoch: usize, loss: f64 },

    #[error("negative input at index {0}")]
    NegativeInput(usize),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn mismatch(expected: impl std::fmt::Debug, actual: impl std::fmt::Debug) -> Error {
    Error::DimensionMismatch {
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    }
}
