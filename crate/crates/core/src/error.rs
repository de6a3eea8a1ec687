use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the solvers.
///
/// `Dimension` and `Io`-like variants are structural (bad input shape or
/// unreadable data); the rest are numerical or domain failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singularity at z = {z}: {what}")]
    Singular { what: String, z: Complex64 },

    #[error("operator is not positive definite: leading minor of size {minor} failed")]
    NotPositive { minor: usize },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Structural errors are input-shape or I/O problems rather than
    /// numerical failures.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            Error::Dimension(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Parse(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
