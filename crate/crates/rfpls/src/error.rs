//! Error type shared by all modules.

use thiserror::Error;

use crate::scalar::Scalar;
use crate::wle::LogitFit;

/// Crate-wide error enum. The scalar parameter only matters for
/// [`Error::Separation`], which carries the last stable logistic iterate.
#[derive(Debug, Error)]
pub enum Error<F: Scalar> {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("point {point} outside domain [{lo}, {hi}]")]
    OutOfDomain { point: F, lo: F, hi: F },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular fit: {0}")]
    SingularFit(String),

    #[error("perfect separation detected after {n_iter} IRLS iterations")]
    Separation {
        n_iter: usize,
        /// Last iterate before divergence was detected.
        last_fit: Box<LogitFit<F>>,
    },

    #[error("degenerate column {index}: {reason}")]
    DegenerateColumn { index: usize, reason: String },

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("data error at line {line}, column {column}: {message}")]
    Data {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("model file incompatible with data: {0}")]
    Incompatible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

pub type Result<T, F> = std::result::Result<T, Error<F>>;
