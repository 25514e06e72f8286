//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by graph ingestion, numerical kernels and the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// A record in an edge-list file could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A label was encountered that is not part of the declared node census.
    #[error("unknown node label {label:?} at line {line}")]
    UnknownLabel { label: String, line: usize },

    /// An argument violated a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Matrix shapes are incompatible for the requested operation.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A structurally symmetric matrix was required.
    #[error("matrix is not symmetric")]
    NotSymmetric,

    /// An iterative solver failed to reach the requested tolerance.
    #[error("iteration did not converge (achieved residual {residual:e})")]
    Convergence { residual: f64 },

    /// No causal fit could be found for a time-series model.
    #[error("no causal fit found for the requested model orders")]
    NonCausalFit,

    /// The input series is too short for the requested model.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A metric is undefined for the given inputs (e.g. single-class AUC).
    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    /// The requested computation exceeds a configured size cap.
    #[error("infeasible problem size: {0}")]
    InfeasibleSize(String),

    /// A latent-position matrix produced a link probability outside [0, 1].
    #[error("invalid latent position: probability {value} at ({row}, {col})")]
    InvalidLatentPosition { row: usize, col: usize, value: f64 },

    /// An experiment configuration is invalid.
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
