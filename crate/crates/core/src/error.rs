use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the extraction, analysis and learning pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to decode image {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("size mismatch: expected {expected_width}x{expected_height}, got {width}x{height}")]
    SizeMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("lesion mask has no foreground pixels")]
    EmptyMask,

    #[error("non-finite sample at index {index}")]
    NonFinite { index: usize },

    #[error("signal is identically zero")]
    InvalidSignal,

    #[error("cepstrum is marked invalid")]
    InvalidCepstrum,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("stratification failed: {0}")]
    Stratification(String),

    #[error("training failed: {0}")]
    Training(String),

    #[error("schema error: missing column `{0}`")]
    MissingColumn(String),

    #[error("parse error at row {row}, column {column}: {reason}")]
    Parse {
        row: usize,
        column: usize,
        reason: String,
    },

    #[error("image ids do not match across tables: {0:?}")]
    MissingIds(Vec<String>),

    #[error("while processing `{id}`: {source}")]
    Context {
        id: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn with_id(self, id: impl Into<String>) -> Error {
        Error::Context {
            id: id.into(),
            source: Box::new(self),
        }
    }
}
