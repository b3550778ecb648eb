use std::io;
use std::path::PathBuf;

/// Errors reported by loaders, vector-space construction, clustering, and
/// the pipeline driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("cannot parse {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("{path}: missing mapped column {column:?}")]
    MissingColumn { path: PathBuf, column: String },

    #[error("duplicate record id {id:?}")]
    DuplicateId { id: String },

    #[error("{path}: zero usable rows")]
    ZeroUsableRows { path: PathBuf },

    #[error("{path}:{line}: malformed line: {reason}")]
    MalformedLine {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}:{line}: duplicate key {key:?}")]
    DuplicateKey {
        path: PathBuf,
        line: usize,
        key: String,
    },

    #[error("{path}:{line}: unknown POS tag {tag:?}")]
    UnknownPosTag {
        path: PathBuf,
        line: usize,
        tag: String,
    },

    #[error("unknown metric tag {0:?}")]
    UnknownMetric(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("all TF-IDF weights are zero: every term was pruned")]
    AllWeightsZero,

    #[error("label vectors differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },

    #[error("cannot serialize: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Attach a pipeline stage name to an error.
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
