use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit reports. All variants describe bad input data
/// except [`Error::Io`], which wraps filesystem failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid UTF-8 at line {line}")]
    InvalidUtf8 { line: usize },
    #[error("malformed JSON at line {line}: {message}")]
    MalformedJson { line: usize, message: String },
    #[error("missing required field \"{field}\" at line {line}")]
    MissingField { line: usize, field: &'static str },
    #[error("degenerate record at line {line}: empty {side} after tokenization")]
    DegenerateRecord { line: usize, side: &'static str },
    #[error("degenerate sample {id}: empty {side} after tokenization")]
    DegenerateSample { id: String, side: &'static str },
    #[error("empty dataset: {0}")]
    EmptyDataset(String),
    #[error("degenerate corpus: zero document–summary overlap")]
    ZeroOverlap,
    #[error("{what} out of range: {detail}")]
    OutOfRange { what: &'static str, detail: String },
    #[error("singular fit: {0}")]
    SingularFit(String),
    #[error("invalid record {index}: {message}")]
    InvalidRecord { index: usize, message: String },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn out_of_range(what: &'static str, detail: impl Into<String>) -> Self {
        Error::OutOfRange {
            what,
            detail: detail.into(),
        }
    }
}
