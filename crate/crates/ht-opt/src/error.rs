use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OptError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// Malformed JSON; the message carries line and column.
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("{0}")]
    Core(#[from] ht_core::Error),
    #[error("plot: {0}")]
    Plot(String),
    #[error("{0}")]
    Usage(String),
}

impl OptError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        OptError::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = OptError> = std::result::Result<T, E>;
