//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Bad configuration: unknown layout id, impossible population size,
    /// missing checkpoint, inconsistent dimensions between artifacts.
    #[error("configuration error: {0}")]
    Config(String),

    /// Malformed file contents (layout files, trajectory logs, checkpoints).
    #[error("format error: {0}")]
    Format(String),

    /// Training diverged or produced non-finite values.
    #[error("training error: {0}")]
    Training(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
