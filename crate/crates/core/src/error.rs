use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A model or kernel argument is outside its domain. `key` names the offending input.
    #[error("invalid {key}: {message}")]
    InvalidParameter { key: &'static str, message: String },

    /// A state transition that would break `l <= n`.
    #[error("constraint violated: {0}")]
    Constraint(String),

    /// Explicit enumeration requested beyond its supported size.
    #[error("size limit exceeded: {what} = {value} (max {max})")]
    SizeLimit {
        what: &'static str,
        value: u64,
        max: u64,
    },

    #[error("no hump in trajectory")]
    NoHump,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(key: &'static str, message: impl Into<String>) -> Self {
        Error::InvalidParameter {
            key,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
