use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller passed an argument outside the valid domain (bad id, bad config).
    #[error("usage error: {0}")]
    Usage(String),

    /// Input parsed but violates a data invariant (non-positive weight, unknown node).
    #[error("validation error: {0}")]
    Validation(String),

    /// The walker's current node has no incident edges.
    #[error("dead end at node {0}")]
    DeadEnd(crate::graph::NodeId),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by the caller's arguments rather than by data or I/O.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}
