use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text; `line` is 1-based.
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("node {node} is out of range for a network of {n_nodes} nodes")]
    NodeOutOfRange { node: usize, n_nodes: usize },

    #[error("partitions cover different node sets ({left} vs {right} nodes)")]
    PartitionMismatch { left: usize, right: usize },

    #[error("invalid similarity matrix: {0}")]
    InvalidSimilarity(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(source_name: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            source_name: source_name.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the content of user-supplied data rather
    /// than by how the program was invoked.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::NodeOutOfRange { .. }
                | Error::PartitionMismatch { .. }
                | Error::InvalidSimilarity(_)
                | Error::Io { .. }
                | Error::Json(_)
        )
    }
}
