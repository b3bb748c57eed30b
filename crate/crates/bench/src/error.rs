use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: syncomplete::Error,
    },
    #[error(transparent)]
    Index(#[from] syncomplete::Error),
    #[error("invalid dataset spec: {0}")]
    InvalidSpec(String),
    #[error("workload needs at least one query")]
    EmptyWorkload,
}

pub type Result<T, E = BenchError> = std::result::Result<T, E>;
