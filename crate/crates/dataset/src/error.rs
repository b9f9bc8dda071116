use std::path::PathBuf;

use forge_core::CoreError;
use forge_procsim::SimError;

#[derive(Debug, thiserror::Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed manifest: {source}")]
    Manifest {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {reason}")]
    Format { path: PathBuf, reason: String },
    #[error("run {run}: {source}")]
    Simulation {
        run: usize,
        #[source]
        source: SimError,
    },
    #[error("expected {expected} snapshots, got {actual}")]
    SnapshotCount { expected: usize, actual: usize },
    #[error("worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
