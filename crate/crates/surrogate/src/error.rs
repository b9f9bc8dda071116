use std::path::PathBuf;

use forge_neuro::NeuroError;

#[derive(Debug, thiserror::Error)]
pub enum SurrogateError {
    #[error(transparent)]
    Network(#[from] NeuroError),
    #[error("{what}: expected {expected} values, got {actual}")]
    InputLength {
        what: &'static str,
        expected: usize,
        actual: usize,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: unsupported or unreadable model header (format version {found:?}, expected {expected})")]
    Version {
        path: PathBuf,
        found: Option<u64>,
        expected: u32,
    },
    #[error("{path}: parameter blob truncated: {actual} of {expected} bytes")]
    Truncated {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },
    #[error("{path}: header declares {declared} parameters but the architecture has {actual}")]
    LengthMismatch {
        path: PathBuf,
        declared: usize,
        actual: usize,
    },
    #[error("{path}: {actual} bytes after the header, expected {expected}")]
    TrailingBytes {
        path: PathBuf,
        expected: usize,
        actual: usize,
    },
    #[error("{0}")]
    Architecture(String),
    #[error("empty evaluation set")]
    EmptySplit,
}
