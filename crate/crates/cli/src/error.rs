use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

/// Every failure surfaces as `kind` plus a message and optional details, and
/// is printed to stderr as one JSON object.
#[derive(Debug, Error, Serialize)]
#[error("{kind}: {message}")]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub details: Vec<String>,
}

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self { kind, message: message.into(), details: Vec::new() }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::new("io", format!("{}: {e}", path.display()))
    }

    pub fn exists(path: PathBuf) -> Self {
        Self::new("output_exists", format!("{} exists; pass --force to overwrite", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("error serializes")
    }
}

impl From<forge_procsim::SimError> for CliError {
    fn from(e: forge_procsim::SimError) -> Self {
        match e {
            forge_procsim::SimError::InvalidStrategy(v) => CliError {
                kind: "bounds",
                message: format!("{} control(s) outside the admissible range", v.len()),
                details: v.iter().map(|b| b.to_string()).collect(),
            },
            other => Self::new("simulation", other.to_string()),
        }
    }
}

impl From<forge_mpc::MpcError> for CliError {
    fn from(e: forge_mpc::MpcError) -> Self {
        match e {
            forge_mpc::MpcError::Bounds(v) => CliError {
                kind: "bounds",
                message: format!("{} scenario value(s) outside the admissible range", v.len()),
                details: v.iter().map(|b| b.to_string()).collect(),
            },
            other => Self::new("mpc", other.to_string()),
        }
    }
}

macro_rules! kind {
    ($t:ty, $k:literal) => {
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                Self::new($k, e.to_string())
            }
        }
    };
}

kind!(forge_core::CoreError, "core");
kind!(forge_dataset::DatasetError, "dataset");
kind!(forge_neuro::NeuroError, "network");
kind!(forge_surrogate::SurrogateError, "model");
kind!(serde_json::Error, "json");
kind!(toml::de::Error, "toml");
