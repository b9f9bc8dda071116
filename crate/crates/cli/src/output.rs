use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliError;

pub const STAMP_FILE: &str = "stamp.json";
pub const STAMP_VERSION: u32 = 1;

/// Creates `dir`, refusing to reuse a non-empty one without `force`.
pub fn prepare_dir(dir: &Path, force: bool) -> Result<(), CliError> {
    if dir.exists() {
        let non_empty = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?.next().is_some();
        if non_empty && !force {
            return Err(CliError::exists(dir.to_path_buf()));
        }
    }
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Refuses to overwrite `path` without `force`.
pub fn guard_file(path: &Path, force: bool) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::exists(path.to_path_buf()));
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    Ok(())
}

pub fn write(path: &Path, bytes: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write(path, text)
}

pub fn read_to_string(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Serialize)]
pub struct Formats {
    pub dataset: u32,
    pub model: u32,
    pub stamp: u32,
}

/// Reproducibility record written next to every artifact. It carries no
/// timestamp so identical runs give identical bytes.
#[derive(Debug, Serialize)]
pub struct Stamp {
    pub command: String,
    pub tool_version: String,
    pub seed: Option<u64>,
    pub config_sha256: String,
    pub formats: Formats,
    pub config: serde_json::Value,
}

impl Stamp {
    pub fn new(command: &str, seed: Option<u64>, config: &impl Serialize) -> Result<Self, CliError> {
        let config = serde_json::to_value(config)?;
        let digest = Sha256::digest(serde_json::to_vec(&config)?);
        Ok(Self {
            command: command.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed,
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
            formats: Formats {
                dataset: forge_dataset::FORMAT_VERSION,
                model: forge_surrogate::MODEL_FORMAT_VERSION,
                stamp: STAMP_VERSION,
            },
            config,
        })
    }

    pub fn write_to(&self, path: &Path) -> Result<(), CliError> {
        write_json(path, self)
    }
}

/// `<path>` with `suffix` appended to its file name.
pub fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    path.with_file_name(name)
}
