use std::fs;
use std::path::{Path, PathBuf};

use forge_core::{Grid, NormalizationConstants};
use forge_procsim::MaterialParams;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::pairs::{RecordLayout, TrainingPair, RECORD_FLOATS};
use crate::DatasetError;

pub const FORMAT_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const DATA_FILE: &str = "data.bin";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

/// Run indices of each split, ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

impl Splits {
    pub fn runs(&self, split: Split) -> &[usize] {
        match split {
            Split::Train => &self.train,
            Split::Validation => &self.validation,
            Split::Test => &self.test,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub seed: u64,
    pub run_count: usize,
    pub pairs_per_run: usize,
    pub record_count: usize,
    pub grid: Grid,
    pub normalization: NormalizationConstants,
    pub material: MaterialParams,
    pub splits: Splits,
    pub layout: RecordLayout,
    pub data_file: String,
    pub data_sha256: String,
}

/// Pairs in run-major, snapshot-minor order plus their manifest.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub manifest: DatasetManifest,
    pub pairs: Vec<TrainingPair>,
}

impl Dataset {
    /// Pairs of every run in `split`, in run order.
    pub fn split(&self, split: Split) -> Vec<&TrainingPair> {
        let per_run = self.manifest.pairs_per_run;
        self.manifest
            .splits
            .runs(split)
            .iter()
            .flat_map(|&r| &self.pairs[r * per_run..(r + 1) * per_run])
            .collect()
    }

    fn encode(&self) -> Vec<u8> {
        let mut floats = Vec::with_capacity(self.pairs.len() * RECORD_FLOATS);
        for p in &self.pairs {
            p.to_record(&mut floats);
        }
        floats.iter().flat_map(|x| x.to_le_bytes()).collect()
    }

    /// Fills in the digest and record count for the current pairs.
    pub(crate) fn seal(mut self) -> Self {
        self.manifest.record_count = self.pairs.len();
        self.manifest.data_sha256 = hex(&Sha256::digest(self.encode()));
        self
    }

    /// Writes `manifest.json` and `data.bin` into `dir`, creating it.
    pub fn write(&self, dir: &Path) -> Result<(), DatasetError> {
        fs::create_dir_all(dir).map_err(io(dir))?;
        let data = dir.join(DATA_FILE);
        fs::write(&data, self.encode()).map_err(io(&data))?;
        let manifest = dir.join(MANIFEST_FILE);
        let text = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        fs::write(&manifest, text + "\n").map_err(io(&manifest))?;
        Ok(())
    }

    pub fn read(dir: &Path) -> Result<Self, DatasetError> {
        let path = dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(io(&path))?;
        let manifest: DatasetManifest =
            serde_json::from_str(&text).map_err(|source| DatasetError::Manifest {
                path: path.clone(),
                source,
            })?;
        let bad = |reason: String| DatasetError::Format {
            path: path.clone(),
            reason,
        };
        if manifest.format_version != FORMAT_VERSION {
            return Err(bad(format!(
                "format version {} (expected {FORMAT_VERSION})",
                manifest.format_version
            )));
        }
        if manifest.layout != RecordLayout::standard(&manifest.grid) {
            return Err(bad("unsupported record layout".into()));
        }
        let data_path = dir.join(&manifest.data_file);
        let bytes = fs::read(&data_path).map_err(io(&data_path))?;
        let want = manifest.record_count * RECORD_FLOATS * 4;
        if bytes.len() != want {
            return Err(DatasetError::Format {
                path: data_path,
                reason: format!("{} bytes, layout requires {want}", bytes.len()),
            });
        }
        if hex(&Sha256::digest(&bytes)) != manifest.data_sha256 {
            return Err(DatasetError::Format {
                path: data_path,
                reason: "checksum mismatch".into(),
            });
        }
        let floats: Vec<f32> = bytes
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes(b.try_into().expect("4 bytes")))
            .collect();
        let pairs = floats
            .chunks_exact(RECORD_FLOATS)
            .map(TrainingPair::from_record)
            .collect();
        Ok(Self { manifest, pairs })
    }
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError {
    let path: PathBuf = path.to_path_buf();
    move |source| DatasetError::Io { path, source }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
