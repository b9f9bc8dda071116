use std::fs;
use std::path::Path;

use forge_core::NormalizationConstants;
use forge_neuro::{Float, Trainable};
use serde::{Deserialize, Serialize};

use crate::{Architecture, InitDescriptor, SurrogateError, SurrogateModel};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// JSON header preceding the parameter blob.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelHeader {
    pub format_version: u32,
    pub architecture: Architecture,
    pub init: InitDescriptor,
    pub training_seed: Option<u64>,
    pub param_count: usize,
    pub dtype: String,
    /// Constants the training targets were normalized with.
    pub normalization: NormalizationConstants,
}

/// Serializes `model` as a 4-byte little-endian header length, the JSON
/// header and the parameters as little-endian `f32`.
pub fn encode_model<T: Float>(model: &SurrogateModel<T>, normalization: &NormalizationConstants) -> Vec<u8> {
    let header = ModelHeader {
        format_version: MODEL_FORMAT_VERSION,
        architecture: model.architecture.clone(),
        init: model.init.clone(),
        training_seed: model.training_seed,
        param_count: model.param_count(),
        dtype: "f32le".into(),
        normalization: *normalization,
    };
    let json = serde_json::to_vec(&header).expect("header serializes");
    let mut out = Vec::with_capacity(4 + json.len() + 4 * header.param_count);
    out.extend_from_slice(&(json.len() as u32).to_le_bytes());
    out.extend_from_slice(&json);
    for p in model.params() {
        for &x in p {
            out.extend_from_slice(&(x.to_f64_lossy() as f32).to_le_bytes());
        }
    }
    out
}

pub fn save_model<T: Float>(
    model: &SurrogateModel<T>,
    normalization: &NormalizationConstants,
    path: &Path,
) -> Result<(), SurrogateError> {
    fs::write(path, encode_model(model, normalization)).map_err(|source| SurrogateError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a model file; never returns a partially loaded model.
pub fn load_model<T: Float>(
    path: &Path,
) -> Result<(SurrogateModel<T>, ModelHeader), SurrogateError> {
    let bytes = fs::read(path).map_err(|source| SurrogateError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    decode_model(&bytes, path)
}

pub fn decode_model<T: Float>(
    bytes: &[u8],
    path: &Path,
) -> Result<(SurrogateModel<T>, ModelHeader), SurrogateError> {
    let version_error = |found| SurrogateError::Version {
        path: path.to_path_buf(),
        found,
        expected: MODEL_FORMAT_VERSION,
    };
    let len = bytes
        .get(..4)
        .map(|b| u32::from_le_bytes(b.try_into().expect("4 bytes")) as usize)
        .ok_or_else(|| version_error(None))?;
    let json = bytes.get(4..4 + len).ok_or_else(|| version_error(None))?;
    let value: serde_json::Value = serde_json::from_slice(json).map_err(|_| version_error(None))?;
    let found = value.get("format_version").and_then(|v| v.as_u64());
    if found != Some(MODEL_FORMAT_VERSION as u64) {
        return Err(version_error(found));
    }
    let header: ModelHeader = serde_json::from_value(value).map_err(|_| version_error(found))?;

    let mut model = SurrogateModel::<T>::new(header.architecture.clone(), header.init.seed)?;
    let actual = model.param_count();
    if header.param_count != actual {
        return Err(SurrogateError::LengthMismatch {
            path: path.to_path_buf(),
            declared: header.param_count,
            actual,
        });
    }
    let blob = &bytes[4 + len..];
    let expected = 4 * actual;
    if blob.len() < expected {
        return Err(SurrogateError::Truncated {
            path: path.to_path_buf(),
            expected,
            actual: blob.len(),
        });
    }
    if blob.len() > expected {
        return Err(SurrogateError::TrailingBytes {
            path: path.to_path_buf(),
            expected,
            actual: blob.len(),
        });
    }
    let flat: Vec<T> = blob
        .chunks_exact(4)
        .map(|b| T::of(f32::from_le_bytes(b.try_into().expect("4 bytes")) as f64))
        .collect();
    model.load_flat(&flat)?;
    model.training_seed = header.training_seed;
    model.init = header.init.clone();
    Ok((model, header))
}
