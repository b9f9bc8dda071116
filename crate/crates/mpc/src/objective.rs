use forge_core::Field;
use serde::{Deserialize, Serialize};

use crate::MpcError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ObjectiveParams {
    /// Grain-size threshold n, µm.
    pub threshold: f64,
    /// Weight k on the summed waits, per second.
    pub wait_weight: f64,
}

impl Default for ObjectiveParams {
    fn default() -> Self {
        Self { threshold: 35.0, wait_weight: 0.3 }
    }
}

impl ObjectiveParams {
    pub fn validate(&self) -> Result<(), MpcError> {
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(MpcError::Scenario(format!("threshold {} must be positive", self.threshold)));
        }
        if !(self.wait_weight >= 0.0 && self.wait_weight.is_finite()) {
            return Err(MpcError::Scenario(format!("wait weight {} must be non-negative", self.wait_weight)));
        }
        Ok(())
    }
}

/// 1 when `x <= n`, else 0.
pub fn f_thresh(x: f64, n: f64) -> u8 {
    u8::from(x <= n)
}

/// Masked nodes whose grain exceeds the threshold.
pub fn violation_count(grain: &Field<f64>, mask: &[bool], threshold: f64) -> usize {
    grain
        .as_slice()
        .iter()
        .zip(mask)
        .filter(|(g, m)| **m && f_thresh(**g, threshold) == 0)
        .count()
}

/// Violation count over the mask plus `k · Σ waits`.
pub fn objective(grain: &Field<f64>, mask: &[bool], waits: &[f64; 3], params: &ObjectiveParams) -> f64 {
    violation_count(grain, mask, params.threshold) as f64 + params.wait_weight * waits.iter().sum::<f64>()
}
