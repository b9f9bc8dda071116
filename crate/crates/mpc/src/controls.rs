use forge_procsim::{ForgingStrategy, StrategyLimits};
use serde::{Deserialize, Serialize};

use crate::MpcError;

/// Names of u1..u8 in control order.
pub const COMPONENTS: [&str; 8] = [
    "t_oven",
    "t_transport",
    "wait1",
    "upsetting1",
    "wait2",
    "upsetting2",
    "wait3",
    "upsetting3",
];
/// Control indices of wait1..wait3.
pub const WAIT_INDICES: [usize; 3] = [2, 4, 6];
pub const WAIT_QUANTUM: f64 = 5.0;

/// Rounds a wait to the nearest multiple of 5 s, kept within `[5, max]`.
pub fn quantize_wait(w: f64, max: f64) -> f64 {
    let top = (max / WAIT_QUANTUM).floor() * WAIT_QUANTUM;
    ((w / WAIT_QUANTUM).round() * WAIT_QUANTUM).clamp(WAIT_QUANTUM, top)
}

/// u1..u8 with a free/frozen mask.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ControlVector {
    pub values: [f64; 8],
    pub free: [bool; 8],
}

impl ControlVector {
    pub fn new(strategy: &ForgingStrategy, free: [bool; 8]) -> Self {
        Self { values: strategy.to_controls(), free }
    }

    /// Free mask from component names.
    pub fn mask(names: &[String]) -> Result<[bool; 8], MpcError> {
        let mut free = [false; 8];
        for n in names {
            let i = COMPONENTS
                .iter()
                .position(|c| c == n)
                .ok_or_else(|| MpcError::Scenario(format!("unknown control component {n:?}")))?;
            free[i] = true;
        }
        Ok(free)
    }

    pub fn strategy(&self) -> ForgingStrategy {
        ForgingStrategy::from_controls(&self.values)
    }

    pub fn waits(&self) -> [f64; 3] {
        WAIT_INDICES.map(|i| self.values[i])
    }

    pub fn bounds(i: usize, limits: &StrategyLimits) -> (f64, f64) {
        match i {
            0 => limits.oven,
            1 => limits.transport,
            2 | 4 | 6 => limits.wait,
            _ => limits.upsetting,
        }
    }

    /// Copy with every wait quantized.
    pub fn quantized(&self, limits: &StrategyLimits) -> Self {
        let mut out = *self;
        quantize_in_place(&mut out.values, limits);
        out
    }

    pub fn free_indices(&self) -> Vec<usize> {
        (0..8).filter(|&i| self.free[i]).collect()
    }
}

pub(crate) fn quantize_in_place(values: &mut [f64; 8], limits: &StrategyLimits) {
    for i in WAIT_INDICES {
        values[i] = quantize_wait(values[i], limits.wait.1);
    }
}
