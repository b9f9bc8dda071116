use thiserror::Error;

use crate::BoundViolation;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("time step {dt:e} s exceeds the explicit stability limit {limit:e} s")]
    StabilityViolation { dt: f64, limit: f64 },
    #[error("forging strategy out of bounds: {}", format_violations(.0))]
    InvalidStrategy(Vec<BoundViolation>),
    #[error("stroke index {0} is not in 1..=3")]
    InvalidStroke(usize),
    #[error("upsetting time {0} s is outside [0.05, 0.15]")]
    InvalidUpsettingTime(f64),
    #[error("phase duration must be finite and non-negative, got {0}")]
    InvalidDuration(f64),
    #[error("stroke {expected} must come next, got stroke {got}")]
    StrokeOrder { expected: usize, got: usize },
}

fn format_violations(v: &[BoundViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}
