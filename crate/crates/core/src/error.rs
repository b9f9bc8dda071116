use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    #[error("unknown field `{0}` (expected one of temperature, ux, uy, eqplast, rx, grain)")]
    UnknownField(String),
    #[error("normalization range for `{field}` must be positive, got {range}")]
    InvalidRange { field: &'static str, range: f64 },
    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },
}
