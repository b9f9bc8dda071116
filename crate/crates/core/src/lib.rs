//! Shared building blocks: the 21×11 nodal grid, the six per-node fields of a
//! workpiece, min/range normalization and the measurable surface-temperature
//! contour.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the bottom of this file name the concrete instantiations used by
//! the rest of the workspace.

mod contour;
mod error;
mod field;
mod grid;
mod normalize;
mod scalar;

pub use contour::{contour_nodes, extract_contour, TemperatureContour, CONTOUR_LEN};
pub use error::CoreError;
pub use field::{Field, FieldId, FieldStack, Geometry, WorkpieceState, FIELD_COUNT};
pub use grid::Grid;
pub use normalize::{denormalize_field, normalize_field, FieldBounds, NormalizationConstants};
pub use scalar::Scalar;

/// Double-precision workpiece state, used by the physics oracle.
pub type State64 = WorkpieceState<f64>;
/// Single-precision field stack, the storage and inference precision.
pub type Stack32 = FieldStack<f32>;
/// Double-precision field stack.
pub type Stack64 = FieldStack<f64>;
/// Single-precision contour.
pub type Contour32 = TemperatureContour<f32>;
/// Double-precision contour.
pub type Contour64 = TemperatureContour<f64>;
