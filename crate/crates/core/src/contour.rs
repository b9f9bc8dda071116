use serde::{Deserialize, Serialize};

use crate::{normalize_field, CoreError, FieldId, Grid, NormalizationConstants, Scalar, WorkpieceState};

/// Number of measurable surface nodes on the default grid.
pub const CONTOUR_LEN: usize = 31;

/// Normalized temperatures on the measurable free surface.
///
/// Order: along the top face from the axis corner `(top, 0)` out to
/// `(top, outer)`, then down the lateral face from `(top - 1, outer)` to
/// `(0, outer)`. The mid-plane row and the axis column are excluded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemperatureContour<T> {
    values: Vec<T>,
}

impl<T: Scalar> TemperatureContour<T> {
    /// Wraps already-normalized values, clamping each to `[0, 1]`.
    pub fn new(values: Vec<T>) -> Self {
        Self {
            values: values
                .into_iter()
                .map(|v| v.max(T::zero()).min(T::one()))
                .collect(),
        }
    }

    /// All-zero contour, the placeholder for a missing measurement.
    pub fn zeros(len: usize) -> Self {
        Self {
            values: vec![T::zero(); len],
        }
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `(row, col)` of every contour node, in contour order.
pub fn contour_nodes(grid: &Grid) -> Vec<(usize, usize)> {
    let top = grid.top_row();
    let outer = grid.outer_col();
    (0..=outer)
        .map(|c| (top, c))
        .chain((0..top).rev().map(|r| (r, outer)))
        .collect()
}

/// Samples the normalized temperature field at the contour nodes.
pub fn extract_contour<T: Scalar>(
    grid: &Grid,
    state: &WorkpieceState<T>,
    constants: &NormalizationConstants,
) -> Result<TemperatureContour<T>, CoreError> {
    let norm = normalize_field(&state.temperature, constants, FieldId::Temperature)?;
    Ok(TemperatureContour::new(
        contour_nodes(grid)
            .into_iter()
            .map(|(r, c)| norm.get(r, c))
            .collect(),
    ))
}
