use forge_core::Grid;
use serde::{Deserialize, Serialize};

use crate::MpcError;

/// Node rectangle (inclusive row and column ranges) plus a safety margin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionOfInterest {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
    /// Dilation radius in nodes.
    pub margin: usize,
}

impl Default for RegionOfInterest {
    fn default() -> Self {
        Self { rows: (5, 15), cols: (0, 7), margin: 1 }
    }
}

impl RegionOfInterest {
    pub fn validate(&self, grid: &Grid) -> Result<(), MpcError> {
        let (r0, r1) = self.rows;
        let (c0, c1) = self.cols;
        if r0 > r1 || c0 > c1 || r1 >= grid.n_axial || c1 >= grid.n_radial {
            return Err(MpcError::Scenario(format!(
                "region rows {r0}..={r1}, cols {c0}..={c1} outside the {}x{} grid",
                grid.n_axial, grid.n_radial
            )));
        }
        Ok(())
    }

    /// Row-major node mask of the rectangle dilated by `margin` under the
    /// 8-neighbourhood, cut at the grid edge.
    pub fn mask(&self, grid: &Grid) -> Vec<bool> {
        let rows = self.rows.0.saturating_sub(self.margin)..=(self.rows.1 + self.margin).min(grid.top_row());
        let cols = self.cols.0.saturating_sub(self.margin)..=(self.cols.1 + self.margin).min(grid.outer_col());
        let mut mask = vec![false; grid.node_count()];
        for r in rows {
            for c in cols.clone() {
                mask[grid.index(r, c)] = true;
            }
        }
        mask
    }

    pub fn node_count(&self, grid: &Grid) -> usize {
        self.mask(grid).iter().filter(|m| **m).count()
    }
}
