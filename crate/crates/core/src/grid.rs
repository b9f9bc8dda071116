use serde::{Deserialize, Serialize};

/// Structured nodal grid of the axisymmetric half-section.
///
/// Rows run along the axis (row 0 is the mid-plane, row `n_axial - 1` the die
/// face); columns run radially (column 0 on the axis, the last column on the
/// free lateral surface). Lengths are in millimetres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n_axial: usize,
    pub n_radial: usize,
    pub radius0: f64,
    pub half_height0: f64,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            n_axial: 21,
            n_radial: 11,
            radius0: 2.5,
            half_height0: 5.0,
        }
    }
}

impl Grid {
    pub fn node_count(&self) -> usize {
        self.n_axial * self.n_radial
    }

    /// Initial axial spacing.
    pub fn dz(&self) -> f64 {
        self.half_height0 / (self.n_axial - 1) as f64
    }

    /// Initial radial spacing.
    pub fn dr(&self) -> f64 {
        self.radius0 / (self.n_radial - 1) as f64
    }

    #[inline]
    pub fn index(&self, row: usize, col: usize) -> usize {
        debug_assert!(row < self.n_axial && col < self.n_radial);
        row * self.n_radial + col
    }

    /// Last row index (the die-contact face).
    pub fn top_row(&self) -> usize {
        self.n_axial - 1
    }

    /// Last column index (the lateral free surface).
    pub fn outer_col(&self) -> usize {
        self.n_radial - 1
    }

    /// Undeformed axial coordinate of `row`, mm.
    pub fn z0(&self, row: usize) -> f64 {
        row as f64 * self.dz()
    }

    /// Undeformed radial coordinate of `col`, mm.
    pub fn r0(&self, col: usize) -> f64 {
        col as f64 * self.dr()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_grid_has_231_nodes() {
        let g = Grid::default();
        assert_eq!(g.node_count(), 231);
        assert_eq!(g.dz(), 0.25);
        assert_eq!(g.dr(), 0.25);
        assert_eq!(g.index(20, 10), 230);
        assert_eq!(g.z0(20), 5.0);
        assert_eq!(g.r0(10), 2.5);
    }
}
