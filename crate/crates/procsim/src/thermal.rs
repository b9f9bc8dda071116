use std::f64::consts::PI;

use forge_core::{Geometry, Grid, State64};

use crate::{SimError, ThermalParams, KELVIN, STEFAN_BOLTZMANN};

/// Thermal boundary condition on the top (die) face and the lateral face.
/// The mid-plane and the axis are always symmetry (zero-flux) boundaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// Convection plus radiation to ambient on top and lateral faces.
    Air,
    /// Die conductance on the top face, air on the lateral face.
    DieContact,
    /// Forced convection plus radiation on top and lateral faces.
    Quench,
}

/// Finite-volume discretization of axisymmetric conduction for one geometry.
///
/// Control volumes are annuli around each node, half cells on the faces and
/// a solid disc on the axis; the axis update therefore reduces to the
/// `2 ∂²T/∂r²` limit. Capacities and conductances are in J/K and W/K.
#[derive(Debug, Clone)]
pub struct ThermalStencil {
    rows: usize,
    cols: usize,
    /// ρ c V per node.
    capacity: Vec<f64>,
    /// Conductance between `(i, j)` and `(i, j + 1)`, `rows × (cols - 1)`.
    g_radial: Vec<f64>,
    /// Conductance between `(i, j)` and `(i + 1, j)`, `(rows - 1) × cols`.
    g_axial: Vec<f64>,
    /// Exposed top-face area per column, m².
    top_area: Vec<f64>,
    /// Exposed lateral area per row, m².
    side_area: Vec<f64>,
    volume: Vec<f64>,
    params: ThermalParams,
}

/// Heat-transfer description of one exposed face.
#[derive(Debug, Clone, Copy)]
struct Face {
    h: f64,
    emissivity: f64,
    reference: f64,
}

impl Face {
    /// Outward flux density, W/m².
    #[inline]
    fn flux(&self, t: f64) -> f64 {
        let conv = self.h * (t - self.reference);
        if self.emissivity == 0.0 {
            return conv;
        }
        let tk = t + KELVIN;
        let rk = self.reference + KELVIN;
        conv + self.emissivity * STEFAN_BOLTZMANN * (tk.powi(4) - rk.powi(4))
    }

    /// Secant coefficient `flux / (t - ref)`, increasing in `t`.
    fn secant(&self, t: f64) -> f64 {
        let tk = t.max(self.reference) + KELVIN;
        let rk = self.reference + KELVIN;
        self.h + self.emissivity * STEFAN_BOLTZMANN * (tk * tk + rk * rk) * (tk + rk)
    }
}

impl ThermalStencil {
    pub fn new(grid: &Grid, geometry: &Geometry, params: &ThermalParams) -> Self {
        let (rows, cols) = (grid.n_axial, grid.n_radial);
        let radius = geometry.radius * 1e-3;
        let height = geometry.half_height * 1e-3;
        let dr = radius / (cols - 1) as f64;
        let dz = height / (rows - 1) as f64;
        let k = params.conductivity;

        let ring = |j: usize| {
            let r_in = ((j as f64 - 0.5) * dr).max(0.0);
            let r_out = ((j as f64 + 0.5) * dr).min(radius);
            PI * (r_out * r_out - r_in * r_in)
        };
        let slab = |i: usize| {
            let z_lo = ((i as f64 - 0.5) * dz).max(0.0);
            let z_hi = ((i as f64 + 0.5) * dz).min(height);
            z_hi - z_lo
        };

        let mut volume = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                volume.push(ring(j) * slab(i));
            }
        }
        let capacity = volume.iter().map(|v| v * params.heat_capacity()).collect();

        let mut g_radial = Vec::with_capacity(rows * (cols - 1));
        for i in 0..rows {
            for j in 0..cols - 1 {
                let r_face = (j as f64 + 0.5) * dr;
                g_radial.push(k * 2.0 * PI * r_face * slab(i) / dr);
            }
        }
        let mut g_axial = Vec::with_capacity((rows - 1) * cols);
        for _ in 0..rows - 1 {
            for j in 0..cols {
                g_axial.push(k * ring(j) / dz);
            }
        }
        let top_area = (0..cols).map(ring).collect();
        let side_area = (0..rows).map(|i| 2.0 * PI * radius * slab(i)).collect();

        Self {
            rows,
            cols,
            capacity,
            g_radial,
            g_axial,
            top_area,
            side_area,
            volume,
            params: *params,
        }
    }

    fn faces(&self, boundary: Boundary) -> (Face, Face) {
        let p = &self.params;
        let air = Face {
            h: p.air_htc,
            emissivity: p.emissivity,
            reference: p.ambient,
        };
        match boundary {
            Boundary::Air => (air, air),
            Boundary::DieContact => (
                Face {
                    h: p.die_htc,
                    emissivity: 0.0,
                    reference: p.die_temperature,
                },
                air,
            ),
            Boundary::Quench => {
                let forced = Face {
                    h: p.quench_htc,
                    ..air
                };
                (forced, forced)
            }
        }
    }

    /// Largest step for which every update is a convex combination of the
    /// old nodal temperatures and the boundary reference temperatures, given
    /// that no node exceeds `t_max`. This also bounds the scheme's stability.
    pub fn stable_dt(&self, t_max: f64, boundary: Boundary) -> f64 {
        let (top, side) = self.faces(boundary);
        let (h_top, h_side) = (top.secant(t_max), side.secant(t_max));
        let mut limit = f64::INFINITY;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let mut g = 0.0;
                if j > 0 {
                    g += self.g_radial[i * (self.cols - 1) + j - 1];
                }
                if j + 1 < self.cols {
                    g += self.g_radial[i * (self.cols - 1) + j];
                }
                if i > 0 {
                    g += self.g_axial[(i - 1) * self.cols + j];
                }
                if i + 1 < self.rows {
                    g += self.g_axial[i * self.cols + j];
                }
                if i + 1 == self.rows {
                    g += h_top * self.top_area[j];
                }
                if j + 1 == self.cols {
                    g += h_side * self.side_area[i];
                }
                limit = limit.min(self.capacity[i * self.cols + j] / g);
            }
        }
        limit
    }

    /// One explicit step; `scratch` must have the same length as `temps`.
    pub fn step(&self, temps: &mut [f64], scratch: &mut Vec<f64>, dt: f64, boundary: Boundary) {
        let (rows, cols) = (self.rows, self.cols);
        let (top, side) = self.faces(boundary);
        scratch.clear();
        scratch.resize(temps.len(), 0.0);
        let heat = scratch;

        for i in 0..rows {
            let row = i * cols;
            for j in 0..cols - 1 {
                let g = self.g_radial[i * (cols - 1) + j];
                let q = g * (temps[row + j + 1] - temps[row + j]);
                heat[row + j] += q;
                heat[row + j + 1] -= q;
            }
        }
        for i in 0..rows - 1 {
            for j in 0..cols {
                let a = i * cols + j;
                let q = self.g_axial[a] * (temps[a + cols] - temps[a]);
                heat[a] += q;
                heat[a + cols] -= q;
            }
        }
        let top_row = (rows - 1) * cols;
        for j in 0..cols {
            heat[top_row + j] -= self.top_area[j] * top.flux(temps[top_row + j]);
        }
        for i in 0..rows {
            let a = i * cols + cols - 1;
            heat[a] -= self.side_area[i] * side.flux(temps[a]);
        }
        for ((t, q), c) in temps.iter_mut().zip(heat.iter()).zip(&self.capacity) {
            *t += dt * q / c;
        }
    }

    /// Total heat content `Σ ρ c V T`, J (relative to 0 °C).
    pub fn enthalpy(&self, temps: &[f64]) -> f64 {
        temps.iter().zip(&self.capacity).map(|(t, c)| t * c).sum()
    }

    /// Control volume of every node, m³.
    pub fn volumes(&self) -> &[f64] {
        &self.volume
    }
}

/// Stability limit of [`thermal_step`] for the given state.
pub fn stable_dt(grid: &Grid, state: &State64, boundary: Boundary, params: &ThermalParams) -> f64 {
    ThermalStencil::new(grid, &state.geometry, params).stable_dt(state.temperature.max(), boundary)
}

/// Advances the temperature field by one explicit step of length `dt`.
pub fn thermal_step(
    grid: &Grid,
    state: &mut State64,
    dt: f64,
    boundary: Boundary,
    params: &ThermalParams,
) -> Result<(), SimError> {
    let stencil = ThermalStencil::new(grid, &state.geometry, params);
    let limit = stencil.stable_dt(state.temperature.max(), boundary);
    if !(dt >= 0.0 && dt <= limit) {
        return Err(SimError::StabilityViolation { dt, limit });
    }
    let mut scratch = Vec::new();
    stencil.step(state.temperature.as_mut_slice(), &mut scratch, dt, boundary);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn insulated() -> ThermalParams {
        ThermalParams {
            air_htc: 0.0,
            emissivity: 0.0,
            ..ThermalParams::default()
        }
    }

    #[test]
    fn uniform_field_is_an_equilibrium_without_losses() {
        let g = Grid::default();
        let p = insulated();
        let mut s = State64::uniform(&g, 1200.0, 70.0);
        let dt = stable_dt(&g, &s, Boundary::Air, &p);
        for _ in 0..100 {
            thermal_step(&g, &mut s, dt, Boundary::Air, &p).unwrap();
        }
        assert!(s.temperature.as_slice().iter().all(|t| (t - 1200.0).abs() < 1e-9));
    }

    #[test]
    fn air_cools_only_the_exposed_nodes_in_one_step() {
        let g = Grid::default();
        let p = ThermalParams::default();
        let mut s = State64::uniform(&g, 1200.0, 70.0);
        let dt = stable_dt(&g, &s, Boundary::Air, &p);
        thermal_step(&g, &mut s, dt, Boundary::Air, &p).unwrap();
        for r in 0..21 {
            for c in 0..11 {
                let t = s.temperature.get(r, c);
                if r == 20 || c == 10 {
                    assert!(t < 1200.0, "({r},{c}) = {t}");
                } else {
                    assert_eq!(t, 1200.0, "({r},{c})");
                }
            }
        }
    }

    #[test]
    fn axis_node_matches_the_lhopital_limit() {
        // hot axis node, all neighbours cold: dT0/dt = α (4 (T1 - T0)/Δr² + 2 (T_up - T0)/Δz²)
        let g = Grid::default();
        let p = insulated();
        let mut s = State64::uniform(&g, 0.0, 70.0);
        s.temperature.set(5, 0, 100.0);
        let dt = 1e-4;
        thermal_step(&g, &mut s, dt, Boundary::Air, &p).unwrap();
        let alpha = p.diffusivity();
        let d = 0.25e-3;
        let expect = 100.0 + dt * alpha * (4.0 * (0.0 - 100.0) / (d * d) + 2.0 * (0.0 - 100.0) / (d * d));
        assert!((s.temperature.get(5, 0) - expect).abs() < 1e-9);
    }

    #[test]
    fn interior_node_matches_the_cylindrical_laplacian() {
        // ∂²T/∂r² + (1/r)∂T/∂r + ∂²T/∂z² with central differences at r = 4 Δr
        let g = Grid::default();
        let p = insulated();
        let mut s = State64::uniform(&g, 0.0, 70.0);
        s.temperature = forge_core::Field::from_fn(&g, |r, c| (c * c) as f64 + 0.5 * r as f64);
        let before = s.temperature.clone();
        let dt = 1e-4;
        thermal_step(&g, &mut s, dt, Boundary::Air, &p).unwrap();
        let d = 0.25e-3;
        let (i, j) = (8usize, 4usize);
        let t = |r: usize, c: usize| before.get(r, c);
        let rr = j as f64 * d;
        let lap = (t(i, j + 1) - 2.0 * t(i, j) + t(i, j - 1)) / (d * d)
            + (t(i, j + 1) - t(i, j - 1)) / (2.0 * d * rr)
            + (t(i + 1, j) - 2.0 * t(i, j) + t(i - 1, j)) / (d * d);
        let expect = t(i, j) + dt * p.diffusivity() * lap;
        assert!((s.temperature.get(i, j) - expect).abs() < 1e-9);
    }

    #[test]
    fn oversized_step_is_rejected() {
        let g = Grid::default();
        let p = ThermalParams::default();
        let mut s = State64::uniform(&g, 1200.0, 70.0);
        let limit = stable_dt(&g, &s, Boundary::DieContact, &p);
        // the limit is never looser than min(Δr, Δz)² / (4α)
        assert!(limit <= 0.25e-3f64.powi(2) / (4.0 * p.diffusivity()));
        let err = thermal_step(&g, &mut s, limit * 1.01, Boundary::DieContact, &p).unwrap_err();
        assert!(matches!(err, SimError::StabilityViolation { .. }));
        assert_eq!(s.temperature.max(), 1200.0);
    }

    #[test]
    fn control_volumes_tile_the_cylinder() {
        let g = Grid::default();
        let geo = Geometry {
            radius: 3.1,
            half_height: 4.2,
        };
        let st = ThermalStencil::new(&g, &geo, &ThermalParams::default());
        let total: f64 = st.volumes().iter().sum();
        let exact = PI * (3.1e-3f64).powi(2) * 4.2e-3;
        assert!((total - exact).abs() / exact < 1e-12);
    }
}
