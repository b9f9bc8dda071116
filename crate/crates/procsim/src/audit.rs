//! Randomized invariant audits of the oracle. Each returns the measured
//! worst case so callers can compare it against their own tolerance.

use forge_core::{Geometry, Grid};
use rand::Rng;

use crate::{
    lattice_volume, Boundary, ForgingStrategy, MaterialParams, PhaseEvent, PhaseKind,
    ProcessRunner, SimError, StrategyLimits, ThermalParams, ThermalStencil,
};

/// Uniformly random plan within `limits`.
pub fn random_strategy<R: Rng + ?Sized>(rng: &mut R, limits: &StrategyLimits) -> ForgingStrategy {
    let u: [f64; 8] = std::array::from_fn(|_| rng.random::<f64>());
    ForgingStrategy::from_unit(&u, limits)
}

/// Largest relative deviation of the lattice volume from its initial value
/// over the three strokes of `strategy`.
pub fn stroke_volume_error(
    grid: &Grid,
    strategy: &ForgingStrategy,
    params: &MaterialParams,
) -> Result<f64, SimError> {
    strategy.validate()?;
    let mut runner = ProcessRunner::new(*grid, *params, strategy.t_oven);
    let v0 = lattice_volume(grid, &runner.state().fields);
    let mut worst: f64 = 0.0;
    for phase in strategy.phases(params) {
        runner.run_phase(&phase)?;
        if let PhaseKind::Stroke(_) = phase.kind {
            let v = lattice_volume(grid, &runner.state().fields);
            worst = worst.max((v - v0).abs() / v0);
        }
    }
    Ok(worst)
}

fn random_geometry<R: Rng + ?Sized>(rng: &mut R, grid: &Grid) -> Geometry {
    // any geometry reachable by up to 1.0 total strain
    let e: f64 = rng.random_range(0.0..1.0);
    Geometry {
        radius: grid.radius0 * (0.5 * e).exp(),
        half_height: grid.half_height0 * (-e).exp(),
    }
}

fn random_field<R: Rng + ?Sized>(rng: &mut R, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Relative change of total heat content after `steps` explicit steps with
/// every face insulated, starting from a random field.
pub fn insulated_enthalpy_drift<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    thermal: &ThermalParams,
    steps: usize,
) -> f64 {
    let insulated = ThermalParams {
        air_htc: 0.0,
        emissivity: 0.0,
        ..*thermal
    };
    let geometry = random_geometry(rng, grid);
    let stencil = ThermalStencil::new(grid, &geometry, &insulated);
    let mut temps = random_field(rng, grid.node_count(), 900.0, 1300.0);
    let h0 = stencil.enthalpy(&temps);
    let t_max = temps.iter().cloned().fold(f64::MIN, f64::max);
    let dt = stencil.stable_dt(t_max, Boundary::Air);
    let mut scratch = Vec::new();
    for _ in 0..steps {
        stencil.step(&mut temps, &mut scratch, dt, Boundary::Air);
    }
    (stencil.enthalpy(&temps) - h0).abs() / h0.abs()
}

/// Worst excursion, K, of an updated temperature outside the range spanned
/// by the previous field and the boundary reference temperatures, over
/// `steps` independent random conduction steps at or below the stability
/// limit. Zero means the maximum principle held everywhere.
pub fn max_principle_excursion<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    thermal: &ThermalParams,
    steps: usize,
) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scratch = Vec::new();
    for _ in 0..steps {
        let boundary = match rng.random_range(0..3) {
            0 => Boundary::Air,
            1 => Boundary::DieContact,
            _ => Boundary::Quench,
        };
        let geometry = random_geometry(rng, grid);
        let stencil = ThermalStencil::new(grid, &geometry, thermal);
        let mut temps = random_field(rng, grid.node_count(), 800.0, 1330.0);
        let mut lo = temps.iter().cloned().fold(f64::MAX, f64::min);
        let mut hi = temps.iter().cloned().fold(f64::MIN, f64::max);
        let dt = stencil.stable_dt(hi, boundary) * rng.random_range(0.05..=1.0);
        let mut refs = vec![thermal.ambient];
        if boundary == Boundary::DieContact {
            refs.push(thermal.die_temperature);
        }
        for r in refs {
            lo = lo.min(r);
            hi = hi.max(r);
        }
        stencil.step(&mut temps, &mut scratch, dt, boundary);
        for &t in &temps {
            worst = worst.max(lo - t).max(t - hi);
        }
    }
    worst
}

/// Outcome of [`rx_audit`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RxAudit {
    /// Largest drop of rx at any node between two observations within one
    /// recrystallization cycle; zero when rx is monotone.
    pub worst_decrease: f64,
    pub min: f64,
    pub max: f64,
}

impl RxAudit {
    pub fn holds(&self) -> bool {
        self.worst_decrease <= 0.0 && self.min >= 0.0 && self.max <= 1.0
    }
}

/// Runs `runs` random plans, observing rx every `interval` seconds of each
/// idle phase.
pub fn rx_audit<R: Rng + ?Sized>(
    rng: &mut R,
    grid: &Grid,
    params: &MaterialParams,
    runs: usize,
    interval: f64,
) -> Result<RxAudit, SimError> {
    let mut audit = RxAudit {
        worst_decrease: 0.0,
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
    };
    for _ in 0..runs {
        let strategy = random_strategy(rng, &StrategyLimits::TABLE);
        let mut runner = ProcessRunner::new(*grid, *params, strategy.t_oven);
        let mut prev = runner.state().fields.rx.as_slice().to_vec();
        for phase in strategy.phases(params) {
            let pieces = match phase.kind {
                PhaseKind::Stroke(_) => 1,
                _ => (phase.duration / interval).ceil().max(1.0) as usize,
            };
            let piece = PhaseEvent::new(phase.kind, phase.duration / pieces as f64);
            for _ in 0..pieces {
                runner.run_phase(&piece)?;
                let rx = runner.state().fields.rx.as_slice();
                for (&now, &before) in rx.iter().zip(&prev) {
                    audit.min = audit.min.min(now);
                    audit.max = audit.max.max(now);
                    if !matches!(phase.kind, PhaseKind::Stroke(_)) {
                        audit.worst_decrease = audit.worst_decrease.max(before - now);
                    }
                }
                prev.copy_from_slice(rx);
            }
        }
    }
    Ok(audit)
}
