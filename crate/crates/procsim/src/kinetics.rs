//! Static recrystallization (JMAK) and grain growth.
//!
//! Non-isothermal waits use the additivity rule: each node accumulates the
//! normalized time `τ = Σ dt / t50(T)`, and the recrystallized fraction is the
//! isothermal Avrami curve evaluated at `τ`.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{KineticParams, MaterialParams, SimState, KELVIN};

/// Per-node kinetic bookkeeping not exposed as a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NodeKinetics {
    /// Strain driving the current recrystallization cycle.
    pub driving_strain: f64,
    /// Strain rate of the stroke that started the cycle, 1/s.
    pub strain_rate: f64,
    /// Accumulated `Σ dt / t50`.
    pub normalized_time: f64,
    /// Grain size when the cycle started, µm.
    pub d_prev: f64,
    /// Recrystallized grain size of the cycle, µm.
    pub d_rx: f64,
    /// `d^m` while in the growth regime.
    pub growth_power: Option<f64>,
}

impl NodeKinetics {
    /// Undeformed material: no pending cycle, grain frozen at `d0`.
    pub fn undeformed(d0: f64) -> Self {
        Self {
            driving_strain: 0.0,
            strain_rate: 0.0,
            normalized_time: 0.0,
            d_prev: d0,
            d_rx: d0,
            growth_power: None,
        }
    }
}

/// Half-recrystallization time, s.
pub fn t50(p: &KineticParams, d_prev: f64, strain: f64, strain_rate: f64, temp_c: f64) -> f64 {
    p.a_t50
        * d_prev.powf(p.t50_grain_exp)
        * strain.powf(p.t50_strain_exp)
        * strain_rate.powf(p.t50_rate_exp)
        * (p.q_rex / (p.r_gas * (temp_c + KELVIN))).exp()
}

/// Avrami fraction after `normalized_time = t / t50`.
pub fn avrami(p: &KineticParams, normalized_time: f64) -> f64 {
    1.0 - (-LN_2 * normalized_time.powf(p.avrami_exp)).exp()
}

/// Recrystallized grain size, µm, floored at `d_rx_min`.
pub fn recrystallized_size(p: &KineticParams, d_prev: f64, strain: f64) -> f64 {
    (p.c_drx * d_prev.powf(p.drx_grain_exp) * strain.powf(p.drx_strain_exp)).max(p.d_rx_min)
}

/// Mean size of a partially recrystallized node.
pub fn mixture_size(rx: f64, d_rx: f64, d_prev: f64) -> f64 {
    rx.powf(4.0 / 3.0) * d_rx + (1.0 - rx).powi(2) * d_prev
}

/// Growth increment of `d^m` over `dt` seconds at `temp_c`.
pub fn growth_increment(p: &KineticParams, dt: f64, temp_c: f64) -> f64 {
    p.k_growth * dt * (-p.q_growth / (p.r_gas * (temp_c + KELVIN))).exp()
}

/// Isothermal grain growth from `d_start` over `dt` seconds.
pub fn grow(p: &KineticParams, d_start: f64, dt: f64, temp_c: f64) -> f64 {
    (d_start.powf(p.growth_exp) + growth_increment(p, dt, temp_c)).powf(p.growth_exp.recip())
}

/// Advances every node's microstructure by `dt` at its current temperature.
///
/// Nodes below the freezing temperature are left untouched.
pub fn microstructure_step(state: &mut SimState, dt: f64, params: &MaterialParams) {
    let p = &params.kinetics;
    let frozen = params.thermal.frozen_below;
    let fields = &mut state.fields;
    let temps = fields.temperature.as_slice();
    let rx = fields.rx.as_mut_slice();
    let grain = fields.grain.as_mut_slice();
    for (idx, node) in state.nodes.iter_mut().enumerate() {
        let t = temps[idx];
        if t < frozen || node.driving_strain <= 0.0 {
            continue;
        }
        let t50 = t50(p, node.d_prev, node.driving_strain, node.strain_rate, t);
        node.normalized_time += dt / t50;
        rx[idx] = avrami(p, node.normalized_time).max(rx[idx]).min(1.0);
        match node.growth_power.as_mut() {
            Some(power) => {
                *power += growth_increment(p, dt, t);
                grain[idx] = power.powf(p.growth_exp.recip());
            }
            None => {
                grain[idx] = mixture_size(rx[idx], node.d_rx, node.d_prev);
                if rx[idx] > p.growth_switch_rx {
                    node.growth_power = Some(grain[idx].powf(p.growth_exp));
                }
            }
        }
    }
}
