//! Desk-scale physics oracle for three-stroke hot upsetting.
//!
//! The billet leaves the oven uniformly at the oven temperature and runs
//! through transport → (stroke, wait) ×3 → quench. Heat conduction is an
//! explicit finite-volume scheme on the axisymmetric half-section, the
//! upsetting kinematics are homogeneous with a barreling term on the strain
//! distribution, and the microstructure follows a static-recrystallization /
//! grain-growth model of the Sellars–JMAK family.

mod error;
pub mod audit;
pub mod kinetics;
mod params;
mod process;
mod strategy;
mod stroke;
mod thermal;

pub use error::SimError;
pub use kinetics::{microstructure_step, NodeKinetics};
pub use params::{DeformationParams, KineticParams, MaterialParams, ThermalParams};
pub use process::{run_process, ProcessRunner, SimState};
pub use strategy::{
    BoundViolation, EmitPoint, ForgingStrategy, PhaseEvent, PhaseKind, SnapshotSchedule,
    StrategyLimits,
};
pub use stroke::{apply_stroke, lattice_volume, strain_increment};
pub use thermal::{stable_dt, thermal_step, Boundary, ThermalStencil};

/// Celsius to kelvin offset.
pub const KELVIN: f64 = 273.15;
/// Stefan–Boltzmann constant, W/(m²·K⁴).
pub const STEFAN_BOLTZMANN: f64 = 5.670_374_419e-8;
