//! Shrinking-horizon model-predictive control of the three-stroke upsetting
//! process. Each stage optimizes the remaining controls through surrogate
//! rollouts, applies one stroke and its wait on the physics oracle, and
//! re-measures the surface temperature contour.

mod controller;
mod controls;
mod error;
mod objective;
mod region;
mod rollout;
mod scenario;

pub use controller::{run_mpc, stage_seed, verify, MpcRun, MpcStageResult, Plant, Verification};
pub use controls::{quantize_wait, ControlVector, COMPONENTS, WAIT_INDICES, WAIT_QUANTUM};
pub use error::MpcError;
pub use objective::{f_thresh, objective, violation_count, ObjectiveParams};
pub use region::RegionOfInterest;
pub use rollout::{rollout, Rollout, END_SNAPSHOT};
pub use scenario::{component_index, nominal_plan, Disturbance, Scenario};
