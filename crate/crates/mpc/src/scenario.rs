use forge_anneal::AnnealConfig;
use forge_core::Grid;
use forge_procsim::{ForgingStrategy, StrategyLimits};
use serde::{Deserialize, Serialize};

use crate::{ControlVector, MpcError, ObjectiveParams, RegionOfInterest, COMPONENTS};

/// Actual process values that differ from what the controller commands.
/// The oracle applies them; the controller only sees their effect through
/// measured contours.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Disturbance {
    pub t_oven: Option<f64>,
    pub t_transport: Option<f64>,
    pub wait1: Option<f64>,
    pub upsetting1: Option<f64>,
    pub wait2: Option<f64>,
    pub upsetting2: Option<f64>,
    pub wait3: Option<f64>,
    pub upsetting3: Option<f64>,
}

impl Disturbance {
    fn overrides(&self) -> [Option<f64>; 8] {
        [
            self.t_oven,
            self.t_transport,
            self.wait1,
            self.upsetting1,
            self.wait2,
            self.upsetting2,
            self.wait3,
            self.upsetting3,
        ]
    }

    pub fn is_empty(&self) -> bool {
        self.overrides().iter().all(Option::is_none)
    }

    /// Commanded controls with the overrides substituted.
    pub fn apply(&self, commanded: &[f64; 8]) -> [f64; 8] {
        let mut out = *commanded;
        for (v, o) in out.iter_mut().zip(self.overrides()) {
            if let Some(o) = o {
                *v = o;
            }
        }
        out
    }
}

fn default_free() -> Vec<String> {
    vec!["wait1".into(), "wait2".into(), "wait3".into()]
}

/// One MPC experiment, read from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    /// Run seed; each stage's annealing seed is derived from it and the
    /// `seed` inside `[anneal]` is ignored.
    #[serde(default)]
    pub seed: u64,
    pub nominal: ForgingStrategy,
    /// Components the controller may change; the rest stay at nominal.
    #[serde(default = "default_free")]
    pub free: Vec<String>,
    #[serde(default)]
    pub disturbance: Disturbance,
    #[serde(default)]
    pub region: RegionOfInterest,
    #[serde(default)]
    pub objective: ObjectiveParams,
    #[serde(default)]
    pub anneal: AnnealConfig,
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self, MpcError> {
        Ok(toml::from_str(text)?)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Checks every part; bound violations are listed together.
    pub fn validate(&self, grid: &Grid, limits: &StrategyLimits) -> Result<(), MpcError> {
        let mut violations = self.nominal.violations(limits);
        let disturbed = ForgingStrategy::from_controls(&self.disturbance.apply(&self.nominal.to_controls()));
        for mut v in disturbed.violations(limits) {
            if !violations.iter().any(|n| n.component == v.component && n.value == v.value) {
                v.component = format!("disturbed {}", v.component);
                violations.push(v);
            }
        }
        if !violations.is_empty() {
            return Err(MpcError::Bounds(violations));
        }
        ControlVector::mask(&self.free)?;
        self.region.validate(grid)?;
        self.objective.validate()?;
        self.anneal.validate()?;
        Ok(())
    }

    /// The Fig. 9 analogue: nominal 1200 °C with 10 s waits; the billet
    /// actually leaves the oven at 1180 °C and waits 30 s after stroke 1.
    pub fn disturbed_oven() -> Self {
        Self {
            name: "disturbed-oven".into(),
            seed: 7,
            nominal: nominal_plan(),
            free: default_free(),
            disturbance: Disturbance { t_oven: Some(1180.0), wait1: Some(30.0), ..Default::default() },
            region: RegionOfInterest::default(),
            objective: ObjectiveParams::default(),
            anneal: AnnealConfig::default(),
        }
    }

    pub fn undisturbed() -> Self {
        Self { name: "undisturbed".into(), disturbance: Disturbance::default(), ..Self::disturbed_oven() }
    }

    /// Oven far too cold for any wait plan to recover.
    pub fn cold_oven() -> Self {
        Self {
            name: "cold-oven".into(),
            disturbance: Disturbance { t_oven: Some(1100.0), ..Default::default() },
            ..Self::disturbed_oven()
        }
    }
}

/// 1200 °C, no transport, 10 s waits, 0.1 s strokes.
pub fn nominal_plan() -> ForgingStrategy {
    ForgingStrategy { t_oven: 1200.0, t_transport: 0.0, wait: [10.0; 3], upsetting: [0.1; 3] }
}

/// Index of a control component by name.
pub fn component_index(name: &str) -> Option<usize> {
    COMPONENTS.iter().position(|c| *c == name)
}
