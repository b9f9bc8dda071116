use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnnealError {
    #[error("invalid annealing config: {0}")]
    InvalidConfig(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("every dimension is frozen")]
    AllFrozen,
    #[error("objective was non-finite at {attempts} random starting points")]
    NoFiniteStart { attempts: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    pub max_iterations: usize,
    pub max_evaluations: usize,
    pub initial_temperature: f64,
    /// Visiting parameter q_v.
    pub visit: f64,
    /// Acceptance parameter q_a.
    pub accept: f64,
    pub seed: u64,
    pub local_search: bool,
    /// Re-anneal from a fresh random point once T drops below this fraction of T0.
    pub restart_temperature_ratio: f64,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            max_iterations: 300,
            max_evaluations: 10_000_000,
            initial_temperature: 10_000.0,
            visit: 2.7,
            accept: -10.0,
            seed: 0,
            local_search: true,
            restart_temperature_ratio: 2e-5,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), AnnealError> {
        let bad = |m: String| Err(AnnealError::InvalidConfig(m));
        if !(self.visit > 1.0 && self.visit <= 3.0) {
            return bad(format!("visit parameter {} outside (1, 3]", self.visit));
        }
        // q_v = 3 makes the step scale exponent 1/(3 - q_v) blow up.
        if self.visit == 3.0 {
            return bad("visit parameter 3 gives an unbounded step scale".into());
        }
        if !(self.accept < 1.0) {
            return bad(format!("accept parameter {} must be below 1", self.accept));
        }
        if !(self.initial_temperature > 0.0 && self.initial_temperature.is_finite()) {
            return bad(format!("initial temperature {} must be positive", self.initial_temperature));
        }
        if !(0.0..1.0).contains(&self.restart_temperature_ratio) {
            return bad(format!("restart ratio {} outside [0, 1)", self.restart_temperature_ratio));
        }
        if self.max_evaluations == 0 {
            return bad("evaluation budget is zero".into());
        }
        Ok(())
    }
}
