use forge_anneal::AnnealError;
use forge_core::CoreError;
use forge_procsim::{BoundViolation, SimError};
use forge_surrogate::SurrogateError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MpcError {
    #[error("scenario out of bounds: {}", list(.0))]
    Bounds(Vec<BoundViolation>),
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("cannot parse scenario: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("stage {stage}: {source}")]
    Stage {
        stage: usize,
        #[source]
        source: Box<MpcError>,
    },
    #[error(transparent)]
    Anneal(#[from] AnnealError),
    #[error(transparent)]
    Surrogate(#[from] SurrogateError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl MpcError {
    pub fn at_stage(self, stage: usize) -> Self {
        MpcError::Stage { stage, source: Box::new(self) }
    }
}

fn list(v: &[BoundViolation]) -> String {
    v.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("; ")
}
