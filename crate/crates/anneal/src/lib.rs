//! Generalized simulated annealing ("dual annealing") over box-constrained
//! variables, with optional frozen dimensions and a final pattern search.

mod config;
mod domain;
mod search;
mod visit;

pub use config::{AnnealConfig, AnnealError};
pub use domain::{reflect, BoxDomain};
pub use search::{acceptance_probability, minimize, pattern_search, AnnealOutcome};
pub use visit::{temperature, VisitingDistribution};
