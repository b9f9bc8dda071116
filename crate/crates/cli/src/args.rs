use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "forgectl", version, about = "Hot-upsetting oracle, field surrogate and controller")]
#[command(args_override_self = true)]
pub struct Cli {
    /// TOML file with one table per subcommand; flags win over its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the physics oracle for one strategy and write its 8 snapshots.
    Simulate(SimulateArgs),
    /// Generate a training dataset of oracle runs.
    GenDataset(GenDatasetArgs),
    /// Train the surrogate on a dataset.
    Train(TrainArgs),
    /// Per-field error report of a model on a dataset split.
    Eval(EvalArgs),
    /// Predict the fields for one input.
    Predict(PredictArgs),
    /// Run a controller scenario and verify it on the oracle.
    MpcRun(MpcRunArgs),
    /// Render one field of a simulated snapshot as a graymap.
    Render(RenderArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::GenDataset(_) => "gen-dataset",
            Command::Train(_) => "train",
            Command::Eval(_) => "eval",
            Command::Predict(_) => "predict",
            Command::MpcRun(_) => "mpc-run",
            Command::Render(_) => "render",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// TOML or JSON strategy file; individual flags override its values.
    #[arg(long)]
    pub strategy: Option<PathBuf>,
    /// Oven temperature, °C.
    #[arg(long)]
    pub t_oven: Option<f64>,
    /// Transport time, s.
    #[arg(long)]
    pub t_transport: Option<f64>,
    /// Three waits, s, comma separated.
    #[arg(long, value_delimiter = ',', action = clap::ArgAction::Set)]
    pub wait: Option<Vec<f64>>,
    /// Three upsetting times, s, comma separated.
    #[arg(long, value_delimiter = ',', action = clap::ArgAction::Set)]
    pub upsetting: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenDatasetArgs {
    #[arg(long, default_value_t = 500)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, env = "FORGE_WORKERS", default_value_t = 0)]
    #[serde(skip)]
    pub workers: usize,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TrainArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long, default_value_t = 128)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// Seeds both the initialization and the shuffling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory for model.bin, loss.json and stamp.json.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
    #[arg(long)]
    #[serde(skip)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitArg {
    Train,
    Validation,
    Test,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvalArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, value_enum, default_value_t = SplitArg::Test)]
    pub split: SplitArg,
    /// Also write the report as JSON.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// JSON file with `contours` (93 floats) and `strategy` (9 floats).
    #[arg(long, conflicts_with_all = ["dataset", "pair"])]
    pub input: Option<PathBuf>,
    /// Take the input of record `--pair` from this dataset.
    #[arg(long, requires = "pair")]
    pub dataset: Option<PathBuf>,
    #[arg(long)]
    pub pair: Option<usize>,
    /// CSV of the predicted fields in physical units; stdout if absent.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct MpcRunArgs {
    #[arg(long)]
    pub scenario: PathBuf,
    #[arg(long)]
    pub model: PathBuf,
    /// Overrides the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RenderArgs {
    /// Output directory of `simulate`.
    #[arg(long)]
    pub run: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub snapshot: usize,
    #[arg(long, default_value = "grain")]
    pub field: String,
    /// Mark nodes above this value in an overlay image.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Restrict the overlay to the default region of interest and its margin.
    #[arg(long)]
    pub region: bool,
    /// Pixels per node along each axis.
    #[arg(long, default_value_t = 1)]
    pub scale: usize,
    /// Image path; the overlay and CSV twin are written next to it.
    #[arg(long)]
    #[serde(skip)]
    pub out: PathBuf,
    #[arg(long)]
    #[serde(skip)]
    pub force: bool,
}
