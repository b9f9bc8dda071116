use std::path::Path;
use std::time::Instant;

use forge_core::{FieldId, Geometry, Grid, NormalizationConstants, WorkpieceState};
use forge_dataset::{generate, Dataset, GenerateConfig, Split, TrainingPair};
use forge_mpc::{nominal_plan, run_mpc, MpcRun, Plant, RegionOfInterest, Scenario};
use forge_neuro::{train as fit, TrainConfig};
use forge_procsim::{run_process, ForgingStrategy, MaterialParams, SimError, SnapshotSchedule, StrategyLimits};
use forge_surrogate::{evaluate, load_model, samples_from_pairs, save_model, EvalReport, Surrogate32, Surrogate64};
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::output::{guard_file, prepare_dir, read_to_string, sibling, write, write_json, Stamp, STAMP_FILE};
use crate::render::{parse_state_csv, render_field, state_csv};
use crate::CliError;

pub const SNAPSHOT_LABELS: [&str; 8] =
    ["transport", "stroke1", "wait1", "stroke2", "wait2", "stroke3", "wait3", "quench"];
pub const MODEL_FILE: &str = "model.bin";

#[derive(Debug, Serialize)]
pub struct SnapshotSummary {
    pub index: usize,
    pub after: &'static str,
    /// Mean grain over the region of interest without its margin, µm.
    pub core_mean_grain_um: f64,
    pub temperature_min: f64,
    pub temperature_max: f64,
}

#[derive(Debug, Serialize)]
pub struct SimulateSummary {
    pub strategy: ForgingStrategy,
    pub snapshots: Vec<SnapshotSummary>,
}

fn load_strategy(path: &Path) -> Result<ForgingStrategy, CliError> {
    let text = read_to_string(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        Ok(serde_json::from_str(&text)?)
    } else {
        Ok(toml::from_str(&text)?)
    }
}

fn triple(v: &[f64], what: &str) -> Result<[f64; 3], CliError> {
    v.try_into().map_err(|_| CliError::new("usage", format!("--{what} takes exactly three values")))
}

pub fn simulate(a: &SimulateArgs) -> Result<SimulateSummary, CliError> {
    let mut s = match &a.strategy {
        Some(p) => load_strategy(p)?,
        None => nominal_plan(),
    };
    if let Some(v) = a.t_oven {
        s.t_oven = v;
    }
    if let Some(v) = a.t_transport {
        s.t_transport = v;
    }
    if let Some(v) = &a.wait {
        s.wait = triple(v, "wait")?;
    }
    if let Some(v) = &a.upsetting {
        s.upsetting = triple(v, "upsetting")?;
    }
    let violations = s.violations(&StrategyLimits::TABLE);
    if !violations.is_empty() {
        return Err(SimError::InvalidStrategy(violations).into());
    }
    prepare_dir(&a.out, a.force)?;

    let grid = Grid::default();
    let params = MaterialParams::default();
    let constants = NormalizationConstants::default();
    let snapshots = run_process(&grid, &s, &params, &SnapshotSchedule::standard())?;
    let core = RegionOfInterest { margin: 0, ..RegionOfInterest::default() }.mask(&grid);
    let core_n = core.iter().filter(|m| **m).count() as f64;
    let mut blob = Vec::new();
    let mut summaries = Vec::new();
    for (k, snap) in snapshots.iter().enumerate() {
        for v in constants.normalize_state(snap)?.to_flat() {
            blob.extend_from_slice(&(v as f32).to_le_bytes());
        }
        write(&a.out.join(format!("snapshot_{k}.csv")), state_csv(&grid, snap))?;
        let grain = snap.grain.as_slice().iter().zip(&core).filter(|(_, m)| **m).map(|(g, _)| g).sum::<f64>();
        summaries.push(SnapshotSummary {
            index: k,
            after: SNAPSHOT_LABELS[k],
            core_mean_grain_um: grain / core_n,
            temperature_min: snap.temperature.min(),
            temperature_max: snap.temperature.max(),
        });
    }
    write(&a.out.join("snapshots.bin"), blob)?;
    let summary = SimulateSummary { strategy: s, snapshots: summaries };
    write_json(&a.out.join("summary.json"), &summary)?;
    Stamp::new("simulate", None, &summary.strategy)?.write_to(&a.out.join(STAMP_FILE))?;
    Ok(summary)
}

pub fn gen_dataset(a: &GenDatasetArgs) -> Result<Dataset, CliError> {
    prepare_dir(&a.out, a.force)?;
    let config = GenerateConfig { run_count: a.runs, seed: a.seed, workers: a.workers };
    let ds = generate(&config, &Grid::default(), &MaterialParams::default(), &NormalizationConstants::default())?;
    ds.write(&a.out)?;
    Stamp::new("gen-dataset", Some(a.seed), a)?.write_to(&a.out.join(STAMP_FILE))?;
    Ok(ds)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossEntry {
    pub epoch: usize,
    pub train_mae: f64,
    pub validation_mae: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LossCurveFile {
    /// One entry per completed epoch; empty when no epoch ran.
    pub epochs: Vec<LossEntry>,
}

pub fn train(a: &TrainArgs) -> Result<LossCurveFile, CliError> {
    let ds = Dataset::read(&a.dataset)?;
    prepare_dir(&a.out, a.force)?;
    let tr = samples_from_pairs::<f64>(&ds.split(Split::Train));
    let va = samples_from_pairs::<f64>(&ds.split(Split::Validation));
    let mut model = Surrogate64::standard(a.seed);
    model.training_seed = Some(a.seed);
    let config = TrainConfig { epochs: a.epochs, batch_size: a.batch_size, lr: a.lr, seed: a.seed };
    let mut epochs = Vec::with_capacity(a.epochs);
    let start = Instant::now();
    fit(&mut model, &tr, (!va.is_empty()).then_some(&va), &config, |r| {
        if !a.quiet {
            eprintln!(
                "epoch {:>4}  train {:.5}  validation {}  {:.0}s",
                r.epoch,
                r.train_mae,
                r.validation_mae.map_or("-".into(), |v| format!("{v:.5}")),
                start.elapsed().as_secs_f64()
            );
        }
        epochs.push(LossEntry { epoch: r.epoch, train_mae: r.train_mae, validation_mae: r.validation_mae });
    })?;
    save_model(&model, &ds.manifest.normalization, &a.out.join(MODEL_FILE))?;
    let curve = LossCurveFile { epochs };
    write_json(&a.out.join("loss.json"), &curve)?;
    Stamp::new("train", Some(a.seed), a)?.write_to(&a.out.join(STAMP_FILE))?;
    Ok(curve)
}

fn load_inference_model(path: &Path) -> Result<(Surrogate32, NormalizationConstants), CliError> {
    let (model, header) = load_model::<f32>(path)?;
    Ok((model, header.normalization))
}

pub fn eval(a: &EvalArgs) -> Result<EvalReport, CliError> {
    if let Some(out) = &a.out {
        guard_file(out, a.force)?;
    }
    let ds = Dataset::read(&a.dataset)?;
    let (model, constants) = load_inference_model(&a.model)?;
    if constants != ds.manifest.normalization {
        return Err(CliError::new("model", "model and dataset use different normalization constants"));
    }
    let split = match a.split {
        SplitArg::Train => Split::Train,
        SplitArg::Validation => Split::Validation,
        SplitArg::Test => Split::Test,
    };
    let report = evaluate(&model, &ds.split(split), &constants)?;
    if let Some(out) = &a.out {
        write_json(out, &report)?;
    }
    Ok(report)
}

#[derive(Debug, Deserialize)]
struct PredictInput {
    contours: Vec<f32>,
    strategy: Vec<f32>,
}

/// Predicted fields as CSV in physical units.
pub fn predict(a: &PredictArgs) -> Result<String, CliError> {
    if let Some(out) = &a.out {
        guard_file(out, a.force)?;
    }
    let (contours, strategy) = match (&a.input, &a.dataset, a.pair) {
        (Some(p), _, _) => {
            let i: PredictInput = serde_json::from_str(&read_to_string(p)?)?;
            (i.contours, i.strategy)
        }
        (None, Some(d), Some(n)) => {
            let ds = Dataset::read(d)?;
            let p: &TrainingPair = ds
                .pairs
                .get(n)
                .ok_or_else(|| CliError::new("usage", format!("pair {n} out of range (dataset has {})", ds.pairs.len())))?;
            (p.contours.clone(), p.strategy.to_vec())
        }
        _ => return Err(CliError::new("usage", "pass --input, or --dataset with --pair")),
    };
    let (model, constants) = load_inference_model(&a.model)?;
    let start = Instant::now();
    let stack = model.predict(&contours, &strategy)?;
    eprintln!("predict {:.3} ms", start.elapsed().as_secs_f64() * 1e3);
    let grid = Grid::default();
    let physical = constants.denormalize_stack(&stack.cast::<f64>())?;
    let csv = state_csv(&grid, &WorkpieceState::from_stack(physical, Geometry::initial(&grid)));
    if let Some(out) = &a.out {
        write(out, &csv)?;
    }
    Ok(csv)
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub stage_seconds: Vec<f64>,
    pub total_seconds: f64,
}

pub fn mpc_run(a: &MpcRunArgs) -> Result<MpcRun, CliError> {
    let mut scenario = Scenario::from_toml(&read_to_string(&a.scenario)?)?;
    if let Some(seed) = a.seed {
        scenario.seed = seed;
    }
    let (model, constants) = load_inference_model(&a.model)?;
    let plant = Plant { constants, ..Plant::default() };
    scenario.validate(&plant.grid, &plant.limits)?;
    prepare_dir(&a.out, a.force)?;
    let start = Instant::now();
    let run = run_mpc(&scenario, &model, &plant)?;
    let total_seconds = start.elapsed().as_secs_f64();
    write_json(&a.out.join("trace.json"), &run)?;
    write_json(&a.out.join("timing.json"), &Timing { stage_seconds: run.stage_seconds(), total_seconds })?;
    let mask = scenario.region.mask(&plant.grid);
    let threshold = Some(scenario.objective.threshold);
    let final_img = render_field(&run.verification.grain, FieldId::Grain, &constants, threshold, Some(&mask), 8);
    write_rendered(&a.out.join("verification_grain.pgm"), &final_img)?;
    for s in &run.stages {
        let img = render_field(&s.predicted_grain, FieldId::Grain, &constants, threshold, Some(&mask), 8);
        write_rendered(&a.out.join(format!("stage{}_predicted_grain.pgm", s.stage)), &img)?;
    }
    Stamp::new("mpc-run", Some(scenario.seed), &scenario)?.write_to(&a.out.join(STAMP_FILE))?;
    Ok(run)
}

fn write_rendered(image: &Path, r: &crate::render::Rendered) -> Result<(), CliError> {
    write(image, &r.image)?;
    if let Some(o) = &r.overlay {
        write(&image.with_extension("overlay.pgm"), o)?;
    }
    write(&image.with_extension("csv"), &r.csv)
}

#[derive(Debug, Serialize)]
pub struct RenderSummary {
    pub image: String,
    pub overlay: Option<String>,
    pub csv: String,
    pub overlay_nodes: usize,
}

pub fn render(a: &RenderArgs) -> Result<RenderSummary, CliError> {
    let id: FieldId = a.field.parse()?;
    let grid = Grid::default();
    let src = a.run.join(format!("snapshot_{}.csv", a.snapshot));
    if !src.exists() {
        return Err(CliError::new("usage", format!("snapshot {} not found at {}", a.snapshot, src.display())));
    }
    let overlay_path = a.out.with_extension("overlay.pgm");
    let csv_path = a.out.with_extension("csv");
    for p in [&a.out, &overlay_path, &csv_path] {
        guard_file(p, a.force)?;
    }
    let stack = parse_state_csv(&grid, &read_to_string(&src)?)?;
    let mask = a.region.then(|| RegionOfInterest::default().mask(&grid));
    let r = render_field(stack.field(id), id, &NormalizationConstants::default(), a.threshold, mask.as_deref(), a.scale);
    write_rendered(&a.out, &r)?;
    let stamp_path = sibling(&a.out, ".stamp.json");
    Stamp::new("render", None, a)?.write_to(&stamp_path)?;
    Ok(RenderSummary {
        image: a.out.display().to_string(),
        overlay: r.overlay.as_ref().map(|_| overlay_path.display().to_string()),
        csv: csv_path.display().to_string(),
        overlay_nodes: r.overlay_nodes,
    })
}
