use std::collections::HashMap;
use std::ops::Range;
use std::time::Instant;

use forge_anneal::{minimize, AnnealConfig, BoxDomain};
use forge_core::{extract_contour, Contour32, Field, Grid, NormalizationConstants};
use forge_dataset::strategy_triplets;
use forge_procsim::{ForgingStrategy, MaterialParams, ProcessRunner, StrategyLimits};
use forge_surrogate::SurrogateModel;
use serde::{Deserialize, Serialize};

use crate::controls::quantize_in_place;
use crate::{objective, violation_count, ControlVector, MpcError, Rollout, Scenario};

/// Per stage: components optimized, then components frozen afterwards.
const STAGES: [(Range<usize>, Range<usize>); 3] = [(0..8, 0..4), (4..8, 4..6), (6..8, 6..8)];
/// Phases the oracle executes after each stage: transport, stroke 1, wait 1;
/// stroke 2, wait 2; stroke 3, wait 3, quench.
const SEGMENTS: [Range<usize>; 3] = [0..3, 3..5, 5..8];

/// Everything fixed about the plant: grid, material, normalization, bounds.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Plant {
    pub grid: Grid,
    pub params: MaterialParams,
    pub constants: NormalizationConstants,
    pub limits: StrategyLimits,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpcStageResult {
    pub stage: usize,
    /// Plan after this stage's optimization.
    pub controls: ControlVector,
    /// Components frozen once this stage is applied.
    pub frozen: [bool; 8],
    /// Surrogate post-wait3 grain field for the plan, µm.
    pub predicted_grain: Field<f64>,
    pub predicted_violations: usize,
    pub objective: f64,
    pub evaluations: usize,
    pub surrogate_calls: usize,
    #[serde(skip)]
    pub wall_clock_s: f64,
}

/// Oracle ground truth for the executed plan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    /// What the plant actually ran, disturbances included.
    pub executed: ForgingStrategy,
    /// Final grain field after the quench, µm.
    pub grain: Field<f64>,
    pub violations: usize,
    pub region_nodes: usize,
    pub objective: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MpcRun {
    pub scenario: String,
    pub seed: u64,
    pub stages: Vec<MpcStageResult>,
    pub plan: ControlVector,
    pub verification: Verification,
}

impl MpcRun {
    pub fn stage_seconds(&self) -> Vec<f64> {
        self.stages.iter().map(|s| s.wall_clock_s).collect()
    }
}

/// Annealing seed for `stage` (1-based) of a run seeded with `seed`.
pub fn stage_seed(seed: u64, stage: usize) -> u64 {
    seed ^ (stage as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs the whole oracle process for a commanded plan under the scenario's
/// disturbance and scores the final grain field.
pub fn verify(scenario: &Scenario, commanded: &[f64; 8], plant: &Plant) -> Result<Verification, MpcError> {
    let executed = ForgingStrategy::from_controls(&scenario.disturbance.apply(commanded));
    let mut runner = ProcessRunner::new(plant.grid, plant.params, executed.t_oven);
    for phase in executed.phases(&plant.params) {
        runner.run_phase(&phase)?;
    }
    Ok(score(scenario, executed, runner, plant))
}

fn score(scenario: &Scenario, executed: ForgingStrategy, runner: ProcessRunner, plant: &Plant) -> Verification {
    let mask = scenario.region.mask(&plant.grid);
    let grain = runner.snapshot().grain;
    let violations = violation_count(&grain, &mask, scenario.objective.threshold);
    Verification {
        objective: objective(&grain, &mask, &executed.wait, &scenario.objective),
        region_nodes: mask.iter().filter(|m| **m).count(),
        feasible: violations == 0,
        executed,
        grain,
        violations,
    }
}

/// Shrinking-horizon MPC over three stages, then oracle verification.
pub fn run_mpc(scenario: &Scenario, model: &SurrogateModel<f32>, plant: &Plant) -> Result<MpcRun, MpcError> {
    scenario.validate(&plant.grid, &plant.limits)?;
    let free = ControlVector::mask(&scenario.free)?;
    let mut plan = ControlVector::new(&scenario.nominal, free).quantized(&plant.limits);
    let mask = scenario.region.mask(&plant.grid);
    let mut frozen = free.map(|f| !f);
    let mut measured: Vec<Contour32> = Vec::new();
    let mut current = None;
    let mut runner: Option<ProcessRunner> = None;
    let mut stages = Vec::with_capacity(3);

    for (k, (optimized, freeze)) in STAGES.iter().enumerate() {
        let stage = k + 1;
        let start = Instant::now();
        let mut rollout = Rollout::new(model, plant.grid, plant.constants, measured.clone(), current.clone());
        let dims: Vec<usize> = optimized.clone().filter(|&i| !frozen[i]).collect();
        let config = AnnealConfig { seed: stage_seed(scenario.seed, stage), ..scenario.anneal.clone() };
        let (values, evaluations) =
            optimize_stage(&mut rollout, &plan.values, &dims, &mask, scenario, &config, plant)
                .map_err(|e| e.at_stage(stage))?;
        plan.values = values;
        let triplets = strategy_triplets(&plan.strategy(), &plant.params);
        let grain = rollout.end_grain(&triplets).map_err(|e| e.at_stage(stage))?;
        let j = objective(&grain, &mask, &plan.waits(), &scenario.objective);
        for i in freeze.clone() {
            frozen[i] = true;
        }
        let wall_clock_s = start.elapsed().as_secs_f64();

        let applied = ForgingStrategy::from_controls(&scenario.disturbance.apply(&plan.values));
        let oracle = runner.get_or_insert_with(|| ProcessRunner::new(plant.grid, plant.params, applied.t_oven));
        let phases = applied.phases(&plant.params);
        for phase in &phases[SEGMENTS[k].clone()] {
            oracle.run_phase(phase).map_err(|e| MpcError::from(e).at_stage(stage))?;
            let snap = oracle.snapshot();
            let contour = extract_contour(&plant.grid, &snap, &plant.constants)?;
            measured.push(Contour32::new(contour.values().iter().map(|&v| v as f32).collect()));
            current = Some(plant.constants.normalize_state(&snap)?.cast::<f32>());
        }

        stages.push(MpcStageResult {
            stage,
            controls: ControlVector { values: plan.values, free: plan.free },
            frozen,
            predicted_violations: violation_count(&grain, &mask, scenario.objective.threshold),
            predicted_grain: grain,
            objective: j,
            evaluations,
            surrogate_calls: rollout.calls(),
            wall_clock_s,
        });
    }

    let executed = ForgingStrategy::from_controls(&scenario.disturbance.apply(&plan.values));
    let verification = score(scenario, executed, runner.expect("three stages ran"), plant);
    Ok(MpcRun { scenario: scenario.name.clone(), seed: scenario.seed, stages, plan, verification })
}

/// Minimizes the predicted objective over `dims`, scoring each candidate on
/// its quantized plan. Returns the quantized best plan and the evaluation
/// count.
fn optimize_stage(
    rollout: &mut Rollout<'_>,
    plan: &[f64; 8],
    dims: &[usize],
    mask: &[bool],
    scenario: &Scenario,
    config: &AnnealConfig,
    plant: &Plant,
) -> Result<([f64; 8], usize), MpcError> {
    if dims.is_empty() {
        return Ok((*plan, 0));
    }
    let mut domain = BoxDomain::new((0..8).map(|i| ControlVector::bounds(i, &plant.limits)).collect());
    for i in (0..8).filter(|i| !dims.contains(i)) {
        domain = domain.freeze(i, plan[i]);
    }
    let mut memo: HashMap<[u64; 8], f64> = HashMap::new();
    let mut failure: Option<MpcError> = None;
    let mut score = |x: &[f64]| -> f64 {
        let mut v: [f64; 8] = x.try_into().expect("eight controls");
        quantize_in_place(&mut v, &plant.limits);
        let key = v.map(f64::to_bits);
        if let Some(j) = memo.get(&key) {
            return *j;
        }
        let strategy = ForgingStrategy::from_controls(&v);
        let triplets = strategy_triplets(&strategy, &plant.params);
        let j = match rollout.end_grain(&triplets) {
            Ok(grain) => objective(&grain, mask, &strategy.wait, &scenario.objective),
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        };
        memo.insert(key, j);
        j
    };
    let outcome = minimize(&mut score, &domain, config);
    if let Some(e) = failure {
        return Err(e);
    }
    let outcome = outcome?;
    let mut best: [f64; 8] = outcome.x.as_slice().try_into().expect("eight controls");
    quantize_in_place(&mut best, &plant.limits);
    Ok((best, outcome.evaluations))
}
