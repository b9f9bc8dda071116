use forge_core::{Grid, NormalizationConstants};
use forge_procsim::{run_process, MaterialParams, SnapshotSchedule};
use rand::seq::SliceRandom;
use rayon::prelude::*;

use crate::pairs::{build_pairs, RecordLayout, TrainingPair};
use crate::store::{Dataset, DatasetManifest, Splits, DATA_FILE, FORMAT_VERSION};
use crate::{run_rng, sample_strategy, DatasetError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerateConfig {
    pub run_count: usize,
    pub seed: u64,
    /// Worker threads; 0 lets the pool decide.
    pub workers: usize,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        Self {
            run_count: 500,
            seed: 0,
            workers: 0,
        }
    }
}

/// Shuffles run indices with `seed` and cuts them 80/10/10.
pub fn split_runs(run_count: usize, seed: u64) -> Splits {
    let mut runs: Vec<usize> = (0..run_count).collect();
    runs.shuffle(&mut run_rng(seed, usize::MAX));
    let n_train = (run_count as f64 * 0.8).round() as usize;
    let n_val = (run_count as f64 * 0.1).round() as usize;
    let mut take = |n: usize| {
        let mut part: Vec<usize> = runs.drain(..n.min(runs.len())).collect();
        part.sort_unstable();
        part
    };
    let train = take(n_train);
    let validation = take(n_val);
    let test = take(usize::MAX);
    Splits {
        train,
        validation,
        test,
    }
}

/// Simulates one run: sample its plan from `(seed, run)`, run the oracle,
/// build its pairs.
pub fn simulate_run(
    grid: &Grid,
    params: &MaterialParams,
    constants: &NormalizationConstants,
    seed: u64,
    run: usize,
) -> Result<Vec<TrainingPair>, DatasetError> {
    let strategy = sample_strategy(&mut run_rng(seed, run));
    let snaps = run_process(grid, &strategy, params, &SnapshotSchedule::standard())
        .map_err(|source| DatasetError::Simulation { run, source })?;
    build_pairs(grid, &snaps, &strategy, params, constants)
}

/// Generates the whole dataset in memory. Runs are simulated in parallel and
/// assembled in run order, so the result does not depend on `workers`.
pub fn generate(
    config: &GenerateConfig,
    grid: &Grid,
    params: &MaterialParams,
    constants: &NormalizationConstants,
) -> Result<Dataset, DatasetError> {
    constants.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| DatasetError::Pool(e.to_string()))?;
    let runs: Vec<Vec<TrainingPair>> = pool.install(|| {
        (0..config.run_count)
            .into_par_iter()
            .map(|run| simulate_run(grid, params, constants, config.seed, run))
            .collect::<Result<_, _>>()
    })?;
    let manifest = DatasetManifest {
        format_version: FORMAT_VERSION,
        seed: config.seed,
        run_count: config.run_count,
        pairs_per_run: SnapshotSchedule::SNAPSHOTS_PER_RUN,
        record_count: 0,
        grid: *grid,
        normalization: *constants,
        material: *params,
        splits: split_runs(config.run_count, config.seed),
        layout: RecordLayout::standard(grid),
        data_file: DATA_FILE.into(),
        data_sha256: String::new(),
    };
    Ok(Dataset {
        manifest,
        pairs: runs.into_iter().flatten().collect(),
    }
    .seal())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_partition_runs() {
        let s = split_runs(500, 9);
        assert_eq!((s.train.len(), s.validation.len(), s.test.len()), (400, 50, 50));
        let mut all: Vec<usize> = [&s.train[..], &s.validation[..], &s.test[..]].concat();
        all.sort_unstable();
        assert_eq!(all, (0..500).collect::<Vec<_>>());
    }

    #[test]
    fn small_split_counts() {
        let s = split_runs(10, 1);
        assert_eq!((s.train.len(), s.validation.len(), s.test.len()), (8, 1, 1));
    }
}
