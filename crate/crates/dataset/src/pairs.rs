use forge_core::{
    extract_contour, Contour32, Grid, NormalizationConstants, State64, CONTOUR_LEN, FIELD_COUNT,
};
use forge_procsim::{ForgingStrategy, MaterialParams, PhaseEvent, PhaseKind, SnapshotSchedule};
use serde::{Deserialize, Serialize};

use crate::DatasetError;

/// Contour history length: snapshots t−3, t−2, t−1.
pub const HISTORY: usize = 3;
/// Transition triplets per input: transitions ending at t−2, t−1, t.
pub const TRIPLETS: usize = 3;
pub const CONTOUR_FLOATS: usize = HISTORY * CONTOUR_LEN;
pub const STRATEGY_FLOATS: usize = TRIPLETS * 3;
pub const TARGET_FLOATS: usize = FIELD_COUNT * 21 * 11;
pub const RECORD_FLOATS: usize = CONTOUR_FLOATS + STRATEGY_FLOATS + TARGET_FLOATS;

/// Idle durations are scaled by this many seconds.
const IDLE_SCALE: f64 = 60.0;
const FLAG_IDLE: f32 = 0.5;
const FLAG_STROKE: f32 = 1.0;

/// One surrogate sample: what is measurable before snapshot `t` and the
/// normalized fields at `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainingPair {
    /// `3 × 31`, oldest first.
    pub contours: Vec<f32>,
    /// `3 × 3`, oldest first.
    pub strategy: [f32; STRATEGY_FLOATS],
    /// `6 × 21 × 11`, field-major.
    pub target: Vec<f32>,
}

impl TrainingPair {
    pub fn to_record(&self, out: &mut Vec<f32>) {
        out.extend_from_slice(&self.contours);
        out.extend_from_slice(&self.strategy);
        out.extend_from_slice(&self.target);
    }

    pub fn from_record(record: &[f32]) -> Self {
        assert_eq!(record.len(), RECORD_FLOATS);
        let (contours, rest) = record.split_at(CONTOUR_FLOATS);
        let (strategy, target) = rest.split_at(STRATEGY_FLOATS);
        Self {
            contours: contours.to_vec(),
            strategy: strategy.try_into().expect("nine floats"),
            target: target.to_vec(),
        }
    }

    /// Network input: contours followed by the strategy window.
    pub fn input(&self) -> impl Iterator<Item = f32> + '_ {
        self.contours.iter().chain(self.strategy.iter()).copied()
    }
}

/// Encodes one process transition as `(idle, upsetting, flag)`.
///
/// Idle phases (transport, wait, quench) give `(duration / 60 s, 0, 0.5)`.
/// A stroke gives `(idle time before it / 60 s, (upsetting time − 0.05 s) /
/// 0.10 s, 1)`. All entries are clamped to `[0, 1]`.
pub fn encode_transition(phase: &PhaseEvent, idle_before: f64) -> [f32; 3] {
    let unit = |x: f64| x.clamp(0.0, 1.0) as f32;
    match phase.kind {
        PhaseKind::Stroke(_) => [
            unit(idle_before / IDLE_SCALE),
            unit((phase.duration - 0.05) / 0.10),
            FLAG_STROKE,
        ],
        PhaseKind::Transport | PhaseKind::Wait(_) | PhaseKind::Quench => {
            [unit(phase.duration / IDLE_SCALE), 0.0, FLAG_IDLE]
        }
    }
}

/// Contour floats of the input for snapshot `t`: contours `t−3..t−1`, zero
/// where the index is negative. `contours[s]` belongs to snapshot `s`.
pub fn contour_window(contours: &[Contour32], t: usize) -> Vec<f32> {
    let mut out = vec![0.0; CONTOUR_FLOATS];
    for slot in 0..HISTORY {
        let back = HISTORY - slot;
        if let Some(s) = t.checked_sub(back) {
            out[slot * CONTOUR_LEN..(slot + 1) * CONTOUR_LEN]
                .copy_from_slice(contours[s].values());
        }
    }
    out
}

/// Strategy floats of the input for snapshot `t`: triplets of the
/// transitions ending at `t−2, t−1, t`, zero where the index is negative.
/// `triplets[s]` is the transition ending at snapshot `s`.
pub fn strategy_window(triplets: &[[f32; 3]], t: usize) -> [f32; STRATEGY_FLOATS] {
    let mut out = [0.0; STRATEGY_FLOATS];
    for slot in 0..TRIPLETS {
        let back = TRIPLETS - 1 - slot;
        if let Some(s) = t.checked_sub(back) {
            out[slot * 3..slot * 3 + 3].copy_from_slice(&triplets[s]);
        }
    }
    out
}

/// Triplets of the transitions ending at each standard snapshot.
pub fn strategy_triplets(strategy: &ForgingStrategy, params: &MaterialParams) -> Vec<[f32; 3]> {
    let mut idle = 0.0;
    strategy
        .phases(params)
        .iter()
        .map(|p| {
            let triplet = encode_transition(p, idle);
            idle = match p.kind {
                PhaseKind::Stroke(_) => 0.0,
                _ => p.duration,
            };
            triplet
        })
        .collect()
}

/// Record geometry, stored in the manifest so readers never hard-code it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordLayout {
    pub dtype: String,
    pub record_floats: usize,
    pub sections: Vec<Section>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub name: String,
    pub offset: usize,
    pub shape: Vec<usize>,
}

impl RecordLayout {
    pub fn standard(grid: &Grid) -> Self {
        let target = vec![FIELD_COUNT, grid.n_axial, grid.n_radial];
        Self {
            dtype: "f32le".into(),
            record_floats: RECORD_FLOATS,
            sections: vec![
                Section {
                    name: "contours".into(),
                    offset: 0,
                    shape: vec![HISTORY, CONTOUR_LEN],
                },
                Section {
                    name: "strategy".into(),
                    offset: CONTOUR_FLOATS,
                    shape: vec![TRIPLETS, 3],
                },
                Section {
                    name: "target".into(),
                    offset: CONTOUR_FLOATS + STRATEGY_FLOATS,
                    shape: target,
                },
            ],
        }
    }
}

/// Turns the snapshots of one run into one pair per snapshot.
pub fn build_pairs(
    grid: &Grid,
    snapshots: &[State64],
    strategy: &ForgingStrategy,
    params: &MaterialParams,
    constants: &NormalizationConstants,
) -> Result<Vec<TrainingPair>, DatasetError> {
    let expected = SnapshotSchedule::SNAPSHOTS_PER_RUN;
    if snapshots.len() != expected {
        return Err(DatasetError::SnapshotCount {
            expected,
            actual: snapshots.len(),
        });
    }
    let contours = snapshots
        .iter()
        .map(|s| extract_contour::<f64>(grid, s, constants).map(|c| cast_contour(&c)))
        .collect::<Result<Vec<_>, _>>()?;
    let triplets = strategy_triplets(strategy, params);
    snapshots
        .iter()
        .enumerate()
        .map(|(t, snap)| {
            let target = constants.normalize_state(snap)?.to_flat();
            Ok(TrainingPair {
                contours: contour_window(&contours, t),
                strategy: strategy_window(&triplets, t),
                target: target.into_iter().map(|x| x as f32).collect(),
            })
        })
        .collect()
}

fn cast_contour(c: &forge_core::Contour64) -> Contour32 {
    Contour32::new(c.values().iter().map(|&x| x as f32).collect())
}

#[cfg(test)]
mod tests {
    use forge_procsim::run_process;

    use super::*;

    fn nominal() -> ForgingStrategy {
        ForgingStrategy {
            t_oven: 1200.0,
            t_transport: 6.0,
            wait: [10.0, 20.0, 30.0],
            upsetting: [0.1; 3],
        }
    }

    fn pairs() -> Vec<TrainingPair> {
        let grid = Grid::default();
        let params = MaterialParams::default();
        let snaps = run_process(&grid, &nominal(), &params, &SnapshotSchedule::standard()).unwrap();
        build_pairs(&grid, &snaps, &nominal(), &params, &NormalizationConstants::default()).unwrap()
    }

    #[test]
    fn first_pair_has_no_history() {
        let p = &pairs()[0];
        assert!(p.contours.iter().all(|&x| x == 0.0));
        assert_eq!(&p.strategy[..6], &[0.0; 6]);
        assert_eq!(p.strategy[6..], [0.1, 0.0, 0.5]);
    }

    #[test]
    fn fourth_pair_sees_snapshots_zero_to_two() {
        let grid = Grid::default();
        let params = MaterialParams::default();
        let c = NormalizationConstants::default();
        let snaps = run_process(&grid, &nominal(), &params, &SnapshotSchedule::standard()).unwrap();
        let p = &build_pairs(&grid, &snaps, &nominal(), &params, &c).unwrap()[3];
        for s in 0..3 {
            let expect = extract_contour::<f64>(&grid, &snaps[s], &c).unwrap();
            let got = &p.contours[s * CONTOUR_LEN..(s + 1) * CONTOUR_LEN];
            for (g, e) in got.iter().zip(expect.values()) {
                assert_eq!(*g, *e as f32);
            }
        }
        // stroke 1, wait 1, stroke 2
        assert_eq!(p.strategy[2], 1.0);
        assert_eq!(p.strategy[3..6], [(10.0f64 / 60.0) as f32, 0.0, 0.5]);
        assert_eq!(p.strategy[6..], [(10.0f64 / 60.0) as f32, 0.5, 1.0]);
    }

    #[test]
    fn every_value_is_in_the_unit_interval() {
        for p in pairs() {
            assert_eq!(p.contours.len(), CONTOUR_FLOATS);
            assert_eq!(p.target.len(), TARGET_FLOATS);
            assert!(p.input().chain(p.target.iter().copied()).all(|x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn record_round_trip() {
        let p = &pairs()[5];
        let mut rec = Vec::new();
        p.to_record(&mut rec);
        assert_eq!(rec.len(), RECORD_FLOATS);
        assert_eq!(&TrainingPair::from_record(&rec), p);
    }

    #[test]
    fn wrong_snapshot_count_is_rejected() {
        let grid = Grid::default();
        let err = build_pairs(
            &grid,
            &[],
            &nominal(),
            &MaterialParams::default(),
            &NormalizationConstants::default(),
        );
        assert!(matches!(err, Err(DatasetError::SnapshotCount { actual: 0, .. })));
    }
}
