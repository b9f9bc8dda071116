use std::collections::HashMap;

use forge_core::{contour_nodes, Contour32, Field, FieldId, FieldStack, Grid, NormalizationConstants};
use forge_dataset::{contour_window, strategy_window};
use forge_surrogate::SurrogateModel;

use crate::MpcError;

/// Snapshot index of the post-wait3 state, the end of every rollout.
pub const END_SNAPSHOT: usize = 6;

/// Surrogate rollout from a fixed measured prefix, with predictions memoized
/// on the transition triplets they depend on.
///
/// The prediction for snapshot `t` is a function of the measured contours and
/// of triplets `0..=t` only, so candidates sharing a plan prefix share work.
pub struct Rollout<'a> {
    model: &'a SurrogateModel<f32>,
    grid: Grid,
    constants: NormalizationConstants,
    measured: Vec<Contour32>,
    current: Option<Vec<f32>>,
    cache: HashMap<Vec<u32>, Vec<f32>>,
    calls: usize,
}

impl<'a> Rollout<'a> {
    /// `measured[s]` is the normalized contour of snapshot `s`; `current` the
    /// normalized state of the last measured snapshot, if any.
    pub fn new(
        model: &'a SurrogateModel<f32>,
        grid: Grid,
        constants: NormalizationConstants,
        measured: Vec<Contour32>,
        current: Option<FieldStack<f32>>,
    ) -> Self {
        Self {
            model,
            grid,
            constants,
            measured,
            current: current.map(|s| s.to_flat()),
            cache: HashMap::new(),
            calls: 0,
        }
    }

    /// Surrogate calls made so far (cache hits excluded).
    pub fn calls(&self) -> usize {
        self.calls
    }

    /// Snapshots still to be predicted.
    pub fn remaining(&self) -> usize {
        (END_SNAPSHOT + 1).saturating_sub(self.measured.len())
    }

    /// Normalized post-wait3 prediction for the plan encoded by `triplets`
    /// (one per transition, `triplets[s]` ending at snapshot `s`).
    pub fn end_state_normalized(&mut self, triplets: &[[f32; 3]]) -> Result<Vec<f32>, MpcError> {
        if self.remaining() == 0 {
            return self
                .current
                .clone()
                .ok_or_else(|| MpcError::Scenario("empty horizon without a current state".into()));
        }
        let nodes = contour_nodes(&self.grid);
        let mut contours = self.measured.clone();
        let mut key = Vec::with_capacity(3 * (END_SNAPSHOT + 1));
        for triplet in &triplets[..self.measured.len()] {
            key.extend(triplet.map(f32::to_bits));
        }
        let mut last = Vec::new();
        for t in self.measured.len()..=END_SNAPSHOT {
            key.extend(triplets[t].map(f32::to_bits));
            let pred = match self.cache.get(&key) {
                Some(p) => p.clone(),
                None => {
                    let p = self
                        .model
                        .predict_flat(&contour_window(&contours, t), &strategy_window(triplets, t))?;
                    self.calls += 1;
                    self.cache.insert(key.clone(), p.clone());
                    p
                }
            };
            let temp = &pred[FieldId::Temperature.channel() * self.grid.node_count()..][..self.grid.node_count()];
            contours.push(Contour32::new(nodes.iter().map(|&(r, c)| temp[self.grid.index(r, c)]).collect()));
            last = pred;
        }
        Ok(last)
    }

    /// Post-wait3 prediction in physical units.
    pub fn end_state(&mut self, triplets: &[[f32; 3]]) -> Result<FieldStack<f64>, MpcError> {
        let flat = self.end_state_normalized(triplets)?;
        let stack = FieldStack::from_flat(&self.grid, &flat)?.cast::<f64>();
        Ok(self.constants.denormalize_stack(&stack)?)
    }

    /// Predicted post-wait3 grain field, µm.
    pub fn end_grain(&mut self, triplets: &[[f32; 3]]) -> Result<Field<f64>, MpcError> {
        Ok(self.end_state(triplets)?.field(FieldId::Grain).clone())
    }
}

/// One-shot rollout: the post-wait3 state in physical units and the number of
/// surrogate calls it took.
pub fn rollout(
    model: &SurrogateModel<f32>,
    grid: Grid,
    constants: NormalizationConstants,
    measured: Vec<Contour32>,
    current: Option<FieldStack<f32>>,
    triplets: &[[f32; 3]],
) -> Result<(FieldStack<f64>, usize), MpcError> {
    let mut r = Rollout::new(model, grid, constants, measured, current);
    let state = r.end_state(triplets)?;
    Ok((state, r.calls()))
}
