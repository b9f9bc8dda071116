use std::fmt;
use std::time::Instant;

use forge_core::{FieldId, NormalizationConstants, FIELD_COUNT};
use forge_dataset::{TrainingPair, CONTOUR_FLOATS, TARGET_FLOATS};
use forge_neuro::Float;
use serde::{Deserialize, Serialize};

use crate::{SurrogateError, SurrogateModel};

/// Anything that maps one pair's inputs to the flat normalized fields.
pub trait FieldPredictor {
    fn predict_fields(&self, contours: &[f32], strategy: &[f32]) -> Result<Vec<f32>, SurrogateError>;
}

impl<T: Float> FieldPredictor for SurrogateModel<T> {
    fn predict_fields(&self, contours: &[f32], strategy: &[f32]) -> Result<Vec<f32>, SurrogateError> {
        let c: Vec<T> = contours.iter().map(|&v| T::of(v as f64)).collect();
        let s: Vec<T> = strategy.iter().map(|&v| T::of(v as f64)).collect();
        Ok(self
            .predict_flat(&c, &s)?
            .into_iter()
            .map(|v| v.to_f64_lossy() as f32)
            .collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldError {
    pub field: FieldId,
    pub unit: String,
    /// Mean over pairs of the per-pair MAE, physical units.
    pub mae: f64,
    /// Standard deviation over pairs of the per-pair MAE.
    pub mae_std: f64,
    /// `mae / range · 100`.
    pub percent: f64,
    pub percent_std: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatencyStats {
    pub calls: usize,
    pub median_ms: f64,
    pub mean_ms: f64,
    pub max_ms: f64,
}

impl LatencyStats {
    pub fn from_samples(mut ms: Vec<f64>) -> Self {
        ms.sort_by(f64::total_cmp);
        let n = ms.len();
        let median = match n {
            0 => 0.0,
            _ if n % 2 == 1 => ms[n / 2],
            _ => 0.5 * (ms[n / 2 - 1] + ms[n / 2]),
        };
        Self {
            calls: n,
            median_ms: median,
            mean_ms: ms.iter().sum::<f64>() / n.max(1) as f64,
            max_ms: ms.last().copied().unwrap_or(0.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub pairs: usize,
    pub fields: Vec<FieldError>,
    pub latency: LatencyStats,
}

impl EvalReport {
    pub fn field(&self, id: FieldId) -> &FieldError {
        &self.fields[id.channel()]
    }

    /// Largest percentage MAE over the six fields.
    pub fn worst_percent(&self) -> f64 {
        self.fields.iter().map(|f| f.percent).fold(0.0, f64::max)
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<12} {:>22} {:>16}", "field", "MAE ± std", "% of range")?;
        for e in &self.fields {
            let abs = format!("{:.4} ± {:.4} {}", e.mae, e.mae_std, e.unit);
            let pct = format!("{:.2} ± {:.2}", e.percent, e.percent_std);
            writeln!(f, "{:<12} {:>22} {:>16}", e.field.name(), abs, pct)?;
        }
        write!(
            f,
            "{} pairs; predict median {:.3} ms, mean {:.3} ms, max {:.3} ms",
            self.pairs, self.latency.median_ms, self.latency.mean_ms, self.latency.max_ms
        )
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

/// Per-field errors over `pairs`, denormalized with `constants`, and the
/// wall-clock time of every predict call.
pub fn evaluate<P: FieldPredictor + ?Sized>(
    predictor: &P,
    pairs: &[&TrainingPair],
    constants: &NormalizationConstants,
) -> Result<EvalReport, SurrogateError> {
    if pairs.is_empty() {
        return Err(SurrogateError::EmptySplit);
    }
    let per_field = TARGET_FLOATS / FIELD_COUNT;
    let mut errors = vec![Vec::with_capacity(pairs.len()); FIELD_COUNT];
    let mut latency = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let start = Instant::now();
        let pred = predictor.predict_fields(&pair.contours[..CONTOUR_FLOATS], &pair.strategy)?;
        latency.push(start.elapsed().as_secs_f64() * 1e3);
        for id in FieldId::ALL {
            let b = constants.bounds(id);
            let range = id.channel() * per_field..(id.channel() + 1) * per_field;
            let sum: f64 = pred[range.clone()]
                .iter()
                .zip(&pair.target[range])
                .map(|(&p, &t)| (b.denormalize(p as f64) - b.denormalize(t as f64)).abs())
                .sum();
            errors[id.channel()].push(sum / per_field as f64);
        }
    }
    let fields = FieldId::ALL
        .iter()
        .map(|&id| {
            let range = constants.bounds(id).range;
            let (mae, mae_std) = mean_std(&errors[id.channel()]);
            FieldError {
                field: id,
                unit: id.unit().into(),
                mae,
                mae_std,
                percent: mae / range * 100.0,
                percent_std: mae_std / range * 100.0,
            }
        })
        .collect();
    Ok(EvalReport {
        pairs: pairs.len(),
        fields,
        latency: LatencyStats::from_samples(latency),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even_counts() {
        let odd = LatencyStats::from_samples(vec![3.0, 1.0, 2.0]);
        assert_eq!((odd.median_ms, odd.max_ms, odd.mean_ms), (2.0, 3.0, 2.0));
        assert_eq!(LatencyStats::from_samples(vec![4.0, 1.0, 2.0, 3.0]).median_ms, 2.5);
        assert_eq!(LatencyStats::from_samples(Vec::new()).calls, 0);
    }
}
