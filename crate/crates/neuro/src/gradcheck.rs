use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{mae, mae_grad, Mode, NeuroError, Tensor, Trainable};

/// Result of comparing backprop against central differences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradCheck {
    pub checked: usize,
    pub max_rel_error: f64,
    /// `(buffer, index, analytic, numeric)` of the worst parameter.
    pub worst: Option<(usize, usize, f64, f64)>,
}

/// Relative error `|a − n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor)
}

/// Uniformly random `(buffer, index)` parameter positions.
pub fn random_picks<M: Trainable<f64>, R: Rng + ?Sized>(
    model: &M,
    count: usize,
    rng: &mut R,
) -> Vec<(usize, usize)> {
    let sizes: Vec<usize> = model.params().iter().map(|p| p.len()).collect();
    let total: usize = sizes.iter().sum();
    (0..count)
        .map(|_| {
            let mut k = rng.random_range(0..total);
            let mut buf = 0;
            while k >= sizes[buf] {
                k -= sizes[buf];
                buf += 1;
            }
            (buf, k)
        })
        .collect()
}

fn loss<M: Trainable<f64>>(
    model: &M,
    x: &Tensor<f64>,
    y: &Tensor<f64>,
    mode: Mode,
    seed: u64,
) -> Result<f64, NeuroError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (out, _) = model.forward_batch(x, mode, &mut rng)?;
    Ok(mae(out.data(), y.data()))
}

/// Compares the MAE gradient at `picks` with central differences of step
/// `h`. Every evaluation reuses the dropout stream seeded by `seed`.
pub fn gradient_check<M: Trainable<f64>>(
    model: &mut M,
    x: &Tensor<f64>,
    y: &Tensor<f64>,
    picks: &[(usize, usize)],
    h: f64,
    mode: Mode,
    seed: u64,
    floor: f64,
) -> Result<GradCheck, NeuroError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (out, cache) = model.forward_batch(x, mode, &mut rng)?;
    let mut grads = model.zero_grads();
    model.backward_batch(&cache, &mae_grad(&out, y.data()), &mut grads);

    let mut report = GradCheck {
        checked: 0,
        max_rel_error: 0.0,
        worst: None,
    };
    for &(buf, idx) in picks {
        let original = model.params()[buf][idx];
        model.params_mut()[buf][idx] = original + h;
        let plus = loss(model, x, y, mode, seed)?;
        model.params_mut()[buf][idx] = original - h;
        let minus = loss(model, x, y, mode, seed)?;
        model.params_mut()[buf][idx] = original;
        let numeric = (plus - minus) / (2.0 * h);
        let analytic = grads[buf][idx];
        let err = relative_error(analytic, numeric, floor);
        report.checked += 1;
        if err > report.max_rel_error || report.worst.is_none() {
            report.max_rel_error = report.max_rel_error.max(err);
            report.worst = Some((buf, idx, analytic, numeric));
        }
    }
    Ok(report)
}
