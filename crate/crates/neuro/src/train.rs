use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Float, Mode, NeuroError, Tensor};

/// A model trainable with [`train`]: a batch of flat input rows in, a batch
/// of flat output rows out.
pub trait Trainable<T: Float> {
    type Cache;

    /// Parameter buffers in a fixed order.
    fn params(&self) -> Vec<&[T]>;
    fn params_mut(&mut self) -> Vec<&mut [T]>;

    /// Raw (unpost-processed) output `[batch, width]`.
    fn forward_batch<R: Rng + ?Sized>(
        &self,
        x: &Tensor<T>,
        mode: Mode,
        rng: &mut R,
    ) -> Result<(Tensor<T>, Self::Cache), NeuroError>;

    /// Accumulates parameter gradients for the output gradient `dy`.
    fn backward_batch(&self, cache: &Self::Cache, dy: &Tensor<T>, grads: &mut [Vec<T>]);

    /// Post-processing applied at inference but not during training.
    fn finish(&self, _y: &mut Tensor<T>) {}

    fn zero_grads(&self) -> Vec<Vec<T>> {
        self.params()
            .iter()
            .map(|p| vec![T::zero(); p.len()])
            .collect()
    }

    fn param_count(&self) -> usize {
        self.params().iter().map(|p| p.len()).sum()
    }
}

/// Mean absolute error over every element.
pub fn mae<T: Float>(pred: &[T], target: &[T]) -> T {
    assert_eq!(pred.len(), target.len());
    let sum = pred
        .iter()
        .zip(target)
        .fold(T::zero(), |acc, (&p, &t)| acc + (p - t).abs());
    sum / T::of(pred.len() as f64)
}

/// Subgradient of [`mae`] with respect to `pred`; `sign(0) = 0`.
pub fn mae_grad<T: Float>(pred: &Tensor<T>, target: &[T]) -> Tensor<T> {
    let scale = T::one() / T::of(pred.len() as f64);
    let mut g = pred.clone();
    for (d, &t) in g.data_mut().iter_mut().zip(target) {
        let diff = *d - t;
        *d = if diff > T::zero() {
            scale
        } else if diff < T::zero() {
            -scale
        } else {
            T::zero()
        };
    }
    g
}

/// Adam with bias correction.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam<T> {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    /// Steps taken so far.
    pub t: u64,
    m: Vec<Vec<T>>,
    v: Vec<Vec<T>>,
}

impl<T: Float> Adam<T> {
    pub fn new(lr: f64, sizes: &[usize]) -> Self {
        Self {
            lr,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            t: 0,
            m: sizes.iter().map(|&n| vec![T::zero(); n]).collect(),
            v: sizes.iter().map(|&n| vec![T::zero(); n]).collect(),
        }
    }

    pub fn step(&mut self, params: Vec<&mut [T]>, grads: &[Vec<T>]) {
        self.t += 1;
        let (b1, b2) = (T::of(self.beta1), T::of(self.beta2));
        let c1 = T::one() - T::of(self.beta1.powi(self.t as i32));
        let c2 = T::one() - T::of(self.beta2.powi(self.t as i32));
        let (lr, eps) = (T::of(self.lr), T::of(self.eps));
        let one = T::one();
        for (((p, g), m), v) in params.into_iter().zip(grads).zip(&mut self.m).zip(&mut self.v) {
            for i in 0..p.len() {
                let gi = g[i];
                m[i] = b1 * m[i] + (one - b1) * gi;
                v[i] = b2 * v[i] + (one - b2) * gi * gi;
                let m_hat = m[i] / c1;
                let v_hat = v[i] / c2;
                p[i] = p[i] - lr * m_hat / (v_hat.sqrt() + eps);
            }
        }
    }
}

/// Paired input and target rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples<T> {
    pub inputs: Vec<T>,
    pub targets: Vec<T>,
    pub input_width: usize,
    pub target_width: usize,
}

impl<T: Float> Samples<T> {
    pub fn new(input_width: usize, target_width: usize) -> Self {
        Self {
            inputs: Vec::new(),
            targets: Vec::new(),
            input_width,
            target_width,
        }
    }

    pub fn push(&mut self, input: impl IntoIterator<Item = T>, target: impl IntoIterator<Item = T>) {
        self.inputs.extend(input);
        self.targets.extend(target);
        assert_eq!(self.inputs.len(), self.len() * self.input_width);
        assert_eq!(self.targets.len(), self.len() * self.target_width);
    }

    pub fn len(&self) -> usize {
        self.inputs.len() / self.input_width
    }

    pub fn is_empty(&self) -> bool {
        self.inputs.is_empty()
    }

    /// Gathers rows `idx` into `[n, input_width]` and `[n, target_width]`.
    pub fn batch(&self, idx: &[usize]) -> (Tensor<T>, Tensor<T>) {
        let gather = |src: &[T], w: usize| {
            let mut out = Vec::with_capacity(idx.len() * w);
            for &i in idx {
                out.extend_from_slice(&src[i * w..(i + 1) * w]);
            }
            Tensor::from_vec(&[idx.len(), w], out).expect("rows of equal width")
        };
        (
            gather(&self.inputs, self.input_width),
            gather(&self.targets, self.target_width),
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub lr: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 1000,
            batch_size: 128,
            lr: 1e-3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean training loss over the epoch's batches (dropout active).
    pub train_mae: f64,
    pub validation_mae: Option<f64>,
}

/// Per-epoch losses; entry 0 is the untrained baseline in Eval mode.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct LossCurve {
    pub train: Vec<f64>,
    pub validation: Vec<f64>,
}

/// Eval-mode MAE of the post-processed output over all of `samples`.
pub fn evaluate_mae<T: Float, M: Trainable<T>>(
    model: &M,
    samples: &Samples<T>,
    batch_size: usize,
) -> Result<f64, NeuroError> {
    let idx: Vec<usize> = (0..samples.len()).collect();
    let mut sum = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for chunk in idx.chunks(batch_size.max(1)) {
        let (x, y) = samples.batch(chunk);
        let (mut out, _) = model.forward_batch(&x, Mode::Eval, &mut rng)?;
        model.finish(&mut out);
        sum += mae(out.data(), y.data()).to_f64_lossy() * chunk.len() as f64;
    }
    Ok(sum / samples.len().max(1) as f64)
}

/// Mini-batch Adam on MAE. Batches are drawn from a per-epoch shuffle keyed
/// to `config.seed`; the same seed and data give the same curve and weights.
pub fn train<T: Float, M: Trainable<T>>(
    model: &mut M,
    train_set: &Samples<T>,
    validation: Option<&Samples<T>>,
    config: &TrainConfig,
    mut on_epoch: impl FnMut(&EpochRecord),
) -> Result<LossCurve, NeuroError> {
    if train_set.is_empty() {
        return Err(NeuroError::EmptyDataset);
    }
    let bs = config.batch_size.max(1);
    let mut curve = LossCurve {
        train: vec![evaluate_mae(model, train_set, bs)?],
        validation: Vec::new(),
    };
    if let Some(v) = validation {
        curve.validation.push(evaluate_mae(model, v, bs)?);
    }
    let sizes: Vec<usize> = model.params().iter().map(|p| p.len()).collect();
    let mut adam = Adam::new(config.lr, &sizes);
    let mut grads = model.zero_grads();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..train_set.len()).collect();

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for (batch, chunk) in order.chunks(bs).enumerate() {
            let (x, y) = train_set.batch(chunk);
            let (out, cache) = model.forward_batch(&x, Mode::Train, &mut rng)?;
            let loss = mae(out.data(), y.data()).to_f64_lossy();
            if !loss.is_finite() {
                return Err(NeuroError::NonFiniteLoss { epoch, batch });
            }
            total += loss * chunk.len() as f64;
            for g in grads.iter_mut() {
                g.fill(T::zero());
            }
            let dy = mae_grad(&out, y.data());
            model.backward_batch(&cache, &dy, &mut grads);
            adam.step(model.params_mut(), &grads);
        }
        let record = EpochRecord {
            epoch,
            train_mae: total / train_set.len() as f64,
            validation_mae: validation
                .map(|v| evaluate_mae(model, v, bs))
                .transpose()?,
        };
        curve.train.push(record.train_mae);
        if let Some(v) = record.validation_mae {
            curve.validation.push(v);
        }
        on_epoch(&record);
    }
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mae_subgradient_signs() {
        let p = Tensor::from_vec(&[3], vec![0.7f64, 0.5, 0.1]).unwrap();
        let g = mae_grad(&p, &[0.5, 0.5, 0.2]);
        assert_eq!(g.data(), &[1.0 / 3.0, 0.0, -1.0 / 3.0]);
        let single = Tensor::from_vec(&[1], vec![0.7f64]).unwrap();
        assert_eq!(mae_grad(&single, &[0.5]).data(), &[1.0]);
    }

    #[test]
    fn adam_first_and_second_step() {
        let mut adam = Adam::<f64>::new(1e-3, &[1]);
        let mut p = vec![0.0];
        adam.step(vec![&mut p[..]], &[vec![1.0]]);
        assert!((p[0] + 1e-3 / (1.0 + 1e-8)).abs() < 1e-15);
        let before = p[0];
        adam.step(vec![&mut p[..]], &[vec![1.0]]);
        assert!(((before - p[0]) - 1e-3).abs() < 1e-9);
    }

    #[test]
    fn adam_without_gradient_or_rate_is_inert() {
        let mut p = vec![0.25, -3.0];
        let mut adam = Adam::<f64>::new(1e-3, &[2]);
        for _ in 0..5 {
            adam.step(vec![&mut p[..]], &[vec![0.0, 0.0]]);
        }
        assert_eq!(p, [0.25, -3.0]);
        let mut frozen = Adam::<f64>::new(0.0, &[2]);
        frozen.step(vec![&mut p[..]], &[vec![0.3, -2.0]]);
        assert_eq!(p, [0.25, -3.0]);
    }
}
