use rand::Rng;

use crate::float::gemm;
use crate::{Float, NeuroError, Tensor};

/// `y = x·Wᵀ + b` with `W` stored `out × in`. Inputs of rank 3 are
/// flattened per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear<T> {
    pub in_features: usize,
    pub out_features: usize,
    /// `W` row-major, then `b`.
    pub params: Vec<T>,
}

impl<T: Float> Linear<T> {
    pub fn new<R: Rng + ?Sized>(in_features: usize, out_features: usize, rng: &mut R) -> Self {
        let bound = (6.0 / (in_features + out_features) as f64).sqrt();
        let mut params: Vec<T> = (0..in_features * out_features)
            .map(|_| T::of(rng.random_range(-bound..=bound)))
            .collect();
        params.resize(params.len() + out_features, T::zero());
        Self {
            in_features,
            out_features,
            params,
        }
    }

    pub fn name(&self) -> String {
        format!("linear({}→{})", self.in_features, self.out_features)
    }

    pub fn param_count(in_features: usize, out_features: usize) -> usize {
        (in_features + 1) * out_features
    }

    fn split(&self) -> (&[T], &[T]) {
        self.params.split_at(self.in_features * self.out_features)
    }

    pub fn check(&self, x: &Tensor<T>) -> Result<(), NeuroError> {
        let rows = x.dim(0);
        if rows == 0 || x.len() / rows != self.in_features || x.len() % rows != 0 {
            return Err(NeuroError::Shape {
                layer: self.name(),
                expected: format!("[batch, ..] with {} values per row", self.in_features),
                actual: x.shape().to_vec(),
            });
        }
        Ok(())
    }

    pub fn forward(&self, x: &Tensor<T>) -> Result<Tensor<T>, NeuroError> {
        self.check(x)?;
        let (batch, i, o) = (x.dim(0), self.in_features, self.out_features);
        let (w, b) = self.split();
        let mut y = Tensor::zeros(&[batch, o]);
        for row in y.data_mut().chunks_exact_mut(o) {
            row.copy_from_slice(b);
        }
        gemm(batch, i, o, x.data(), (i, 1), w, (1, i), T::one(), y.data_mut(), (o, 1));
        Ok(y)
    }

    /// Accumulates `∂L/∂W`, `∂L/∂b` into `grads` and returns `∂L/∂x`.
    pub fn backward(&self, x: &Tensor<T>, dy: &Tensor<T>, grads: &mut [T]) -> Tensor<T> {
        let (batch, i, o) = (x.dim(0), self.in_features, self.out_features);
        let (w, _) = self.split();
        let (gw, gb) = grads.split_at_mut(i * o);
        gemm(o, batch, i, dy.data(), (1, o), x.data(), (i, 1), T::one(), gw, (i, 1));
        for row in dy.data().chunks_exact(o) {
            for (g, &d) in gb.iter_mut().zip(row) {
                *g = *g + d;
            }
        }
        let mut dx = Tensor::zeros(x.shape());
        gemm(batch, o, i, dy.data(), (o, 1), w, (i, 1), T::zero(), dx.data_mut(), (i, 1));
        dx
    }
}
