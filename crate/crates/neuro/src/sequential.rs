use rand::Rng;

use crate::{Cache, Float, Layer, LayerSpec, Mode, NeuroError, Tensor, Trainable};

/// Layers applied in order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sequential<T> {
    pub layers: Vec<Layer<T>>,
    /// Per-sample input shape; batches of flat rows are reshaped to
    /// `[batch, ..input_shape]` before the first layer.
    pub input_shape: Vec<usize>,
}

impl<T: Float> Sequential<T> {
    pub fn new<R: Rng + ?Sized>(
        specs: &[LayerSpec],
        input_shape: &[usize],
        rng: &mut R,
    ) -> Result<Self, NeuroError> {
        Ok(Self {
            layers: specs
                .iter()
                .map(|s| s.build(rng))
                .collect::<Result<_, _>>()?,
            input_shape: input_shape.to_vec(),
        })
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(Layer::spec).collect()
    }

    pub fn forward<R: Rng + ?Sized>(
        &self,
        x: Tensor<T>,
        mode: Mode,
        rng: &mut R,
    ) -> Result<(Tensor<T>, Vec<Cache<T>>), NeuroError> {
        let mut caches = Vec::with_capacity(self.layers.len());
        let mut h = x;
        for layer in &self.layers {
            let (y, cache) = layer.forward(h, mode, rng)?;
            caches.push(cache);
            h = y;
        }
        Ok((h, caches))
    }

    /// `grads` holds one buffer per layer.
    pub fn backward(&self, caches: &[Cache<T>], dy: Tensor<T>, grads: &mut [Vec<T>]) -> Tensor<T> {
        let mut d = dy;
        for ((layer, cache), g) in self.layers.iter().zip(caches).zip(grads).rev() {
            d = layer.backward(cache, &d, g);
        }
        d
    }
}

impl<T: Float> Trainable<T> for Sequential<T> {
    type Cache = (Vec<usize>, Vec<Cache<T>>);

    fn params(&self) -> Vec<&[T]> {
        self.layers.iter().map(Layer::params).collect()
    }

    fn params_mut(&mut self) -> Vec<&mut [T]> {
        self.layers.iter_mut().map(Layer::params_mut).collect()
    }

    fn forward_batch<R: Rng + ?Sized>(
        &self,
        x: &Tensor<T>,
        mode: Mode,
        rng: &mut R,
    ) -> Result<(Tensor<T>, Self::Cache), NeuroError> {
        let mut full = vec![x.dim(0)];
        full.extend_from_slice(&self.input_shape);
        let (y, caches) = self.forward(x.clone().reshape(&full)?, mode, rng)?;
        let out_shape = y.shape().to_vec();
        let width = y.len() / out_shape[0].max(1);
        Ok((y.reshape(&[out_shape[0], width])?, (out_shape, caches)))
    }

    fn backward_batch(&self, cache: &Self::Cache, dy: &Tensor<T>, grads: &mut [Vec<T>]) {
        let (out_shape, caches) = cache;
        let dy = dy.clone().reshape(out_shape).expect("output shape");
        self.backward(caches, dy, grads);
    }
}
