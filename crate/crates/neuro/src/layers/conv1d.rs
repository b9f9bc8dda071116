use rand::Rng;

use crate::{Float, NeuroError, Tensor};

pub const KERNEL: usize = 3;
pub const PADDING: usize = 1;

/// One-dimensional convolution over `[batch, channels, length]` with kernel
/// 3 and zero padding 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Conv1d<T> {
    pub in_channels: usize,
    pub out_channels: usize,
    pub stride: usize,
    /// `W[out][in][k]`, then `b[out]`.
    pub params: Vec<T>,
}

impl<T: Float> Conv1d<T> {
    pub fn new<R: Rng + ?Sized>(
        in_channels: usize,
        out_channels: usize,
        stride: usize,
        rng: &mut R,
    ) -> Self {
        let fan = (in_channels + out_channels) * KERNEL;
        let bound = (6.0 / fan as f64).sqrt();
        let mut params: Vec<T> = (0..out_channels * in_channels * KERNEL)
            .map(|_| T::of(rng.random_range(-bound..=bound)))
            .collect();
        params.resize(params.len() + out_channels, T::zero());
        Self {
            in_channels,
            out_channels,
            stride,
            params,
        }
    }

    pub fn name(&self) -> String {
        format!("conv1d({}→{}, stride {})", self.in_channels, self.out_channels, self.stride)
    }

    pub fn param_count(in_channels: usize, out_channels: usize) -> usize {
        out_channels * (in_channels * KERNEL + 1)
    }

    pub fn output_len(&self, len: usize) -> usize {
        (len + 2 * PADDING - KERNEL) / self.stride + 1
    }

    pub fn check(&self, x: &Tensor<T>) -> Result<(), NeuroError> {
        if x.shape().len() != 3 || x.dim(1) != self.in_channels || x.dim(2) + 2 * PADDING < KERNEL
        {
            return Err(NeuroError::Shape {
                layer: self.name(),
                expected: format!("[batch, {}, length]", self.in_channels),
                actual: x.shape().to_vec(),
            });
        }
        Ok(())
    }

    /// Input position feeding output `t` through tap `k`, if inside.
    #[inline]
    fn source(&self, t: usize, k: usize, len: usize) -> Option<usize> {
        (t * self.stride + k).checked_sub(PADDING).filter(|&i| i < len)
    }

    pub fn forward(&self, x: &Tensor<T>) -> Result<Tensor<T>, NeuroError> {
        self.check(x)?;
        let (batch, cin, len) = (x.dim(0), self.in_channels, x.dim(2));
        let (cout, lout) = (self.out_channels, self.output_len(len));
        let (w, bias) = self.params.split_at(cout * cin * KERNEL);
        let mut y = Tensor::zeros(&[batch, cout, lout]);
        let xs = x.data();
        let ys = y.data_mut();
        for b in 0..batch {
            for o in 0..cout {
                for t in 0..lout {
                    let mut acc = bias[o];
                    for c in 0..cin {
                        let wrow = &w[(o * cin + c) * KERNEL..][..KERNEL];
                        let xrow = &xs[(b * cin + c) * len..][..len];
                        for (k, &wk) in wrow.iter().enumerate() {
                            if let Some(i) = self.source(t, k, len) {
                                acc = acc + wk * xrow[i];
                            }
                        }
                    }
                    ys[(b * cout + o) * lout + t] = acc;
                }
            }
        }
        Ok(y)
    }

    pub fn backward(&self, x: &Tensor<T>, dy: &Tensor<T>, grads: &mut [T]) -> Tensor<T> {
        let (batch, cin, len) = (x.dim(0), self.in_channels, x.dim(2));
        let (cout, lout) = (self.out_channels, dy.dim(2));
        let (w, _) = self.params.split_at(cout * cin * KERNEL);
        let (gw, gb) = grads.split_at_mut(cout * cin * KERNEL);
        let mut dx = Tensor::zeros(x.shape());
        let (xs, dys) = (x.data(), dy.data());
        let dxs = dx.data_mut();
        for b in 0..batch {
            for o in 0..cout {
                for t in 0..lout {
                    let g = dys[(b * cout + o) * lout + t];
                    gb[o] = gb[o] + g;
                    for c in 0..cin {
                        let base = (o * cin + c) * KERNEL;
                        for k in 0..KERNEL {
                            if let Some(i) = self.source(t, k, len) {
                                let xi = (b * cin + c) * len + i;
                                gw[base + k] = gw[base + k] + g * xs[xi];
                                dxs[xi] = dxs[xi] + g * w[base + k];
                            }
                        }
                    }
                }
            }
        }
        dx
    }
}
