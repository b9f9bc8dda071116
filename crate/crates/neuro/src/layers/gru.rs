use rand::Rng;

use crate::float::gemm;
use crate::{Float, NeuroError, Tensor};

/// Gated recurrent unit over `[batch, steps, input]`, returning every
/// hidden state `[batch, steps, hidden]` from a zero initial state.
///
/// Gate rows are ordered reset, update, candidate:
///
/// ```text
/// r  = σ(W_ir x + b_ir + W_hr h + b_hr)
/// z  = σ(W_iz x + b_iz + W_hz h + b_hz)
/// n  = tanh(W_in x + b_in + r ⊙ (W_hn h + b_hn))
/// h' = (1 − z) ⊙ n + z ⊙ h
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct Gru<T> {
    pub input_size: usize,
    pub hidden_size: usize,
    /// `W_ih (3H × I)`, `W_hh (3H × H)`, `b_ih (3H)`, `b_hh (3H)`.
    pub params: Vec<T>,
}

/// Per-step activations, each `[steps, batch, hidden]`.
#[derive(Debug, Clone)]
pub struct GruCache<T> {
    r: Vec<T>,
    z: Vec<T>,
    n: Vec<T>,
    /// `W_hn h + b_hn`
    hn: Vec<T>,
}

impl<T: Float> Gru<T> {
    pub fn new<R: Rng + ?Sized>(input_size: usize, hidden_size: usize, rng: &mut R) -> Self {
        let bound = 1.0 / (hidden_size as f64).sqrt();
        let params = (0..Self::param_count(input_size, hidden_size))
            .map(|_| T::of(rng.random_range(-bound..=bound)))
            .collect();
        Self {
            input_size,
            hidden_size,
            params,
        }
    }

    pub fn name(&self) -> String {
        format!("gru({}→{})", self.input_size, self.hidden_size)
    }

    pub fn param_count(input_size: usize, hidden_size: usize) -> usize {
        3 * hidden_size * (input_size + hidden_size + 2)
    }

    fn split(&self) -> (&[T], &[T], &[T], &[T]) {
        let (i, h) = (self.input_size, self.hidden_size);
        let (w_ih, rest) = self.params.split_at(3 * h * i);
        let (w_hh, rest) = rest.split_at(3 * h * h);
        let (b_ih, b_hh) = rest.split_at(3 * h);
        (w_ih, w_hh, b_ih, b_hh)
    }

    pub fn check(&self, x: &Tensor<T>) -> Result<(), NeuroError> {
        if x.shape().len() != 3 || x.dim(2) != self.input_size {
            return Err(NeuroError::Shape {
                layer: self.name(),
                expected: format!("[batch, steps, {}]", self.input_size),
                actual: x.shape().to_vec(),
            });
        }
        Ok(())
    }

    /// Input rows of step `t` as a strided `batch × input` view origin.
    fn step_input(x: &Tensor<T>, t: usize) -> (&[T], (usize, usize)) {
        let (steps, i) = (x.dim(1), x.dim(2));
        (&x.data()[t * i..], (steps * i, 1))
    }

    pub fn forward(&self, x: &Tensor<T>) -> Result<(Tensor<T>, GruCache<T>), NeuroError> {
        self.check(x)?;
        let (batch, steps, i, h) = (x.dim(0), x.dim(1), self.input_size, self.hidden_size);
        let (w_ih, w_hh, b_ih, b_hh) = self.split();
        let mut y = Tensor::zeros(&[batch, steps, h]);
        let size = steps * batch * h;
        let mut cache = GruCache {
            r: vec![T::zero(); size],
            z: vec![T::zero(); size],
            n: vec![T::zero(); size],
            hn: vec![T::zero(); size],
        };
        let mut gi = vec![T::zero(); batch * 3 * h];
        let mut gh = vec![T::zero(); batch * 3 * h];
        let mut h_prev = vec![T::zero(); batch * h];
        for t in 0..steps {
            for row in gi.chunks_exact_mut(3 * h) {
                row.copy_from_slice(b_ih);
            }
            for row in gh.chunks_exact_mut(3 * h) {
                row.copy_from_slice(b_hh);
            }
            let (xt, sx) = Self::step_input(x, t);
            gemm(batch, i, 3 * h, xt, sx, w_ih, (1, i), T::one(), &mut gi, (3 * h, 1));
            gemm(batch, h, 3 * h, &h_prev, (h, 1), w_hh, (1, h), T::one(), &mut gh, (3 * h, 1));
            let base = t * batch * h;
            for b in 0..batch {
                let (gi, gh) = (&gi[b * 3 * h..][..3 * h], &gh[b * 3 * h..][..3 * h]);
                for u in 0..h {
                    let r = sigmoid(gi[u] + gh[u]);
                    let z = sigmoid(gi[h + u] + gh[h + u]);
                    let hn = gh[2 * h + u];
                    let n = (gi[2 * h + u] + r * hn).tanh();
                    let c = base + b * h + u;
                    cache.r[c] = r;
                    cache.z[c] = z;
                    cache.n[c] = n;
                    cache.hn[c] = hn;
                    let hp = h_prev[b * h + u];
                    let hnew = (T::one() - z) * n + z * hp;
                    y.data_mut()[(b * steps + t) * h + u] = hnew;
                }
            }
            for b in 0..batch {
                h_prev[b * h..][..h].copy_from_slice(&y.data()[(b * steps + t) * h..][..h]);
            }
        }
        Ok((y, cache))
    }

    pub fn backward(
        &self,
        x: &Tensor<T>,
        y: &Tensor<T>,
        cache: &GruCache<T>,
        dy: &Tensor<T>,
        grads: &mut [T],
    ) -> Tensor<T> {
        let (batch, steps, i, h) = (x.dim(0), x.dim(1), self.input_size, self.hidden_size);
        let (w_ih, w_hh, _, _) = self.split();
        let (g_wih, rest) = grads.split_at_mut(3 * h * i);
        let (g_whh, rest) = rest.split_at_mut(3 * h * h);
        let (g_bih, g_bhh) = rest.split_at_mut(3 * h);

        let mut dx = Tensor::zeros(x.shape());
        let mut dh = vec![T::zero(); batch * h];
        let mut dgi = vec![T::zero(); batch * 3 * h];
        let mut dgh = vec![T::zero(); batch * 3 * h];
        let mut h_prev = vec![T::zero(); batch * h];
        let one = T::one();
        for t in (0..steps).rev() {
            for b in 0..batch {
                for u in 0..h {
                    dh[b * h + u] = dh[b * h + u] + dy.data()[(b * steps + t) * h + u];
                    h_prev[b * h + u] = if t == 0 {
                        T::zero()
                    } else {
                        y.data()[(b * steps + t - 1) * h + u]
                    };
                }
            }
            let base = t * batch * h;
            for b in 0..batch {
                for u in 0..h {
                    let c = base + b * h + u;
                    let (r, z, n, hn) = (cache.r[c], cache.z[c], cache.n[c], cache.hn[c]);
                    let g = dh[b * h + u];
                    let hp = h_prev[b * h + u];
                    let da_n = g * (one - z) * (one - n * n);
                    let da_z = g * (hp - n) * z * (one - z);
                    let da_r = da_n * hn * r * (one - r);
                    let row = b * 3 * h;
                    dgi[row + u] = da_r;
                    dgi[row + h + u] = da_z;
                    dgi[row + 2 * h + u] = da_n;
                    dgh[row + u] = da_r;
                    dgh[row + h + u] = da_z;
                    dgh[row + 2 * h + u] = da_n * r;
                    // direct path through z ⊙ h
                    dh[b * h + u] = g * z;
                }
            }
            let (xt, sx) = Self::step_input(x, t);
            gemm(3 * h, batch, i, &dgi, (1, 3 * h), xt, (sx.0, 1), one, g_wih, (i, 1));
            gemm(3 * h, batch, h, &dgh, (1, 3 * h), &h_prev, (h, 1), one, g_whh, (h, 1));
            for b in 0..batch {
                for k in 0..3 * h {
                    g_bih[k] = g_bih[k] + dgi[b * 3 * h + k];
                    g_bhh[k] = g_bhh[k] + dgh[b * 3 * h + k];
                }
            }
            let dxt = &mut dx.data_mut()[t * i..];
            gemm(batch, 3 * h, i, &dgi, (3 * h, 1), w_ih, (i, 1), T::zero(), dxt, (steps * i, 1));
            gemm(batch, 3 * h, h, &dgh, (3 * h, 1), w_hh, (h, 1), one, &mut dh, (h, 1));
        }
        dx
    }
}

#[inline]
fn sigmoid<T: Float>(x: T) -> T {
    T::one() / (T::one() + (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_weights_keep_zero_state() {
        let gru = Gru {
            input_size: 3,
            hidden_size: 4,
            params: vec![0.0f64; Gru::<f64>::param_count(3, 4)],
        };
        let x = Tensor::from_vec(&[2, 5, 3], (0..30).map(|i| i as f64 - 7.0).collect()).unwrap();
        let (y, _) = gru.forward(&x).unwrap();
        assert!(y.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_step_matches_gate_equations() {
        // I = H = 1; W_ih = [a_r, a_z, a_n], W_hh unused at h0 = 0
        let (ar, az, an, bhn) = (0.3f64, -0.2, 0.7, 0.4);
        let gru = Gru {
            input_size: 1,
            hidden_size: 1,
            params: vec![ar, az, an, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, bhn],
        };
        let x = 2.0;
        let (y, _) = gru.forward(&Tensor::from_vec(&[1, 1, 1], vec![x]).unwrap()).unwrap();
        let sig = |v: f64| 1.0 / (1.0 + (-v).exp());
        let r = sig(ar * x);
        let z = sig(az * x);
        let n = (an * x + r * bhn).tanh();
        assert!((y.data()[0] - (1.0 - z) * n).abs() < 1e-15);
    }
}
