use rand::Rng;

use crate::{Float, Tensor};

pub fn relu<T: Float>(x: &Tensor<T>) -> Tensor<T> {
    x.map(|v| if v > T::zero() { v } else { T::zero() })
}

/// Gradient through ReLU given its output.
pub fn relu_backward<T: Float>(y: &Tensor<T>, dy: &Tensor<T>) -> Tensor<T> {
    let mut dx = dy.clone();
    for (d, &v) in dx.data_mut().iter_mut().zip(y.data()) {
        if v <= T::zero() {
            *d = T::zero();
        }
    }
    dx
}

/// Inverted dropout: kept units are scaled by `1/(1−p)`. Returns the
/// output and the per-element scale it applied.
pub fn dropout<T: Float, R: Rng + ?Sized>(p: f64, x: &Tensor<T>, rng: &mut R) -> (Tensor<T>, Vec<T>) {
    let keep = T::of(1.0 / (1.0 - p));
    let mask: Vec<T> = (0..x.len())
        .map(|_| if rng.random::<f64>() < p { T::zero() } else { keep })
        .collect();
    let mut y = x.clone();
    for (v, &m) in y.data_mut().iter_mut().zip(&mask) {
        *v = *v * m;
    }
    (y, mask)
}

pub fn dropout_backward<T: Float>(mask: &[T], dy: &Tensor<T>) -> Tensor<T> {
    let mut dx = dy.clone();
    for (d, &m) in dx.data_mut().iter_mut().zip(mask) {
        *d = *d * m;
    }
    dx
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn relu_definition() {
        let x = Tensor::from_vec(&[3], vec![-1.0f64, 0.0, 2.0]).unwrap();
        assert_eq!(relu(&x).data(), &[0.0, 0.0, 2.0]);
    }

    #[test]
    fn dropout_is_unbiased() {
        let x = Tensor::from_vec(&[4], vec![0.5f64, -1.0, 2.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut mean = [0.0; 4];
        let n = 10_000;
        for _ in 0..n {
            let (y, _) = dropout(0.1, &x, &mut rng);
            for (m, v) in mean.iter_mut().zip(y.data()) {
                *m += v / n as f64;
            }
        }
        for (m, v) in mean.iter().zip(x.data()) {
            assert!((m - v).abs() <= 0.02 * v.abs(), "{m} vs {v}");
        }
    }
}
