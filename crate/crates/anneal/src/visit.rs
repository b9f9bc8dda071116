use rand::Rng;
use rand_distr::StandardNormal;

/// Steps beyond this magnitude are redrawn uniformly inside it.
const TAIL_LIMIT: f64 = 1e8;

/// Annealing temperature at step `t >= 1`; `temperature(t0, q, 1) == t0`.
pub fn temperature(t0: f64, visit: f64, t: usize) -> f64 {
    let e = visit - 1.0;
    t0 * (2f64.powf(e) - 1.0) / ((1.0 + t as f64).powf(e) - 1.0)
}

/// Tsallis visiting distribution drawn as the ratio of two scaled normals.
#[derive(Debug, Clone)]
pub struct VisitingDistribution {
    q: f64,
    factor4_p: f64,
    factor6: f64,
}

impl VisitingDistribution {
    pub fn new(visit: f64) -> Self {
        let q = visit;
        let factor2 = ((4.0 - q) * (q - 1.0).ln()).exp();
        let factor3 = ((2.0 - q) * 2f64.ln() / (q - 1.0)).exp();
        let factor4_p = std::f64::consts::PI.sqrt() * factor2 / (factor3 * (3.0 - q));
        let factor5 = 1.0 / (q - 1.0) - 0.5;
        let d1 = 2.0 - factor5;
        let a = std::f64::consts::PI * (1.0 - factor5);
        let factor6 = a / a.sin() / libm::lgamma(d1).exp();
        Self { q, factor4_p, factor6 }
    }

    /// One step at temperature `t`, before bound handling.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, t: f64) -> f64 {
        let x: f64 = rng.sample(StandardNormal);
        let y: f64 = rng.sample(StandardNormal);
        let q = self.q;
        let factor1 = (t.ln() / (q - 1.0)).exp();
        let factor4 = self.factor4_p * factor1;
        let sigma = (-(q - 1.0) * (self.factor6 / factor4).ln() / (3.0 - q)).exp();
        let den = ((q - 1.0) * y.abs().ln() / (3.0 - q)).exp();
        let v = x * sigma / den;
        if v > TAIL_LIMIT {
            TAIL_LIMIT * rng.random::<f64>()
        } else if v < -TAIL_LIMIT {
            -TAIL_LIMIT * rng.random::<f64>()
        } else if v.is_nan() {
            0.0
        } else {
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn schedule_starts_at_t0_and_decreases() {
        assert!((temperature(10_000.0, 2.7, 1) - 10_000.0).abs() < 1e-9);
        let mut prev = f64::INFINITY;
        for t in 1..300 {
            let v = temperature(10_000.0, 2.7, t);
            assert!(v < prev && v > 0.0);
            prev = v;
        }
    }

    #[test]
    fn steps_are_symmetric_and_shrink_with_temperature() {
        let d = VisitingDistribution::new(2.7);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let median_abs = |rng: &mut ChaCha8Rng, t: f64| {
            let mut v: Vec<f64> = (0..4001).map(|_| d.sample(rng, t)).collect();
            let pos = v.iter().filter(|s| **s > 0.0).count();
            assert!((pos as f64 / v.len() as f64 - 0.5).abs() < 0.04);
            v.iter_mut().for_each(|s| *s = s.abs());
            v.sort_by(f64::total_cmp);
            v[2000]
        };
        let hot = median_abs(&mut rng, 1e4);
        let cold = median_abs(&mut rng, 1.0);
        assert!(hot > cold * 10.0, "hot {hot} cold {cold}");
    }
}
