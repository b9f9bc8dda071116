use serde::{Deserialize, Serialize};

use crate::AnnealError;

/// Box bounds with optionally frozen coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxDomain {
    bounds: Vec<(f64, f64)>,
    frozen: Vec<Option<f64>>,
}

impl BoxDomain {
    pub fn new(bounds: Vec<(f64, f64)>) -> Self {
        let frozen = vec![None; bounds.len()];
        Self { bounds, frozen }
    }

    /// Pins dimension `dim` at `value`. Panics if `dim` is out of range.
    pub fn freeze(mut self, dim: usize, value: f64) -> Self {
        self.frozen[dim] = Some(value);
        self
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn frozen(&self, dim: usize) -> Option<f64> {
        self.frozen[dim]
    }

    pub fn free_dims(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.frozen[i].is_none()).collect()
    }

    pub fn validate(&self) -> Result<(), AnnealError> {
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if let Some(v) = self.frozen[i] {
                if !v.is_finite() {
                    return Err(AnnealError::InvalidDomain(format!("frozen value of dim {i} is {v}")));
                }
                continue;
            }
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(AnnealError::InvalidDomain(format!("dim {i} has bounds ({lo}, {hi})")));
            }
        }
        if self.free_dims().is_empty() {
            return Err(AnnealError::AllFrozen);
        }
        Ok(())
    }

    /// True if every free coordinate lies in its bounds and every frozen one
    /// equals its pinned value.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter().enumerate().all(|(i, &v)| match self.frozen[i] {
                Some(f) => v == f,
                None => v >= self.bounds[i].0 && v <= self.bounds[i].1,
            })
    }

    pub fn clamp(&self, dim: usize, v: f64) -> f64 {
        let (lo, hi) = self.bounds[dim];
        v.clamp(lo, hi)
    }
}

/// Folds `v` back into `[lo, hi]` by mirroring at the bounds.
pub fn reflect(v: f64, lo: f64, hi: f64) -> f64 {
    if v >= lo && v <= hi {
        return v;
    }
    let range = hi - lo;
    let mut m = (v - lo).rem_euclid(2.0 * range);
    if m > range {
        m = 2.0 * range - m;
    }
    (lo + m).clamp(lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_mirrors() {
        assert_eq!(reflect(0.5, 0.0, 1.0), 0.5);
        assert!((reflect(1.25, 0.0, 1.0) - 0.75).abs() < 1e-12);
        assert!((reflect(-0.25, 0.0, 1.0) - 0.25).abs() < 1e-12);
        assert!((reflect(2.25, 0.0, 1.0) - 0.25).abs() < 1e-12);
        assert!((reflect(-1.75, 0.0, 1.0) - 0.25).abs() < 1e-12);
        let r = reflect(1e8, -5.0, 5.0);
        assert!((-5.0..=5.0).contains(&r));
    }

    #[test]
    fn all_frozen_is_an_error() {
        let d = BoxDomain::new(vec![(0.0, 1.0)]).freeze(0, 0.5);
        assert_eq!(d.validate(), Err(AnnealError::AllFrozen));
    }

    #[test]
    fn frozen_bounds_are_not_checked() {
        let d = BoxDomain::new(vec![(1.0, 1.0), (0.0, 1.0)]).freeze(0, 1.0);
        d.validate().unwrap();
        assert_eq!(d.free_dims(), vec![1]);
        assert!(d.contains(&[1.0, 0.3]));
        assert!(!d.contains(&[1.1, 0.3]));
    }
}
