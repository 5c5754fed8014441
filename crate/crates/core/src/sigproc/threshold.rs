use alloc::vec;
use alloc::vec::Vec;

use super::{SigprocError, Spectrogram};

/// Sensitivity used when the caller does not pick one.
pub const DEFAULT_ALPHA: f64 = 4.0;

/// Global power statistics and the detection threshold derived from them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdStats {
    /// Time-averaged power per frequency bin.
    pub mu_per_freq: Vec<f64>,
    /// Mean of `mu_per_freq` over all bins.
    pub mu_bar: f64,
    /// Population standard deviation of `mu_per_freq`.
    pub sigma_mu: f64,
    pub alpha: f64,
    /// `mu_bar + alpha * sigma_mu`.
    pub threshold: f64,
}

/// Computes `μ(f)`, `μ̄`, `σ_μ` and `𝒯 = μ̄ + α σ_μ` over a spectrogram.
pub fn compute_threshold(spec: &Spectrogram, alpha: f64) -> ThresholdStats {
    let n_freq = spec.n_freq();
    let n_time = spec.n_time();
    let mut mu = vec![0.0; n_freq];
    for t in 0..n_time {
        for (acc, x) in mu.iter_mut().zip(spec.frame(t)) {
            *acc += x.norm_sqr();
        }
    }
    for m in mu.iter_mut() {
        *m /= n_time as f64;
    }
    stats_from_mu(mu, alpha)
}

pub(crate) fn stats_from_mu(mu_per_freq: Vec<f64>, alpha: f64) -> ThresholdStats {
    let n = mu_per_freq.len() as f64;
    let mu_bar = mu_per_freq.iter().sum::<f64>() / n;
    let var = mu_per_freq.iter().map(|m| (m - mu_bar) * (m - mu_bar)).sum::<f64>() / n;
    let sigma_mu = libm::sqrt(var);
    ThresholdStats { mu_per_freq, mu_bar, sigma_mu, alpha, threshold: mu_bar + alpha * sigma_mu }
}

/// Binary grid congruent with a spectrogram, indexed `(f, t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetectionMask {
    n_freq: usize,
    n_time: usize,
    bits: Vec<bool>,
}

impl DetectionMask {
    pub fn new(n_freq: usize, n_time: usize) -> Self {
        Self { n_freq, n_time, bits: vec![false; n_freq * n_time] }
    }

    pub fn from_fn(n_freq: usize, n_time: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut mask = Self::new(n_freq, n_time);
        for t in 0..n_time {
            for fr in 0..n_freq {
                mask.bits[t * n_freq + fr] = f(fr, t);
            }
        }
        mask
    }

    pub fn n_freq(&self) -> usize {
        self.n_freq
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    pub fn get(&self, f: usize, t: usize) -> bool {
        self.bits[t * self.n_freq + f]
    }

    pub fn set(&mut self, f: usize, t: usize, value: bool) {
        self.bits[t * self.n_freq + f] = value;
    }

    pub fn count_set(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn fraction_set(&self) -> f64 {
        if self.bits.is_empty() {
            0.0
        } else {
            self.count_set() as f64 / self.bits.len() as f64
        }
    }
}

/// Marks every cell with `S(f, t) > threshold`. Ties are excluded.
pub fn apply_threshold(spec: &Spectrogram, stats: &ThresholdStats) -> Result<DetectionMask, SigprocError> {
    if stats.mu_per_freq.len() != spec.n_freq() {
        return Err(SigprocError::ShapeMismatch { expected: spec.n_freq(), got: stats.mu_per_freq.len() });
    }
    let threshold = stats.threshold;
    Ok(DetectionMask::from_fn(spec.n_freq(), spec.n_time(), |f, t| spec.power(f, t) > threshold))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn grid(power: &[&[f64]]) -> Spectrogram {
        // power[t][f]
        let n_time = power.len();
        let n_freq = power[0].len();
        let values = power.iter().flat_map(|row| row.iter().map(|p| Complex64::new(libm::sqrt(*p), 0.0))).collect();
        Spectrogram::from_parts(values, n_freq, n_time, 1.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn constant_grid() {
        let spec = grid(&[&[3.0, 3.0, 3.0], &[3.0, 3.0, 3.0]]);
        let stats = compute_threshold(&spec, 4.0);
        assert!(stats.mu_per_freq.iter().all(|m| (*m - 3.0).abs() < 1e-12));
        assert_eq!(stats.sigma_mu, 0.0);
        assert!((stats.threshold - 3.0).abs() < 1e-12);
        let mask = apply_threshold(&spec, &stats).unwrap();
        assert_eq!(mask.count_set(), 0);
    }

    #[test]
    fn two_bin_toy_grid() {
        // μ(f) = {0, 2}
        let spec = grid(&[&[0.0, 4.0], &[0.0, 0.0]]);
        let stats = compute_threshold(&spec, 1.0);
        assert_eq!(stats.mu_per_freq, vec![0.0, 2.0]);
        assert_eq!(stats.mu_bar, 1.0);
        assert_eq!(stats.sigma_mu, 1.0);
        assert_eq!(stats.threshold, 2.0);
    }

    #[test]
    fn single_excursion_sets_one_bit() {
        let stats =
            ThresholdStats { mu_per_freq: vec![0.0; 3], mu_bar: 0.0, sigma_mu: 0.0, alpha: 1.0, threshold: 4.0 };
        let spec = grid(&[&[1.0, 4.0, 1.0], &[4.0 + 1e-9, 0.0, 0.0]]);
        let mask = apply_threshold(&spec, &stats).unwrap();
        assert_eq!(mask.count_set(), 1);
        assert!(mask.get(0, 1));
    }

    #[test]
    fn shape_mismatch() {
        let spec = grid(&[&[1.0, 2.0]]);
        let stats = stats_from_mu(vec![1.0; 3], 1.0);
        assert_eq!(apply_threshold(&spec, &stats), Err(SigprocError::ShapeMismatch { expected: 2, got: 3 }));
    }
}
