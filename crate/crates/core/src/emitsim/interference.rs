use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{EmitError, InterferenceConfig};
use crate::sigproc::fft::Fft;
use crate::sigproc::SampleTrace;

/// Adds band-limited Gaussian noise bursts to a trace.
///
/// The trace is cut into slots of `burst_s`; each slot carries a burst with
/// probability `duty`. Within a burst every band contributes noise whose
/// variance over the slot is exactly its `power`.
pub fn inject_interference(trace: &SampleTrace, cfg: &InterferenceConfig, seed: u64) -> Result<SampleTrace, EmitError> {
    let fs = trace.sample_rate_hz;
    for nb in &cfg.bands {
        if nb.band.validate().is_err() || nb.band.low_hz < 0.0 || nb.band.high_hz > fs / 2.0 {
            return Err(EmitError::ConfigInvalid("interference band must lie within [0, fs/2]"));
        }
        if !(nb.power >= 0.0) {
            return Err(EmitError::ConfigInvalid("interference power must be non-negative"));
        }
    }
    if !(cfg.burst_s > 0.0) || !(0.0..=1.0).contains(&cfg.duty) {
        return Err(EmitError::ConfigInvalid("interference needs burst_s > 0 and duty in [0, 1]"));
    }
    let mut out = trace.clone();
    if cfg.bands.iter().all(|b| b.power == 0.0) {
        return Ok(out);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let slot = (libm::round(cfg.burst_s * fs) as usize).max(1);
    let mut plans: Vec<Fft> = Vec::new();
    let mut scratch = Vec::new();
    let mut start = 0;
    while start < out.samples.len() {
        let len = slot.min(out.samples.len() - start);
        let active = rng.random::<f64>() < cfg.duty;
        if active {
            let size = len.next_power_of_two().max(2);
            if !plans.iter().any(|p| p.len() == size) {
                plans.push(Fft::new(size));
            }
            let fft = plans.iter().find(|p| p.len() == size).expect("plan just inserted");
            for nb in cfg.bands.iter().filter(|b| b.power > 0.0) {
                let burst = band_noise(fft, len, fs, nb.band.low_hz, nb.band.high_hz, &mut rng, &mut scratch);
                let ms = burst.iter().map(|x| x * x).sum::<f64>() / len as f64;
                if ms > 0.0 {
                    let gain = libm::sqrt(nb.power / ms);
                    for (x, n) in out.samples[start..start + len].iter_mut().zip(&burst) {
                        *x += gain * n;
                    }
                }
            }
        }
        start += len;
    }
    Ok(out)
}

fn band_noise(
    fft: &Fft,
    len: usize,
    fs: f64,
    low_hz: f64,
    high_hz: f64,
    rng: &mut ChaCha8Rng,
    scratch: &mut Vec<Complex64>,
) -> Vec<f64> {
    let size = fft.len();
    let mut spectrum = vec![Complex64::new(0.0, 0.0); size];
    for k in 0..=size / 2 {
        let f = k as f64 * fs / size as f64;
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        if f < low_hz || f > high_hz {
            continue;
        }
        if k == 0 || k == size / 2 {
            spectrum[k] = Complex64::new(re, 0.0);
        } else {
            spectrum[k] = Complex64::new(re, im);
            spectrum[size - k] = Complex64::new(re, -im);
        }
    }
    fft.inverse(&mut spectrum, scratch);
    spectrum[..len].iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::emitsim::NoiseBand;
    use crate::sigproc::Band;

    fn trace() -> SampleTrace {
        SampleTrace::new((0..5000).map(|i| libm::sin(i as f64 * 0.1)).collect(), 1e6).unwrap()
    }

    #[test]
    fn zero_power_is_identity() {
        let cfg = InterferenceConfig {
            bands: vec![NoiseBand { band: Band::new(1e4, 2e5), power: 0.0 }],
            ..Default::default()
        };
        assert_eq!(inject_interference(&trace(), &cfg, 1).unwrap(), trace());
    }

    #[test]
    fn continuous_noise_has_requested_power() {
        let t = SampleTrace::new(vec![0.0; 4000], 1e6).unwrap();
        let cfg = InterferenceConfig {
            bands: vec![NoiseBand { band: Band::new(1e5, 3e5), power: 2.5 }],
            burst_s: 1e-3,
            duty: 1.0,
        };
        let out = inject_interference(&t, &cfg, 9).unwrap();
        assert!((out.mean_power() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn deterministic_and_band_checked() {
        let cfg = InterferenceConfig {
            bands: vec![NoiseBand { band: Band::new(1e5, 3e5), power: 1.0 }],
            burst_s: 2e-4,
            duty: 0.5,
        };
        assert_eq!(inject_interference(&trace(), &cfg, 4), inject_interference(&trace(), &cfg, 4));
        let bad = InterferenceConfig {
            bands: vec![NoiseBand { band: Band::new(1e5, 6e5), power: 1.0 }],
            ..Default::default()
        };
        assert!(inject_interference(&trace(), &bad, 4).is_err());
    }
}
