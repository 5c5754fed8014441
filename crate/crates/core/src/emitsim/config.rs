use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{EmitError, GateKind, NativeGate};
use crate::sigproc::Band;

/// A fixed tone of a region template.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tone {
    pub freq_hz: f64,
    pub duration_s: f64,
}

impl Tone {
    pub const fn new(freq_hz: f64, duration_s: f64) -> Self {
        Self { freq_hz, duration_s }
    }
}

/// Duration of MS gates on one ion pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MsPair {
    pub ions: (usize, usize),
    pub duration_s: f64,
    /// Standard deviation of the per-gate duration jitter.
    pub jitter_s: f64,
}

impl MsPair {
    pub fn matches(&self, a: usize, b: usize) -> bool {
        let (x, y) = self.ions;
        (x, y) == (a, b) || (x, y) == (b, a)
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecoyConfig {
    pub n_decoys: usize,
    pub rng_seed: u64,
    /// Expected decoy gates per computational gate.
    pub gate_rate: f64,
}

/// One band of injected interference, given in the sampled (aliased)
/// domain `[0, f_s/2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NoiseBand {
    pub band: Band,
    /// Noise variance while a burst is active.
    pub power: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct InterferenceConfig {
    pub bands: Vec<NoiseBand>,
    /// Length of one burst slot.
    pub burst_s: f64,
    /// Probability that a slot carries a burst. 1 gives continuous noise.
    pub duty: f64,
}

impl Default for InterferenceConfig {
    fn default() -> Self {
        Self { bands: Vec::new(), burst_s: 100e-6, duty: 1.0 }
    }
}

/// Low-power tone emitted alongside every gate by the gate-preparation
/// modulators. Off by default.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PrepTone {
    pub freq_hz: f64,
    pub amplitude: f64,
}

/// Acquisition chain and control-system timing used by the simulator.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EmissionConfig {
    pub sample_rate_hz: f64,
    /// True (pre-sampling) addressing tone per ion.
    pub addressing_freq_hz: Vec<f64>,
    /// Rabi angular frequency Ω for all ions without an override.
    pub rabi_rad_per_s: f64,
    /// Per-ion Ω overrides; missing entries fall back to `rabi_rad_per_s`.
    pub rabi_per_ion: Vec<f64>,
    pub pad_s: f64,
    pub ms_pairs: Vec<MsPair>,
    pub ms_default_duration_s: f64,
    pub gate_gap_s: f64,
    pub region_gap_s: f64,
    pub shot_gap_s: f64,
    /// Raised-cosine rise and fall time of every tone.
    pub edge_s: f64,
    pub amplitude: f64,
    pub region_a: Vec<Tone>,
    pub region_c: Vec<Tone>,
    pub noise_sigma: f64,
    /// Ideal front-end passband applied to true tone frequencies.
    pub bandpass: Band,
    /// Per-ion standard deviation of single-qudit pulse durations.
    pub duration_jitter_s: Vec<f64>,
    /// Per-ion standard deviation of the addressing tone frequency.
    pub freq_jitter_hz: Vec<f64>,
    pub prep_tone: Option<PrepTone>,
    pub decoy: Option<DecoyConfig>,
    pub interference: Option<InterferenceConfig>,
}

pub const DEFAULT_SAMPLE_RATE_HZ: f64 = 122.88e6;

impl Default for EmissionConfig {
    fn default() -> Self {
        Self {
            sample_rate_hz: DEFAULT_SAMPLE_RATE_HZ,
            // k = 1 upper images of 6.7745, 8.112 and 9.57 MHz
            addressing_freq_hz: vec![129.6545e6, 130.992e6, 132.45e6],
            rabi_rad_per_s: 2.0 * PI * 12.5e3,
            rabi_per_ion: Vec::new(),
            pad_s: 10e-6,
            ms_pairs: vec![
                MsPair { ions: (0, 1), duration_s: 232.5e-6, jitter_s: 0.0 },
                MsPair { ions: (1, 2), duration_s: 229.9e-6, jitter_s: 0.0 },
                MsPair { ions: (0, 2), duration_s: 222.3e-6, jitter_s: 0.0 },
            ],
            ms_default_duration_s: 230e-6,
            gate_gap_s: 20e-6,
            region_gap_s: 100e-6,
            shot_gap_s: 2.5e-3,
            edge_s: 2e-6,
            amplitude: 1.0,
            // aliases at 22.88, 12.88 and 37.88 MHz
            region_a: vec![Tone::new(100e6, 350e-6), Tone::new(110e6, 320e-6), Tone::new(85e6, 400e-6)],
            // aliases at 27.88, 52.12 and 42.12 MHz
            region_c: vec![Tone::new(95e6, 500e-6), Tone::new(175e6, 450e-6), Tone::new(165e6, 380e-6)],
            noise_sigma: 0.0,
            bandpass: Band::new(27.5e6, 200e6),
            duration_jitter_s: Vec::new(),
            freq_jitter_hz: Vec::new(),
            prep_tone: None,
            decoy: None,
            interference: None,
        }
    }
}

impl EmissionConfig {
    pub fn rabi_for(&self, ion: usize) -> f64 {
        self.rabi_per_ion.get(ion).copied().unwrap_or(self.rabi_rad_per_s)
    }

    pub fn ms_pair(&self, a: usize, b: usize) -> Option<&MsPair> {
        self.ms_pairs.iter().find(|p| p.matches(a, b))
    }

    pub fn ms_duration(&self, a: usize, b: usize) -> f64 {
        self.ms_pair(a, b).map_or(self.ms_default_duration_s, |p| p.duration_s)
    }

    pub fn duration_jitter(&self, ion: usize) -> f64 {
        self.duration_jitter_s.get(ion).copied().unwrap_or(0.0)
    }

    pub fn freq_jitter(&self, ion: usize) -> f64 {
        self.freq_jitter_hz.get(ion).copied().unwrap_or(0.0)
    }

    /// Longest pulse the configuration can emit.
    pub fn max_pulse_s(&self) -> f64 {
        let n = self.addressing_freq_hz.len().max(self.rabi_per_ion.len()).max(1);
        let rotations = (0..n).map(|ion| 2.0 * PI / self.rabi_for(ion) + self.pad_s);
        let ms = self.ms_pairs.iter().map(|p| p.duration_s).chain([self.ms_default_duration_s]);
        let tones = self.region_a.iter().chain(&self.region_c).map(|t| t.duration_s);
        rotations.chain(ms).chain(tones).fold(0.0, f64::max)
    }

    pub fn validate(&self) -> Result<(), EmitError> {
        let bad = |why| Err(EmitError::ConfigInvalid(why));
        let positive = |x: f64| x > 0.0 && x.is_finite();
        let non_negative = |x: f64| x >= 0.0 && x.is_finite();
        if !positive(self.sample_rate_hz) {
            return bad("sample_rate_hz must be positive");
        }
        if !positive(self.rabi_rad_per_s) || !self.rabi_per_ion.iter().all(|&r| positive(r)) {
            return bad("Rabi frequencies must be positive");
        }
        let tone_freqs = self.region_a.iter().chain(&self.region_c).map(|t| t.freq_hz);
        if !self.addressing_freq_hz.iter().copied().chain(tone_freqs).all(positive) {
            return bad("all frequencies must be positive");
        }
        if !self.region_a.iter().chain(&self.region_c).all(|t| positive(t.duration_s)) {
            return bad("template tone durations must be positive");
        }
        if !self.ms_pairs.iter().all(|p| positive(p.duration_s) && non_negative(p.jitter_s) && p.ions.0 != p.ions.1)
            || !positive(self.ms_default_duration_s)
        {
            return bad("MS pair durations must be positive");
        }
        for x in [self.pad_s, self.gate_gap_s, self.region_gap_s, self.edge_s, self.noise_sigma, self.amplitude] {
            if !non_negative(x) {
                return bad("timing, amplitude and noise parameters must be non-negative");
            }
        }
        if !self.duration_jitter_s.iter().chain(&self.freq_jitter_hz).all(|&x| non_negative(x)) {
            return bad("jitter must be non-negative");
        }
        if self.bandpass.validate().is_err() {
            return bad("bandpass must satisfy low <= high");
        }
        if !(self.shot_gap_s > self.max_pulse_s()) {
            return bad("shot_gap_s must exceed the longest pulse");
        }
        if let Some(d) = &self.decoy {
            if d.n_decoys == 0 || !non_negative(d.gate_rate) {
                return bad("decoys need n_decoys >= 1 and a non-negative gate_rate");
            }
        }
        if let Some(p) = &self.prep_tone {
            if !positive(p.freq_hz) || !non_negative(p.amplitude) {
                return bad("prep tone needs a positive frequency");
            }
        }
        if let Some(i) = &self.interference {
            if !positive(i.burst_s) || !(0.0..=1.0).contains(&i.duty) {
                return bad("interference needs burst_s > 0 and duty in [0, 1]");
            }
        }
        Ok(())
    }
}

/// Pulse length that implements `gate` under `cfg`.
///
/// Rotations last `θ/Ω + pad`; MS gates use the configured per-pair
/// duration.
pub fn duration_for(gate: &NativeGate, cfg: &EmissionConfig) -> f64 {
    match gate.kind {
        GateKind::Rx | GateKind::Ry => gate.theta_rad / cfg.rabi_for(gate.ions[0]) + cfg.pad_s,
        GateKind::Ms => cfg.ms_duration(gate.ions[0], gate.ions[1]),
    }
}
