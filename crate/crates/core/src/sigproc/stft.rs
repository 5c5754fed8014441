use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

use super::fft::Fft;
use super::SigprocError;

/// A uniformly sampled, real-valued RF recording.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleTrace {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub start_time_s: f64,
}

impl SampleTrace {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64) -> Result<Self, SigprocError> {
        let trace = Self { samples, sample_rate_hz, start_time_s: 0.0 };
        trace.validate()?;
        Ok(trace)
    }

    pub fn with_start_time(mut self, start_time_s: f64) -> Self {
        self.start_time_s = start_time_s;
        self
    }

    /// Checks the invariants required by every processing operation.
    pub fn validate(&self) -> Result<(), SigprocError> {
        if !(self.sample_rate_hz > 0.0) || !self.sample_rate_hz.is_finite() {
            return Err(SigprocError::InvalidTrace("sample rate must be positive and finite"));
        }
        if self.samples.is_empty() {
            return Err(SigprocError::InvalidTrace("trace is empty"));
        }
        if self.samples.iter().any(|x| !x.is_finite()) {
            return Err(SigprocError::InvalidTrace("trace contains non-finite samples"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }

    /// Mean square over all samples.
    pub fn mean_power(&self) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        self.samples.iter().map(|x| x * x).sum::<f64>() / self.samples.len() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Window {
    #[default]
    Hann,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StftConfig {
    pub segment_len: usize,
    pub overlap_len: usize,
    pub window: Window,
}

impl Default for StftConfig {
    fn default() -> Self {
        Self { segment_len: 2048, overlap_len: 1024, window: Window::Hann }
    }
}

impl StftConfig {
    pub fn validate(&self) -> Result<(), SigprocError> {
        if self.segment_len < 2 {
            return Err(SigprocError::InvalidConfig("segment length must be at least 2"));
        }
        if self.overlap_len >= self.segment_len {
            return Err(SigprocError::InvalidConfig("overlap must be shorter than the segment"));
        }
        Ok(())
    }

    pub fn hop(&self) -> usize {
        self.segment_len - self.overlap_len
    }

    /// Number of one-sided frequency bins.
    pub fn n_freq(&self) -> usize {
        self.segment_len / 2 + 1
    }

    pub fn n_frames(&self, n_samples: usize) -> usize {
        if n_samples < self.segment_len {
            0
        } else {
            (n_samples - self.segment_len) / self.hop() + 1
        }
    }
}

/// Symmetric Hann window, `0.5 (1 - cos(2πn / (N-1)))`.
pub fn hann_window(len: usize) -> Vec<f64> {
    if len == 1 {
        return vec![1.0];
    }
    let denom = (len - 1) as f64;
    (0..len).map(|n| 0.5 * (1.0 - libm::cos(2.0 * PI * n as f64 / denom))).collect()
}

/// One-sided complex STFT grid.
///
/// `values` is stored frame-major: cell `(f, t)` lives at `t * n_freq + f`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    values: Vec<Complex64>,
    n_freq: usize,
    n_time: usize,
    bin_hz: f64,
    hop_s: f64,
    origin_time_s: f64,
}

impl Spectrogram {
    /// Builds a grid from raw parts. `values.len()` must equal
    /// `n_freq * n_time`.
    pub fn from_parts(
        values: Vec<Complex64>,
        n_freq: usize,
        n_time: usize,
        bin_hz: f64,
        hop_s: f64,
        origin_time_s: f64,
    ) -> Result<Self, SigprocError> {
        if n_freq == 0 || n_time == 0 {
            return Err(SigprocError::InvalidConfig("spectrogram must be non-empty"));
        }
        if values.len() != n_freq * n_time {
            return Err(SigprocError::ShapeMismatch { expected: n_freq * n_time, got: values.len() });
        }
        Ok(Self { values, n_freq, n_time, bin_hz, hop_s, origin_time_s })
    }

    pub fn n_freq(&self) -> usize {
        self.n_freq
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    pub fn bin_hz(&self) -> f64 {
        self.bin_hz
    }

    pub fn hop_s(&self) -> f64 {
        self.hop_s
    }

    pub fn origin_time_s(&self) -> f64 {
        self.origin_time_s
    }

    pub fn value(&self, f: usize, t: usize) -> Complex64 {
        self.values[t * self.n_freq + f]
    }

    /// `S(f, t) = |X(f, t)|²`.
    pub fn power(&self, f: usize, t: usize) -> f64 {
        self.value(f, t).norm_sqr()
    }

    /// All values of frame `t`.
    pub fn frame(&self, t: usize) -> &[Complex64] {
        &self.values[t * self.n_freq..(t + 1) * self.n_freq]
    }

    pub fn freq_of_bin(&self, f: usize) -> f64 {
        f as f64 * self.bin_hz
    }

    /// Start time of frame `t`.
    pub fn time_of_frame(&self, t: usize) -> f64 {
        self.origin_time_s + t as f64 * self.hop_s
    }
}

/// Computes the one-sided STFT of a real trace.
///
/// Frame `t` covers samples `[t·hop, t·hop + segment_len)`; samples that
/// do not fill a whole frame at the end are dropped.
pub fn compute_stft(trace: &SampleTrace, cfg: &StftConfig) -> Result<Spectrogram, SigprocError> {
    cfg.validate()?;
    if !(trace.sample_rate_hz > 0.0) {
        return Err(SigprocError::InvalidTrace("sample rate must be positive"));
    }
    let n = cfg.segment_len;
    if trace.samples.len() < n {
        return Err(SigprocError::TraceTooShort { len: trace.samples.len(), segment_len: n });
    }
    let hop = cfg.hop();
    let n_time = cfg.n_frames(trace.samples.len());
    let n_freq = cfg.n_freq();
    let window = match cfg.window {
        Window::Hann => hann_window(n),
    };
    let fft = Fft::new(n);
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = Vec::new();
    let mut values = Vec::with_capacity(n_freq * n_time);
    for t in 0..n_time {
        let frame = &trace.samples[t * hop..t * hop + n];
        for ((b, x), w) in buf.iter_mut().zip(frame).zip(&window) {
            *b = Complex64::new(x * w, 0.0);
        }
        fft.forward(&mut buf, &mut scratch);
        values.extend_from_slice(&buf[..n_freq]);
    }
    debug_assert_eq!(fft.len(), n);
    Ok(Spectrogram {
        values,
        n_freq,
        n_time,
        bin_hz: trace.sample_rate_hz / n as f64,
        hop_s: hop as f64 / trace.sample_rate_hz,
        origin_time_s: trace.start_time_s,
    })
}
