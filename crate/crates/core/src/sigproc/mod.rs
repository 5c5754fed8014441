//! Time-frequency pulse detection.
//!
//! The detector follows a fixed chain: [`compute_stft`] →
//! [`compute_threshold`] → [`apply_threshold`] → [`label_components`] →
//! [`extract_pulses`]. [`detect_pulses`] runs all of it.

mod alias;
mod ccl;
pub(crate) mod fft;
mod pulse;
mod stft;
mod threshold;

pub use alias::{dealias_candidates, fold_frequency, Band, AOM_BAND};
pub use ccl::{label_components, Cell, Component};
pub use pulse::{extract_pulses, Pulse};
pub use stft::{compute_stft, hann_window, SampleTrace, Spectrogram, StftConfig, Window};
pub use threshold::{apply_threshold, compute_threshold, DetectionMask, ThresholdStats, DEFAULT_ALPHA};

use alloc::vec::Vec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SigprocError {
    #[error("trace has {len} samples, fewer than one segment of {segment_len}")]
    TraceTooShort { len: usize, segment_len: usize },
    #[error("invalid trace: {0}")]
    InvalidTrace(&'static str),
    #[error("invalid STFT configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("grid shape mismatch: expected {expected} frequency bins, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("invalid band [{low_hz}, {high_hz}] Hz")]
    InvalidBand { low_hz: f64, high_hz: f64 },
    #[error("alias frequency {0} Hz outside the Nyquist band")]
    InvalidAlias(f64),
}

/// Detector settings: STFT geometry, sensitivity and the optional size
/// filter.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetectorConfig {
    pub stft: StftConfig,
    pub alpha: f64,
    /// Components with fewer cells are dropped. 1 keeps everything.
    pub min_cells: usize,
}

impl Default for DetectorConfig {
    fn default() -> Self {
        Self { stft: StftConfig::default(), alpha: DEFAULT_ALPHA, min_cells: 1 }
    }
}

/// Everything the detector produced for one trace.
#[derive(Debug, Clone)]
pub struct Detection {
    pub spectrogram: Spectrogram,
    pub stats: ThresholdStats,
    pub mask: DetectionMask,
    pub pulses: Vec<Pulse>,
}

/// Runs the full detection chain on a trace.
pub fn detect_pulses(trace: &SampleTrace, cfg: &DetectorConfig) -> Result<Detection, SigprocError> {
    let spectrogram = compute_stft(trace, &cfg.stft)?;
    let stats = compute_threshold(&spectrogram, cfg.alpha);
    let mask = apply_threshold(&spectrogram, &stats)?;
    let components: Vec<Component> =
        label_components(&mask).into_iter().filter(|c| c.len() >= cfg.min_cells.max(1)).collect();
    let pulses = extract_pulses(&spectrogram, &components);
    Ok(Detection { spectrogram, stats, mask, pulses })
}
