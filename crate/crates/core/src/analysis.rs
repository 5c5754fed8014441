//! One-call pipeline from a sampled trace to classified gates.

use alloc::vec;
use alloc::vec::Vec;

use crate::reconstruct::{
    classify_gates, label_regions, profile_baseline, segment_shots, AddressingTable, BaselineConfig, BaselineProfile,
    ClassifierConfig, GateEvent, ReconstructError, Shot, DEFAULT_GAP_THRESHOLD_S,
};
use crate::sigproc::{detect_pulses, Detection, DetectorConfig, SampleTrace, SigprocError};
use crate::Region;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Sigproc(#[from] SigprocError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisConfig {
    pub detector: DetectorConfig,
    pub gap_threshold_s: f64,
    pub classifier: ClassifierConfig,
    /// Fraction of baseline shots a template pulse must appear in.
    pub baseline_min_occurrence: f64,
    /// Template tolerances are this many standard deviations, floored at
    /// one bin and two hops of the spectrogram grid.
    pub baseline_sigma_mult: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            detector: DetectorConfig::default(),
            gap_threshold_s: DEFAULT_GAP_THRESHOLD_S,
            classifier: ClassifierConfig::default(),
            baseline_min_occurrence: 0.8,
            baseline_sigma_mult: 3.0,
        }
    }
}

impl AnalysisConfig {
    pub fn baseline_config(&self, detection: &Detection) -> BaselineConfig {
        let s = &detection.spectrogram;
        BaselineConfig {
            min_occurrence: self.baseline_min_occurrence,
            sigma_mult: self.baseline_sigma_mult,
            ..BaselineConfig::for_grid(s.bin_hz(), s.hop_s())
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub detection: Detection,
    /// Region-labeled shots.
    pub shots: Vec<Shot>,
    /// Gate events per shot, parallel to `shots`.
    pub events: Vec<Vec<GateEvent>>,
}

impl Analysis {
    pub fn all_events(&self) -> impl Iterator<Item = &GateEvent> {
        self.events.iter().flatten()
    }
}

/// Detects pulses, segments shots, labels regions and classifies gates.
///
/// Without a baseline every pulse is treated as region B; ion assignment
/// then discards what does not match the table.
pub fn analyze(
    trace: &SampleTrace,
    cfg: &AnalysisConfig,
    table: &AddressingTable,
    baseline: Option<&BaselineProfile>,
) -> Result<Analysis, AnalysisError> {
    table.validate()?;
    let detection = detect_pulses(trace, &cfg.detector)?;
    let shots: Vec<Shot> = segment_shots(&detection.pulses, cfg.gap_threshold_s)
        .into_iter()
        .map(|shot| match baseline {
            Some(profile) => label_regions(&shot, profile),
            None => Shot { region_labels: vec![Region::B; shot.pulses.len()], ..shot },
        })
        .collect();
    let events = shots.iter().map(|s| classify_gates(s, table, &cfg.classifier)).collect();
    Ok(Analysis { detection, shots, events })
}

/// Learns the baseline from a trace of repeated empty-circuit shots.
pub fn profile_trace(trace: &SampleTrace, cfg: &AnalysisConfig) -> Result<(BaselineProfile, Vec<Shot>), AnalysisError> {
    let detection = detect_pulses(trace, &cfg.detector)?;
    let shots = segment_shots(&detection.pulses, cfg.gap_threshold_s);
    let profile = profile_baseline(&shots, &cfg.baseline_config(&detection))?;
    Ok((profile, shots))
}
