//! Flat `key = value` configuration files.
//!
//! One file configures both the simulator and the analyzer. Lines starting
//! with `#` are comments. Lists are comma-separated, and structured list
//! items use `:` between their fields. Every key is optional; unknown or
//! repeated keys are errors. See `docs/config.md` for the full key list.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use rfsc_core::emitsim::{DecoyConfig, EmissionConfig, InterferenceConfig, MsPair, NoiseBand, PrepTone, Tone};
use rfsc_core::sigproc::Band;
use rfsc_core::AnalysisConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given twice")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: bad value for `{key}`: {msg}")]
    BadValue { line: usize, key: String, msg: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Everything a config file can set.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub emission: EmissionConfig,
    pub analysis: AnalysisConfig,
    /// `(alias center, tolerance)` per ion, in Hz. `None` uses the measured
    /// table with a one-bin floor.
    pub addressing_table_hz: Option<Vec<(f64, f64)>>,
}

pub const KEYS: &[&str] = &[
    // simulator
    "sample_rate_hz",
    "addressing_freq_hz",
    "rabi_rad_per_s",
    "rabi_per_ion",
    "pad_s",
    "ms_pairs",
    "ms_default_duration_s",
    "gate_gap_s",
    "region_gap_s",
    "shot_gap_s",
    "edge_s",
    "amplitude",
    "region_a",
    "region_c",
    "noise_sigma",
    "bandpass_hz",
    "duration_jitter_s",
    "freq_jitter_hz",
    "prep_tone",
    "decoy_ions",
    "decoy_rate",
    "decoy_seed",
    "interference_bands",
    "interference_burst_s",
    "interference_duty",
    // analyzer
    "segment_len",
    "overlap_len",
    "alpha",
    "min_cells",
    "gap_threshold_s",
    "classifier_rabi_rad_per_s",
    "classifier_rabi_per_ion",
    "classifier_pad_s",
    "min_overlap",
    "ms_duration_threshold_s",
    "baseline_min_occurrence",
    "baseline_sigma_mult",
    "addressing_table_hz",
];

fn real(v: &str) -> Result<f64, String> {
    let x: f64 = v.trim().parse().map_err(|_| format!("`{}` is not a number", v.trim()))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(format!("`{}` is not finite", v.trim()))
    }
}

fn integer<T: std::str::FromStr>(v: &str) -> Result<T, String> {
    v.trim().parse().map_err(|_| format!("`{}` is not a non-negative integer", v.trim()))
}

fn items(v: &str) -> Vec<&str> {
    let v = v.trim();
    if v.is_empty() || v == "none" {
        Vec::new()
    } else {
        v.split(',').map(str::trim).collect()
    }
}

fn reals(v: &str) -> Result<Vec<f64>, String> {
    items(v).into_iter().map(real).collect()
}

fn fields<const N: usize>(item: &str) -> Result<[&str; N], String> {
    let parts: Vec<&str> = item.split(':').collect();
    parts.try_into().map_err(|_| format!("`{item}` should have {N} `:`-separated fields"))
}

fn tones(v: &str) -> Result<Vec<Tone>, String> {
    items(v)
        .into_iter()
        .map(|item| {
            let [f, d] = fields(item)?;
            Ok(Tone::new(real(f)?, real(d)?))
        })
        .collect()
}

fn ms_pairs(v: &str) -> Result<Vec<MsPair>, String> {
    items(v)
        .into_iter()
        .map(|item| {
            let parts: Vec<&str> = item.split(':').collect();
            let (pair, dur, jitter) = match parts.as_slice() {
                [p, d] => (*p, real(d)?, 0.0),
                [p, d, j] => (*p, real(d)?, real(j)?),
                _ => return Err(format!("`{item}` should be `a-b:duration_s[:jitter_s]`")),
            };
            let (a, b) = pair.split_once('-').ok_or_else(|| format!("`{pair}` should be `a-b`"))?;
            Ok(MsPair { ions: (integer(a)?, integer(b)?), duration_s: dur, jitter_s: jitter })
        })
        .collect()
}

fn pairs(v: &str) -> Result<Vec<(f64, f64)>, String> {
    items(v)
        .into_iter()
        .map(|item| {
            let [a, b] = fields(item)?;
            Ok((real(a)?, real(b)?))
        })
        .collect()
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text =
            fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let mut seen = BTreeSet::new();
        let mut decoy: Option<DecoyConfig> = None;
        let mut interference: Option<InterferenceConfig> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.trim();
            if content.is_empty() || content.starts_with('#') {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::Syntax { line, msg: format!("expected `key = value`, got `{content}`") })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(ConfigError::UnknownKey { line, key: key.to_owned() });
            }
            if !seen.insert(key.to_owned()) {
                return Err(ConfigError::DuplicateKey { line, key: key.to_owned() });
            }
            let bad = |msg: String| ConfigError::BadValue { line, key: key.to_owned(), msg };
            let e = &mut cfg.emission;
            let a = &mut cfg.analysis;
            let decoy_entry = || DecoyConfig { n_decoys: 0, rng_seed: 0, gate_rate: 1.0 };
            match key {
                "sample_rate_hz" => e.sample_rate_hz = real(value).map_err(bad)?,
                "addressing_freq_hz" => e.addressing_freq_hz = reals(value).map_err(bad)?,
                "rabi_rad_per_s" => e.rabi_rad_per_s = real(value).map_err(bad)?,
                "rabi_per_ion" => e.rabi_per_ion = reals(value).map_err(bad)?,
                "pad_s" => e.pad_s = real(value).map_err(bad)?,
                "ms_pairs" => e.ms_pairs = ms_pairs(value).map_err(bad)?,
                "ms_default_duration_s" => e.ms_default_duration_s = real(value).map_err(bad)?,
                "gate_gap_s" => e.gate_gap_s = real(value).map_err(bad)?,
                "region_gap_s" => e.region_gap_s = real(value).map_err(bad)?,
                "shot_gap_s" => e.shot_gap_s = real(value).map_err(bad)?,
                "edge_s" => e.edge_s = real(value).map_err(bad)?,
                "amplitude" => e.amplitude = real(value).map_err(bad)?,
                "region_a" => e.region_a = tones(value).map_err(bad)?,
                "region_c" => e.region_c = tones(value).map_err(bad)?,
                "noise_sigma" => e.noise_sigma = real(value).map_err(bad)?,
                "bandpass_hz" => match reals(value).map_err(bad)?.as_slice() {
                    [lo, hi] => e.bandpass = Band::new(*lo, *hi),
                    _ => return Err(bad("expected `low, high`".into())),
                },
                "duration_jitter_s" => e.duration_jitter_s = reals(value).map_err(bad)?,
                "freq_jitter_hz" => e.freq_jitter_hz = reals(value).map_err(bad)?,
                "prep_tone" => {
                    e.prep_tone = match value.trim() {
                        "none" | "" => None,
                        v => {
                            let [f, amp] = fields(v).map_err(bad)?;
                            Some(PrepTone { freq_hz: real(f).map_err(bad)?, amplitude: real(amp).map_err(bad)? })
                        }
                    }
                }
                "decoy_ions" => decoy.get_or_insert_with(decoy_entry).n_decoys = integer(value).map_err(bad)?,
                "decoy_rate" => decoy.get_or_insert_with(decoy_entry).gate_rate = real(value).map_err(bad)?,
                "decoy_seed" => decoy.get_or_insert_with(decoy_entry).rng_seed = integer(value).map_err(bad)?,
                "interference_bands" => {
                    let bands = items(value)
                        .into_iter()
                        .map(|item| {
                            let [lo, hi, p] = fields(item)?;
                            Ok(NoiseBand { band: Band::new(real(lo)?, real(hi)?), power: real(p)? })
                        })
                        .collect::<Result<Vec<_>, String>>()
                        .map_err(bad)?;
                    interference.get_or_insert_with(Default::default).bands = bands;
                }
                "interference_burst_s" => {
                    interference.get_or_insert_with(Default::default).burst_s = real(value).map_err(bad)?
                }
                "interference_duty" => {
                    interference.get_or_insert_with(Default::default).duty = real(value).map_err(bad)?
                }
                "segment_len" => a.detector.stft.segment_len = integer(value).map_err(bad)?,
                "overlap_len" => a.detector.stft.overlap_len = integer(value).map_err(bad)?,
                "alpha" => a.detector.alpha = real(value).map_err(bad)?,
                "min_cells" => a.detector.min_cells = integer(value).map_err(bad)?,
                "gap_threshold_s" => a.gap_threshold_s = real(value).map_err(bad)?,
                "classifier_rabi_rad_per_s" => a.classifier.rabi_rad_per_s = real(value).map_err(bad)?,
                "classifier_rabi_per_ion" => a.classifier.rabi_per_ion = reals(value).map_err(bad)?,
                "classifier_pad_s" => a.classifier.pad_s = real(value).map_err(bad)?,
                "min_overlap" => a.classifier.min_overlap = real(value).map_err(bad)?,
                "ms_duration_threshold_s" => a.classifier.ms_duration_threshold_s = real(value).map_err(bad)?,
                "baseline_min_occurrence" => a.baseline_min_occurrence = real(value).map_err(bad)?,
                "baseline_sigma_mult" => a.baseline_sigma_mult = real(value).map_err(bad)?,
                "addressing_table_hz" => cfg.addressing_table_hz = Some(pairs(value).map_err(bad)?),
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.emission.decoy = decoy.filter(|d| d.n_decoys > 0);
        cfg.emission.interference = interference.filter(|i| !i.bands.is_empty());
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.emission.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.analysis.detector.stft.validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let a = &self.analysis;
        if !(a.detector.alpha >= 0.0 && a.gap_threshold_s > 0.0) {
            return Err(ConfigError::Invalid("alpha must be >= 0 and gap_threshold_s > 0".into()));
        }
        if !(0.0..=1.0).contains(&a.classifier.min_overlap) || !(0.0..=1.0).contains(&a.baseline_min_occurrence) {
            return Err(ConfigError::Invalid("min_overlap and baseline_min_occurrence must lie in [0, 1]".into()));
        }
        Ok(())
    }
}
