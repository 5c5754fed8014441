//! `.rftrace` files: little-endian `i16` samples plus a JSON sidecar.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use rfsc_core::SampleTrace;
use serde::{Deserialize, Serialize};

pub const FULL_SCALE: f64 = 32767.0;

#[derive(Debug, thiserror::Error)]
pub enum TraceFileError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("empty trace")]
    EmptyTrace,
    #[error("trace contains non-finite samples")]
    NonFinite,
    #[error("{path}: payload has odd length {len}")]
    OddPayload { path: PathBuf, len: usize },
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("{path}: invalid sidecar: {msg}")]
    InvalidSidecar { path: PathBuf, msg: String },
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> TraceFileError + '_ {
    move |source| TraceFileError::Io { path: path.to_path_buf(), source }
}

/// Metadata stored next to the payload; also the stream handshake.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sidecar {
    pub sample_rate_hz: f64,
    pub start_time_s: f64,
    /// Physical value of one ADC step.
    pub scale: f64,
    #[serde(default)]
    pub description: String,
    /// Set when a capture ended before the source did.
    #[serde(default)]
    pub truncated: bool,
    /// Number of samples in the payload.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_samples: Option<u64>,
}

impl Sidecar {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.sample_rate_hz.is_finite() && self.sample_rate_hz > 0.0) {
            return Err("sample_rate_hz must be positive".into());
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err("scale must be positive".into());
        }
        if !self.start_time_s.is_finite() {
            return Err("start_time_s must be finite".into());
        }
        Ok(())
    }
}

/// A quantized trace as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFile {
    pub sidecar: Sidecar,
    pub samples: Vec<i16>,
}

/// Sidecar path for a payload path: `x.rftrace` → `x.rftrace.json`.
pub fn sidecar_path(payload: &Path) -> PathBuf {
    let mut name = payload.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

impl TraceFile {
    /// Quantizes so that the largest magnitude maps to ±32767. An all-zero
    /// trace gets scale 1.
    pub fn from_trace(trace: &SampleTrace, description: &str) -> Result<Self, TraceFileError> {
        let peak = trace.samples.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let scale = if peak > 0.0 { peak / FULL_SCALE } else { 1.0 };
        Self::with_scale(trace, description, scale).map(|(f, _)| f)
    }

    /// Quantizes with a fixed scale; returns the number of clipped samples.
    pub fn with_scale(trace: &SampleTrace, description: &str, scale: f64) -> Result<(Self, usize), TraceFileError> {
        if trace.samples.is_empty() {
            return Err(TraceFileError::EmptyTrace);
        }
        if trace.samples.iter().any(|x| !x.is_finite()) {
            return Err(TraceFileError::NonFinite);
        }
        let mut clipped = 0;
        let samples = trace
            .samples
            .iter()
            .map(|x| {
                let q = (x / scale).round();
                if q.abs() > FULL_SCALE {
                    clipped += 1;
                }
                q.clamp(-FULL_SCALE, FULL_SCALE) as i16
            })
            .collect::<Vec<_>>();
        let sidecar = Sidecar {
            sample_rate_hz: trace.sample_rate_hz,
            start_time_s: trace.start_time_s,
            scale,
            description: description.to_owned(),
            truncated: false,
            n_samples: Some(samples.len() as u64),
        };
        Ok((Self { sidecar, samples }, clipped))
    }

    pub fn to_trace(&self) -> Result<SampleTrace, TraceFileError> {
        if self.samples.is_empty() {
            return Err(TraceFileError::EmptyTrace);
        }
        let samples = self.samples.iter().map(|&q| f64::from(q) * self.sidecar.scale).collect();
        let trace = SampleTrace::new(samples, self.sidecar.sample_rate_hz)
            .map_err(|e| TraceFileError::InvalidTrace(e.to_string()))?;
        Ok(trace.with_start_time(self.sidecar.start_time_s))
    }

    pub fn payload_bytes(&self) -> Vec<u8> {
        self.samples.iter().flat_map(|s| s.to_le_bytes()).collect()
    }

    /// Writes the payload and its sidecar.
    pub fn write(&self, path: &Path) -> Result<(), TraceFileError> {
        let mut sidecar = self.sidecar.clone();
        sidecar.n_samples = Some(self.samples.len() as u64);
        fs::write(path, self.payload_bytes()).map_err(io_err(path))?;
        let side = sidecar_path(path);
        let mut json = serde_json::to_string_pretty(&sidecar).expect("sidecar serializes");
        json.push('\n');
        fs::write(&side, json).map_err(io_err(&side))
    }

    pub fn read(path: &Path) -> Result<Self, TraceFileError> {
        let side = sidecar_path(path);
        let text = fs::read_to_string(&side).map_err(io_err(&side))?;
        let sidecar: Sidecar = serde_json::from_str(&text)
            .map_err(|e| TraceFileError::InvalidSidecar { path: side.clone(), msg: e.to_string() })?;
        sidecar.validate().map_err(|msg| TraceFileError::InvalidSidecar { path: side.clone(), msg })?;
        let bytes = fs::read(path).map_err(io_err(path))?;
        if bytes.len() % 2 != 0 {
            return Err(TraceFileError::OddPayload { path: path.to_path_buf(), len: bytes.len() });
        }
        let samples = bytes.chunks_exact(2).map(|b| i16::from_le_bytes([b[0], b[1]])).collect();
        Ok(Self { sidecar, samples })
    }
}

/// Quantizes and writes a trace; returns the written file.
pub fn write_trace(trace: &SampleTrace, path: &Path, description: &str) -> Result<TraceFile, TraceFileError> {
    let file = TraceFile::from_trace(trace, description)?;
    file.write(path)?;
    Ok(file)
}

pub fn read_trace(path: &Path) -> Result<SampleTrace, TraceFileError> {
    TraceFile::read(path)?.to_trace()
}
