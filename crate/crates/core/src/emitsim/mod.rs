//! Circuit-to-emission simulator used as ground truth for the analyzer.

mod config;
mod decoy;
mod gate;
mod interference;
mod synth;
mod truth;

pub use config::{
    duration_for, DecoyConfig, EmissionConfig, InterferenceConfig, MsPair, NoiseBand, PrepTone, Tone,
    DEFAULT_SAMPLE_RATE_HZ,
};
pub use decoy::apply_decoys;
pub use gate::{CircuitSpec, GateKind, NativeGate};
pub use interference::inject_interference;
pub use synth::synthesize;
pub use truth::{GroundTruth, PulseRole, ShotTruth, Span, TruePulse};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmitError {
    #[error("invalid emission configuration: {0}")]
    ConfigInvalid(&'static str),
    #[error("invalid circuit: {0}")]
    InvalidCircuit(&'static str),
    #[error("invalid gate: {0}")]
    InvalidGate(&'static str),
}
