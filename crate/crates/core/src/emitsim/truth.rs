use alloc::vec::Vec;

use super::{GateKind, NativeGate};
use crate::Region;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Span {
    pub start_s: f64,
    pub end_s: f64,
}

impl Span {
    pub fn contains(&self, t: f64) -> bool {
        self.start_s <= t && t <= self.end_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum PulseRole {
    Cooling,
    Addressing,
    GatePrep,
    Readout,
}

/// One emitted tone as the simulator placed it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TruePulse {
    pub region: Region,
    pub role: PulseRole,
    /// Index into [`GroundTruth::gates`] for gate pulses.
    pub gate_index: Option<usize>,
    pub kind: Option<GateKind>,
    /// Ion this tone addresses.
    pub ion: Option<usize>,
    pub t_start_s: f64,
    pub t_end_s: f64,
    /// True tone frequency before sampling.
    pub freq_hz: f64,
    /// Frequency observed after sampling.
    pub alias_hz: f64,
    pub decoy: bool,
    /// False if the front-end passband removed the tone.
    pub in_band: bool,
}

impl TruePulse {
    pub fn duration_s(&self) -> f64 {
        self.t_end_s - self.t_start_s
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShotTruth {
    pub index: usize,
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub region_a: Span,
    pub region_b: Option<Span>,
    pub region_c: Span,
    pub pulses: Vec<TruePulse>,
}

impl ShotTruth {
    pub fn region_pulses(&self, region: Region) -> impl Iterator<Item = &TruePulse> {
        self.pulses.iter().filter(move |p| p.region == region)
    }

    /// Addressing pulses of region B that survived the passband.
    pub fn addressing_pulses(&self) -> impl Iterator<Item = &TruePulse> {
        self.pulses.iter().filter(|p| p.role == PulseRole::Addressing && p.in_band)
    }
}

/// Oracle record of a synthesized trace.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruth {
    pub sample_rate_hz: f64,
    /// Ions carrying the computation; decoys are numbered after them.
    pub n_computational_ions: usize,
    /// Executed gate list, decoys included.
    pub gates: Vec<NativeGate>,
    pub shots: Vec<ShotTruth>,
}

impl GroundTruth {
    /// `(kind, sorted ions, decoy)` per executed gate.
    pub fn gate_sequence(&self) -> Vec<(GateKind, Vec<usize>, bool)> {
        self.gates.iter().map(|g| (g.kind, g.ion_set(), g.decoy)).collect()
    }
}
