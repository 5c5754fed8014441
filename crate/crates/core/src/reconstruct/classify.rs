use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{AddressingTable, Shot};
use crate::sigproc::Pulse;
use crate::Region;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum EventKind {
    SingleQuditRotation,
    #[cfg_attr(feature = "serde", serde(rename = "MS"))]
    Ms,
}

/// Measured addressing pulse behind an event.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PulseMeasurement {
    pub ion: usize,
    pub center_freq_hz: f64,
    pub duration_s: f64,
}

/// A reconstructed gate. The rotation axis is not observable and is not
/// reported.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateEvent {
    pub kind: EventKind,
    /// Sorted ascending.
    pub ions: Vec<usize>,
    pub theta_est_rad: Option<f64>,
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub confidence: f64,
    /// Single-ion pulse whose length belongs to the MS population.
    pub duration_anomalous: bool,
    pub pulses: Vec<PulseMeasurement>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassifierConfig {
    pub rabi_rad_per_s: f64,
    pub rabi_per_ion: Vec<f64>,
    pub pad_s: f64,
    /// Minimum overlap, as a fraction of the shorter pulse, for two pulses
    /// to form an MS gate.
    pub min_overlap: f64,
    /// Single pulses longer than this are flagged as anomalous.
    pub ms_duration_threshold_s: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        Self {
            rabi_rad_per_s: 2.0 * PI * 12.5e3,
            rabi_per_ion: Vec::new(),
            pad_s: 10e-6,
            min_overlap: 0.5,
            ms_duration_threshold_s: 100e-6,
        }
    }
}

impl ClassifierConfig {
    pub fn rabi_for(&self, ion: usize) -> f64 {
        self.rabi_per_ion.get(ion).copied().unwrap_or(self.rabi_rad_per_s)
    }
}

fn overlap_fraction(a: &Pulse, b: &Pulse) -> f64 {
    let shorter = a.duration_s.min(b.duration_s);
    if shorter > 0.0 {
        (a.overlap_s(b) / shorter).min(1.0)
    } else {
        let (point, other) = if a.duration_s <= b.duration_s { (a, b) } else { (b, a) };
        if other.t_start_s <= point.t_start_s && point.t_start_s <= other.t_end_s {
            1.0
        } else {
            0.0
        }
    }
}

/// Turns the region-B pulses of a labeled shot into gate events.
///
/// Two pulses on different ions that overlap by at least `min_overlap` of
/// the shorter one form an MS gate; pairs are taken greedily by overlap.
/// Every other assigned pulse is a single-qudit rotation with
/// `θ ≈ Ω · (duration − pad)`.
pub fn classify_gates(shot: &Shot, table: &AddressingTable, cfg: &ClassifierConfig) -> Vec<GateEvent> {
    let mut cand: Vec<(&Pulse, usize)> =
        shot.pulses_in(Region::B).filter_map(|p| table.lookup(p.center_freq_hz).map(|(ion, _)| (p, ion))).collect();
    cand.sort_by(|a, b| a.0.cmp_time_freq(b.0).then(a.1.cmp(&b.1)));

    let mut pairs = Vec::new();
    for i in 0..cand.len() {
        for j in i + 1..cand.len() {
            if cand[i].1 == cand[j].1 {
                continue;
            }
            let frac = overlap_fraction(cand[i].0, cand[j].0);
            if frac >= cfg.min_overlap {
                pairs.push((i, j, frac));
            }
        }
    }
    pairs.sort_by(|a, b| b.2.total_cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));

    let mut used = vec![false; cand.len()];
    let mut events = Vec::new();
    for (i, j, frac) in pairs {
        if used[i] || used[j] {
            continue;
        }
        used[i] = true;
        used[j] = true;
        let (a, b) = if cand[i].1 < cand[j].1 { (cand[i], cand[j]) } else { (cand[j], cand[i]) };
        events.push(GateEvent {
            kind: EventKind::Ms,
            ions: vec![a.1, b.1],
            theta_est_rad: None,
            t_start_s: a.0.t_start_s.min(b.0.t_start_s),
            t_end_s: a.0.t_end_s.max(b.0.t_end_s),
            confidence: frac,
            duration_anomalous: false,
            pulses: vec![measurement(a), measurement(b)],
        });
    }
    for (k, &(p, ion)) in cand.iter().enumerate() {
        if used[k] {
            continue;
        }
        let anomalous = p.duration_s > cfg.ms_duration_threshold_s;
        let mut confidence = table.closeness(ion, p.center_freq_hz);
        if anomalous {
            confidence *= 0.5;
        }
        events.push(GateEvent {
            kind: EventKind::SingleQuditRotation,
            ions: vec![ion],
            theta_est_rad: Some(cfg.rabi_for(ion) * (p.duration_s - cfg.pad_s).max(0.0)),
            t_start_s: p.t_start_s,
            t_end_s: p.t_end_s,
            confidence,
            duration_anomalous: anomalous,
            pulses: vec![measurement((p, ion))],
        });
    }
    events.sort_by(|a, b| a.t_start_s.total_cmp(&b.t_start_s).then_with(|| a.ions.cmp(&b.ions)));
    events
}

fn measurement((p, ion): (&Pulse, usize)) -> PulseMeasurement {
    PulseMeasurement { ion, center_freq_hz: p.center_freq_hz, duration_s: p.duration_s }
}
