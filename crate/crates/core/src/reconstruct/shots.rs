use alloc::vec;
use alloc::vec::Vec;

use crate::sigproc::Pulse;
use crate::Region;

/// Default idle time that separates shots.
pub const DEFAULT_GAP_THRESHOLD_S: f64 = 1e-3;

/// Pulses of one circuit execution.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Shot {
    pub index: usize,
    pub pulses: Vec<Pulse>,
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub region_labels: Vec<Region>,
}

impl Shot {
    pub fn new(index: usize, pulses: Vec<Pulse>) -> Self {
        let t_start_s = pulses.iter().map(|p| p.t_start_s).fold(f64::INFINITY, f64::min);
        let t_end_s = pulses.iter().map(|p| p.t_end_s).fold(f64::NEG_INFINITY, f64::max);
        let region_labels = vec![Region::Unknown; pulses.len()];
        Self { index, pulses, t_start_s, t_end_s, region_labels }
    }

    pub fn pulses_in(&self, region: Region) -> impl Iterator<Item = &Pulse> {
        self.pulses.iter().zip(&self.region_labels).filter(move |(_, r)| **r == region).map(|(p, _)| p)
    }
}

/// Idle time before each pulse after the first: its start minus the latest
/// end seen so far.
pub fn idle_times(pulses: &[Pulse]) -> Vec<f64> {
    let mut out = Vec::with_capacity(pulses.len().saturating_sub(1));
    let mut latest_end = f64::NEG_INFINITY;
    for (i, p) in pulses.iter().enumerate() {
        if i > 0 {
            out.push(p.t_start_s - latest_end);
        }
        latest_end = latest_end.max(p.t_end_s);
    }
    out
}

/// Splits a sorted pulse list into shots wherever the idle time exceeds
/// `gap_threshold_s`.
pub fn segment_shots(pulses: &[Pulse], gap_threshold_s: f64) -> Vec<Shot> {
    let mut shots = Vec::new();
    let mut current: Vec<Pulse> = Vec::new();
    let mut latest_end = f64::NEG_INFINITY;
    for p in pulses {
        if !current.is_empty() && p.t_start_s - latest_end > gap_threshold_s {
            shots.push(Shot::new(shots.len(), core::mem::take(&mut current)));
            latest_end = f64::NEG_INFINITY;
        }
        latest_end = latest_end.max(p.t_end_s);
        current.push(p.clone());
    }
    if !current.is_empty() {
        shots.push(Shot::new(shots.len(), current));
    }
    shots
}

/// Idle time between consecutive shots.
pub fn inter_shot_gaps(shots: &[Shot]) -> Vec<f64> {
    shots.windows(2).map(|w| w[1].t_start_s - w[0].t_end_s).collect()
}
