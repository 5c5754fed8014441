use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Component, Spectrogram};

/// A detected transient event.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Pulse {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub duration_s: f64,
    /// Power-weighted mean frequency over the component.
    pub center_freq_hz: f64,
    pub peak_power: f64,
    pub component_id: usize,
    pub n_cells: usize,
    pub first_frame: usize,
    pub last_frame: usize,
    pub low_bin: usize,
    pub high_bin: usize,
}

impl Pulse {
    /// Total order used everywhere pulses are sorted: start time, then
    /// center frequency.
    pub fn cmp_time_freq(&self, other: &Self) -> Ordering {
        self.t_start_s.total_cmp(&other.t_start_s).then(self.center_freq_hz.total_cmp(&other.center_freq_hz))
    }

    /// Length of the intersection of the two time intervals.
    pub fn overlap_s(&self, other: &Self) -> f64 {
        let lo = self.t_start_s.max(other.t_start_s);
        let hi = self.t_end_s.min(other.t_end_s);
        (hi - lo).max(0.0)
    }
}

/// Turns labeled components into pulse records sorted by
/// `(t_start, center_freq)`.
pub fn extract_pulses(spec: &Spectrogram, components: &[Component]) -> Vec<Pulse> {
    let mut pulses: Vec<Pulse> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_empty())
        .map(|(id, c)| {
            let mut weight = 0.0;
            let mut moment = 0.0;
            let mut peak = 0.0f64;
            for cell in c.cells() {
                let p = spec.power(cell.freq, cell.time);
                weight += p;
                moment += p * spec.freq_of_bin(cell.freq);
                peak = peak.max(p);
            }
            let center_freq_hz = if weight > 0.0 {
                moment / weight
            } else {
                c.cells().iter().map(|cell| spec.freq_of_bin(cell.freq)).sum::<f64>() / c.len() as f64
            };
            let t_start_s = spec.time_of_frame(c.min_time());
            let t_end_s = spec.time_of_frame(c.max_time());
            Pulse {
                t_start_s,
                t_end_s,
                duration_s: t_end_s - t_start_s,
                center_freq_hz,
                peak_power: peak,
                component_id: id,
                n_cells: c.len(),
                first_frame: c.min_time(),
                last_frame: c.max_time(),
                low_bin: c.min_freq(),
                high_bin: c.max_freq(),
            }
        })
        .collect();
    pulses.sort_by(Pulse::cmp_time_freq);
    pulses
}
