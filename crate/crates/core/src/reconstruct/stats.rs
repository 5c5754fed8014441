use alloc::vec::Vec;

use super::{EventKind, GateEvent};

/// Mean and population standard deviation of one pulse population.
/// Means and deviations are NaN when `count == 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PulseSummary {
    pub count: usize,
    pub dur_mean_s: f64,
    pub dur_sigma_s: f64,
    pub freq_mean_hz: f64,
    pub freq_sigma_hz: f64,
}

impl PulseSummary {
    fn from_values(mut durs: Vec<f64>, mut freqs: Vec<f64>) -> Self {
        let (dur_mean_s, dur_sigma_s) = mean_sigma(&mut durs);
        let (freq_mean_hz, freq_sigma_hz) = mean_sigma(&mut freqs);
        Self { count: durs.len(), dur_mean_s, dur_sigma_s, freq_mean_hz, freq_sigma_hz }
    }
}

// Sorting first makes the result independent of input order, bit for bit.
fn mean_sigma(v: &mut [f64]) -> (f64, f64) {
    if v.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IonStats {
    pub ion: usize,
    pub single: PulseSummary,
    /// Every MS gate the ion takes part in contributes its own pulse.
    pub ms: PulseSummary,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StatsTable {
    pub rows: Vec<IonStats>,
}

impl StatsTable {
    pub fn ion(&self, ion: usize) -> Option<&IonStats> {
        self.rows.iter().find(|r| r.ion == ion)
    }
}

/// Per-ion duration and frequency statistics of classified pulses, split by
/// single-qudit and MS events. Rows cover ions `0..=max ion seen`.
pub fn aggregate_stats<'a, I>(events: I) -> StatsTable
where
    I: IntoIterator<Item = &'a GateEvent>,
{
    // (single durs, single freqs, ms durs, ms freqs) per ion
    let mut acc: Vec<[Vec<f64>; 4]> = Vec::new();
    for ev in events {
        let offset = if ev.kind == EventKind::Ms { 2 } else { 0 };
        for m in &ev.pulses {
            if acc.len() <= m.ion {
                acc.resize_with(m.ion + 1, Default::default);
            }
            acc[m.ion][offset].push(m.duration_s);
            acc[m.ion][offset + 1].push(m.center_freq_hz);
        }
    }
    let rows = acc
        .into_iter()
        .enumerate()
        .map(|(ion, [sd, sf, md, mf])| IonStats {
            ion,
            single: PulseSummary::from_values(sd, sf),
            ms: PulseSummary::from_values(md, mf),
        })
        .collect();
    StatsTable { rows }
}
