//! Profiling the fixed preparation/readout pattern from empty-circuit runs
//! and labeling regions A/B/C with it.

use alloc::vec::Vec;

use super::{ReconstructError, Shot};
use crate::sigproc::Pulse;
use crate::Region;

/// One recurring pulse of the fixed pattern.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TemplatePulse {
    pub center_freq_hz: f64,
    pub duration_s: f64,
    pub freq_tol_hz: f64,
    pub dur_tol_s: f64,
    /// Mean start time relative to the shot start.
    pub offset_s: f64,
    /// Fraction of profiled shots containing this pulse.
    pub occurrence: f64,
}

impl TemplatePulse {
    pub fn matches(&self, p: &Pulse) -> bool {
        (p.center_freq_hz - self.center_freq_hz).abs() <= self.freq_tol_hz
            && (p.duration_s - self.duration_s).abs() <= self.dur_tol_s
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaselineProfile {
    pub preamble_pulses: Vec<TemplatePulse>,
    pub readout_pulses: Vec<TemplatePulse>,
}

impl BaselineProfile {
    pub fn is_empty(&self) -> bool {
        self.preamble_pulses.is_empty() && self.readout_pulses.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BaselineConfig {
    /// Minimum fraction of shots a pulse must appear in.
    pub min_occurrence: f64,
    pub sigma_mult: f64,
    /// Lower bound of the frequency tolerance, normally one STFT bin.
    pub freq_tol_floor_hz: f64,
    /// Lower bound of the duration tolerance, normally two hops.
    pub dur_tol_floor_s: f64,
}

impl BaselineConfig {
    pub fn for_grid(bin_hz: f64, hop_s: f64) -> Self {
        Self { min_occurrence: 0.8, sigma_mult: 3.0, freq_tol_floor_hz: bin_hz, dur_tol_floor_s: 2.0 * hop_s }
    }
}

struct Cluster {
    freq: f64,
    dur: f64,
    // (shot, pulse) pairs
    members: Vec<(usize, usize)>,
}

/// Learns the preparation and readout pattern from shots of an empty
/// circuit.
///
/// Pulses are clustered by `(center_freq, duration)`; the k-th occurrence
/// of a cluster within a shot is a template pulse if it shows up in at
/// least `min_occurrence` of the shots. The template is split into
/// preamble and readout at its longest internal gap.
pub fn profile_baseline(shots: &[Shot], cfg: &BaselineConfig) -> Result<BaselineProfile, ReconstructError> {
    if shots.len() < 3 {
        return Err(ReconstructError::InsufficientShots { got: shots.len(), need: 3 });
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    for (si, shot) in shots.iter().enumerate() {
        for (pi, p) in shot.pulses.iter().enumerate() {
            let best = clusters
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    (p.center_freq_hz - c.freq).abs() <= cfg.freq_tol_floor_hz
                        && (p.duration_s - c.dur).abs() <= cfg.dur_tol_floor_s
                })
                .map(|(ci, c)| {
                    let d = (p.center_freq_hz - c.freq) / cfg.freq_tol_floor_hz;
                    let e = (p.duration_s - c.dur) / cfg.dur_tol_floor_s;
                    (ci, d * d + e * e)
                })
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(ci, _)| ci);
            match best {
                Some(ci) => {
                    let c = &mut clusters[ci];
                    let n = c.members.len() as f64;
                    c.freq += (p.center_freq_hz - c.freq) / (n + 1.0);
                    c.dur += (p.duration_s - c.dur) / (n + 1.0);
                    c.members.push((si, pi));
                }
                None => {
                    clusters.push(Cluster { freq: p.center_freq_hz, dur: p.duration_s, members: alloc::vec![(si, pi)] })
                }
            }
        }
    }

    let n_shots = shots.len() as f64;
    let mut template = Vec::new();
    for c in &clusters {
        // members are already in (shot, time) order; split by occurrence rank
        let mut by_rank: Vec<Vec<&Pulse>> = Vec::new();
        let mut offsets: Vec<Vec<f64>> = Vec::new();
        let mut prev_shot = usize::MAX;
        let mut rank = 0;
        for &(si, pi) in &c.members {
            rank = if si == prev_shot { rank + 1 } else { 0 };
            prev_shot = si;
            if by_rank.len() <= rank {
                by_rank.push(Vec::new());
                offsets.push(Vec::new());
            }
            let p = &shots[si].pulses[pi];
            by_rank[rank].push(p);
            offsets[rank].push(p.t_start_s - shots[si].t_start_s);
        }
        for (members, offs) in by_rank.iter().zip(&offsets) {
            let occurrence = members.len() as f64 / n_shots;
            if occurrence + 1e-12 < cfg.min_occurrence {
                continue;
            }
            let (f_mean, f_sigma) = mean_sigma(members.iter().map(|p| p.center_freq_hz));
            let (d_mean, d_sigma) = mean_sigma(members.iter().map(|p| p.duration_s));
            let (offset_s, _) = mean_sigma(offs.iter().copied());
            template.push(TemplatePulse {
                center_freq_hz: f_mean,
                duration_s: d_mean,
                freq_tol_hz: (cfg.sigma_mult * f_sigma).max(cfg.freq_tol_floor_hz),
                dur_tol_s: (cfg.sigma_mult * d_sigma).max(cfg.dur_tol_floor_s),
                offset_s,
                occurrence,
            });
        }
    }
    template.sort_by(|a, b| a.offset_s.total_cmp(&b.offset_s).then(a.center_freq_hz.total_cmp(&b.center_freq_hz)));

    let split = template
        .windows(2)
        .enumerate()
        .map(|(k, w)| (k, w[1].offset_s - (w[0].offset_s + w[0].duration_s)))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .map_or(template.len(), |(k, _)| k + 1);
    let readout_pulses = template.split_off(split);
    Ok(BaselineProfile { preamble_pulses: template, readout_pulses })
}

fn mean_sigma(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

/// Labels a shot's pulses: the leading run matching preamble templates is
/// A, the trailing run matching readout templates is C, the rest is B.
pub fn label_regions(shot: &Shot, profile: &BaselineProfile) -> Shot {
    let mut out = shot.clone();
    let n = shot.pulses.len();
    out.region_labels = alloc::vec![Region::B; n];

    let mut a_end = 0;
    while a_end < n
        && a_end < profile.preamble_pulses.len()
        && profile.preamble_pulses.iter().any(|t| t.matches(&shot.pulses[a_end]))
    {
        out.region_labels[a_end] = Region::A;
        a_end += 1;
    }
    let mut c_start = n;
    while c_start > a_end
        && n - c_start < profile.readout_pulses.len()
        && profile.readout_pulses.iter().any(|t| t.matches(&shot.pulses[c_start - 1]))
    {
        c_start -= 1;
        out.region_labels[c_start] = Region::C;
    }
    out
}
