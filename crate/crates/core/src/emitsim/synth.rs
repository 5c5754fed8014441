use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::config::duration_for;
use super::truth::{GroundTruth, PulseRole, ShotTruth, Span, TruePulse};
use super::{apply_decoys, inject_interference, CircuitSpec, EmissionConfig, EmitError, GateKind, Tone};
use crate::sigproc::{fold_frequency, SampleTrace};
use crate::Region;

struct Segment {
    freq_hz: f64,
    start_s: f64,
    duration_s: f64,
    amplitude: f64,
    phase: f64,
}

struct Timeline<'a> {
    cfg: &'a EmissionConfig,
    rng: ChaCha8Rng,
    segments: Vec<Segment>,
}

impl Timeline<'_> {
    fn normal(&mut self, sigma: f64) -> f64 {
        // always draw so the stream layout does not depend on the jitter values
        let z: f64 = Normal::new(0.0, 1.0).expect("unit normal").sample(&mut self.rng);
        z * sigma
    }

    fn emit(&mut self, freq_hz: f64, start_s: f64, duration_s: f64, amplitude: f64) -> bool {
        let phase = self.rng.random::<f64>() * 2.0 * PI;
        let in_band = self.cfg.bandpass.contains(freq_hz);
        if in_band && amplitude > 0.0 {
            self.segments.push(Segment { freq_hz, start_s, duration_s, amplitude, phase });
        }
        in_band
    }

    fn truth(
        &self,
        region: Region,
        role: PulseRole,
        freq_hz: f64,
        start_s: f64,
        duration_s: f64,
        in_band: bool,
    ) -> TruePulse {
        TruePulse {
            region,
            role,
            gate_index: None,
            kind: None,
            ion: None,
            t_start_s: start_s,
            t_end_s: start_s + duration_s,
            freq_hz,
            alias_hz: fold_frequency(freq_hz, self.cfg.sample_rate_hz),
            decoy: false,
            in_band,
        }
    }

    /// Places template tones back to back from `cursor`; returns the end of
    /// the last one.
    fn template(
        &mut self,
        tones: &[Tone],
        mut cursor: f64,
        region: Region,
        role: PulseRole,
        out: &mut Vec<TruePulse>,
    ) -> f64 {
        let mut end = cursor;
        for tone in tones {
            let in_band = self.emit(tone.freq_hz, cursor, tone.duration_s, self.cfg.amplitude);
            out.push(self.truth(region, role, tone.freq_hz, cursor, tone.duration_s, in_band));
            end = cursor + tone.duration_s;
            cursor = end + self.cfg.gate_gap_s;
        }
        end
    }
}

/// Renders a circuit into a sampled RF trace and the ground truth behind it.
///
/// Every shot is laid out as region A template tones, then one addressing
/// tone per gate ion (two simultaneous tones for MS), then region C template
/// tones, followed by `shot_gap_s` of silence. Tones are generated at their
/// true frequency and sampled directly, so anything above Nyquist aliases.
pub fn synthesize(
    circuit: &CircuitSpec,
    cfg: &EmissionConfig,
    seed: u64,
) -> Result<(SampleTrace, GroundTruth), EmitError> {
    cfg.validate()?;
    circuit.validate()?;
    let n_computational_ions = circuit.n_ions;
    let circuit = match &cfg.decoy {
        Some(d) => apply_decoys(circuit, d, d.rng_seed),
        None => circuit.clone(),
    };
    if circuit.n_ions > cfg.addressing_freq_hz.len() {
        return Err(EmitError::ConfigInvalid("addressing table has fewer entries than ions"));
    }
    for gate in &circuit.gates {
        if duration_for(gate, cfg) >= cfg.shot_gap_s {
            return Err(EmitError::ConfigInvalid("gate pulse longer than the shot gap"));
        }
    }

    let fs = cfg.sample_rate_hz;
    let min_len = (2.0 * cfg.edge_s).max(1.0 / fs);
    let mut tl = Timeline { cfg, rng: ChaCha8Rng::seed_from_u64(seed), segments: Vec::new() };
    let mut shots = Vec::with_capacity(circuit.n_shots);
    let mut cursor = 0.0;

    for index in 0..circuit.n_shots {
        let shot_start = cursor;
        let mut pulses = Vec::new();
        let a_end = tl.template(&cfg.region_a, shot_start, Region::A, PulseRole::Cooling, &mut pulses);
        let mut last_end = a_end;

        let mut region_b = None;
        if !circuit.gates.is_empty() {
            let b_start = last_end + cfg.region_gap_s;
            let mut t = b_start;
            for (gi, gate) in circuit.gates.iter().enumerate() {
                let nominal = duration_for(gate, cfg);
                let duration = match gate.kind {
                    GateKind::Ms => {
                        let sigma = cfg.ms_pair(gate.ions[0], gate.ions[1]).map_or(0.0, |p| p.jitter_s);
                        nominal + tl.normal(sigma)
                    }
                    _ => nominal + tl.normal(cfg.duration_jitter(gate.ions[0])),
                }
                .max(min_len);
                for &ion in &gate.ions {
                    let freq = cfg.addressing_freq_hz[ion] + tl.normal(cfg.freq_jitter(ion));
                    let in_band = tl.emit(freq, t, duration, cfg.amplitude);
                    let mut p = tl.truth(Region::B, PulseRole::Addressing, freq, t, duration, in_band);
                    p.gate_index = Some(gi);
                    p.kind = Some(gate.kind);
                    p.ion = Some(ion);
                    p.decoy = gate.decoy;
                    pulses.push(p);
                }
                if let Some(prep) = cfg.prep_tone {
                    let in_band = tl.emit(prep.freq_hz, t, duration, prep.amplitude);
                    let mut p = tl.truth(Region::B, PulseRole::GatePrep, prep.freq_hz, t, duration, in_band);
                    p.gate_index = Some(gi);
                    p.kind = Some(gate.kind);
                    p.decoy = gate.decoy;
                    pulses.push(p);
                }
                last_end = t + duration;
                t = last_end + cfg.gate_gap_s;
            }
            region_b = Some(Span { start_s: b_start, end_s: last_end });
        }

        let c_start = if cfg.region_c.is_empty() { last_end } else { last_end + cfg.region_gap_s };
        let c_end = tl.template(&cfg.region_c, c_start, Region::C, PulseRole::Readout, &mut pulses);
        let shot_end = c_end.max(last_end);
        shots.push(ShotTruth {
            index,
            t_start_s: shot_start,
            t_end_s: shot_end,
            region_a: Span { start_s: shot_start, end_s: a_end },
            region_b,
            region_c: Span { start_s: c_start, end_s: c_end },
            pulses,
        });
        cursor = shot_end + cfg.shot_gap_s;
    }

    let n_samples = libm::ceil(cursor * fs) as usize;
    let mut samples = vec![0.0; n_samples.max(1)];
    for seg in &tl.segments {
        render(&mut samples, seg, fs, cfg.edge_s);
    }
    if cfg.noise_sigma > 0.0 {
        let noise = Normal::new(0.0, cfg.noise_sigma).map_err(|_| EmitError::ConfigInvalid("noise_sigma"))?;
        for x in samples.iter_mut() {
            *x += noise.sample(&mut tl.rng);
        }
    }

    let mut trace = SampleTrace { samples, sample_rate_hz: fs, start_time_s: 0.0 };
    if let Some(interference) = &cfg.interference {
        trace = inject_interference(&trace, interference, seed ^ 0x5eed_1f7e_u64)?;
    }
    let truth = GroundTruth { sample_rate_hz: fs, n_computational_ions, gates: circuit.gates, shots };
    Ok((trace, truth))
}

/// Adds one raised-cosine-edged tone to `out`. Covers samples with
/// `start <= n/fs < start + duration`.
fn render(out: &mut [f64], seg: &Segment, fs: f64, edge_s: f64) {
    let end_s = seg.start_s + seg.duration_s;
    let n0 = (libm::ceil(seg.start_s * fs) as usize).min(out.len());
    let n1 = (libm::ceil(end_s * fs) as usize).min(out.len());
    let edge = edge_s.min(seg.duration_s / 2.0);
    let ratio = seg.freq_hz / fs;
    for (n, x) in out.iter_mut().enumerate().take(n1).skip(n0) {
        let t = n as f64 / fs;
        let from_start = t - seg.start_s;
        let to_end = end_s - t;
        let env = if edge <= 0.0 {
            1.0
        } else if from_start < edge {
            0.5 * (1.0 - libm::cos(PI * from_start / edge))
        } else if to_end < edge {
            0.5 * (1.0 - libm::cos(PI * to_end / edge))
        } else {
            1.0
        };
        let cycles = ratio * n as f64;
        let frac = cycles - libm::floor(cycles);
        *x += seg.amplitude * env * libm::sin(2.0 * PI * frac + seg.phase);
    }
}
