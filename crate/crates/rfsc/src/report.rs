//! Human-facing outputs of an analysis run. Tables use μs and MHz.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use rfsc_core::reconstruct::{AddressingTable, EventKind, GateEvent, PulseMeasurement, StatsTable};
use rfsc_core::sigproc::{DetectionMask, Pulse, Spectrogram};
use rfsc_core::{Analysis, Region};
use serde::Serialize;

pub const STATS_HEADER: [&str; 9] = [
    "ion",
    "x_dur_mean_us",
    "x_dur_sigma_us",
    "x_freq_mean_mhz",
    "x_freq_sigma_mhz",
    "ms_dur_mean_us",
    "ms_dur_sigma_us",
    "ms_freq_mean_mhz",
    "ms_freq_sigma_mhz",
];

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
    text.push('\n');
    fs::write(path, text)
}

fn region_name(r: Region) -> &'static str {
    match r {
        Region::A => "A",
        Region::B => "B",
        Region::C => "C",
        Region::Unknown => "Unknown",
    }
}

/// One row per detected pulse, numbered in detection order.
pub fn write_pulses_csv(path: &Path, analysis: &Analysis, table: &AddressingTable) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record([
        "id",
        "shot",
        "region",
        "ion",
        "t_start_us",
        "t_end_us",
        "duration_us",
        "center_freq_mhz",
        "peak_power",
        "n_cells",
    ])
    .map_err(csv_err)?;
    let mut id = 0usize;
    for shot in &analysis.shots {
        for (p, r) in shot.pulses.iter().zip(&shot.region_labels) {
            let ion = table.lookup(p.center_freq_hz).map(|(i, _)| i.to_string()).unwrap_or_default();
            w.write_record([
                id.to_string(),
                shot.index.to_string(),
                region_name(*r).to_owned(),
                ion,
                format!("{:.4}", p.t_start_s * 1e6),
                format!("{:.4}", p.t_end_s * 1e6),
                format!("{:.4}", p.duration_s * 1e6),
                format!("{:.6}", p.center_freq_hz * 1e-6),
                format!("{:.6e}", p.peak_power),
                p.n_cells.to_string(),
            ])
            .map_err(csv_err)?;
            id += 1;
        }
    }
    w.flush()
}

#[derive(Serialize)]
struct ShotRecord<'a> {
    index: usize,
    t_start_s: f64,
    t_end_s: f64,
    /// Ids into `pulses.csv`.
    first_pulse_id: usize,
    n_pulses: usize,
    regions: Vec<&'a str>,
}

pub fn write_shots_json(path: &Path, analysis: &Analysis) -> io::Result<()> {
    let mut next = 0;
    let records: Vec<ShotRecord> = analysis
        .shots
        .iter()
        .map(|s| {
            let r = ShotRecord {
                index: s.index,
                t_start_s: s.t_start_s,
                t_end_s: s.t_end_s,
                first_pulse_id: next,
                n_pulses: s.pulses.len(),
                regions: s.region_labels.iter().map(|r| region_name(*r)).collect(),
            };
            next += s.pulses.len();
            r
        })
        .collect();
    write_json(path, &records)
}

#[derive(Serialize)]
struct GateRecord<'a> {
    shot: usize,
    kind: EventKind,
    ions: &'a [usize],
    theta_est_rad: Option<f64>,
    t_start_s: f64,
    t_end_s: f64,
    confidence: f64,
    duration_anomalous: bool,
    pulses: &'a [PulseMeasurement],
}

/// Flat list of gate events; an analysis without gates writes `[]`.
pub fn write_gates_json(path: &Path, analysis: &Analysis) -> io::Result<()> {
    let records: Vec<GateRecord> = analysis
        .shots
        .iter()
        .zip(&analysis.events)
        .flat_map(|(s, events)| events.iter().map(move |e: &GateEvent| (s.index, e)))
        .map(|(shot, e)| GateRecord {
            shot,
            kind: e.kind,
            ions: &e.ions,
            theta_est_rad: e.theta_est_rad,
            t_start_s: e.t_start_s,
            t_end_s: e.t_end_s,
            confidence: e.confidence,
            duration_anomalous: e.duration_anomalous,
            pulses: &e.pulses,
        })
        .collect();
    write_json(path, &records)
}

fn cell(x: f64, factor: f64) -> String {
    if x.is_finite() {
        format!("{:.4}", x * factor)
    } else {
        String::new()
    }
}

/// Per-ion table; cells of empty populations are left blank.
pub fn write_stats_csv(path: &Path, stats: &StatsTable) -> io::Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    w.write_record(STATS_HEADER).map_err(csv_err)?;
    for r in &stats.rows {
        let (x, m) = (&r.single, &r.ms);
        w.write_record([
            r.ion.to_string(),
            cell(x.dur_mean_s, 1e6),
            cell(x.dur_sigma_s, 1e6),
            cell(x.freq_mean_hz, 1e-6),
            cell(x.freq_sigma_hz, 1e-6),
            cell(m.dur_mean_s, 1e6),
            cell(m.dur_sigma_s, 1e6),
            cell(m.freq_mean_hz, 1e-6),
            cell(m.freq_sigma_hz, 1e-6),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

/// Dynamic range shown in the image below the strongest cell.
pub const PGM_RANGE_DB: f64 = 80.0;

fn to_db(p: f64) -> f64 {
    10.0 * p.max(1e-300).log10()
}

/// 8-bit grayscale of log power, time left to right and frequency bottom
/// to top. Detected pulses are outlined at 255; everything else stays at
/// or below 254.
pub fn write_spectrogram_pgm(path: &Path, spec: &Spectrogram, pulses: &[Pulse]) -> io::Result<()> {
    let (w, h) = (spec.n_time(), spec.n_freq());
    let mut peak = f64::NEG_INFINITY;
    for t in 0..w {
        for f in 0..h {
            peak = peak.max(to_db(spec.power(f, t)));
        }
    }
    let floor = peak - PGM_RANGE_DB;
    let mut img = vec![0u8; w * h];
    let row = |f: usize| h - 1 - f;
    for t in 0..w {
        for f in 0..h {
            let level = ((to_db(spec.power(f, t)) - floor) / PGM_RANGE_DB).clamp(0.0, 1.0);
            img[row(f) * w + t] = (level * 254.0).round() as u8;
        }
    }
    for p in pulses {
        let (t0, t1) = (p.first_frame, p.last_frame.min(w - 1));
        let (f0, f1) = (p.low_bin, p.high_bin.min(h - 1));
        for t in t0..=t1 {
            img[row(f0) * w + t] = 255;
            img[row(f1) * w + t] = 255;
        }
        for f in f0..=f1 {
            img[row(f) * w + t0] = 255;
            img[row(f) * w + t1] = 255;
        }
    }
    let mut out = BufWriter::new(File::create(path)?);
    write!(out, "P5\n{w} {h}\n255\n")?;
    out.write_all(&img)?;
    out.flush()
}

/// Long-format companion grid: one row per cell, power in dB.
pub fn write_spectrogram_csv(path: &Path, spec: &Spectrogram, mask: &DetectionMask) -> io::Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "time_s,freq_hz,power_db,detected")?;
    for t in 0..spec.n_time() {
        let time = spec.time_of_frame(t);
        for f in 0..spec.n_freq() {
            writeln!(
                out,
                "{:.9},{:.1},{:.3},{}",
                time,
                spec.freq_of_bin(f),
                to_db(spec.power(f, t)),
                u8::from(mask.get(f, t))
            )?;
        }
    }
    out.flush()
}
