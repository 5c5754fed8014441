//! End-to-end acceptance criteria. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any criterion fails.

use std::collections::{BTreeSet, VecDeque};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::io::Write;
use std::net::TcpListener;
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rfsc::stream::{capture_stream, serve_session, CaptureOptions, ServeOptions, StreamError, StreamFrame};
use rfsc::tracefile::{read_trace, write_trace, Sidecar, TraceFile};
use rfsc_core::emitsim::*;
use rfsc_core::reconstruct::*;
use rfsc_core::sigproc::*;
use rfsc_core::*;

const FS: f64 = DEFAULT_SAMPLE_RATE_HZ;
const BIN_HZ: f64 = 60e3;

fn segment_s() -> f64 {
    2048.0 / FS
}

/// Outcome of one criterion: pass/fail plus a one-line summary of what was
/// measured.
struct Verdict {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Verdict);

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn baseline(cfg: &EmissionConfig) -> BaselineProfile {
    let (trace, _) = synthesize(&CircuitSpec::empty(3, 5), cfg, 17).unwrap();
    profile_trace(&trace, &AnalysisConfig::default()).unwrap().0
}

fn run(
    circuit: &CircuitSpec,
    cfg: &EmissionConfig,
    seed: u64,
    table: &AddressingTable,
    profile: &BaselineProfile,
) -> (Analysis, GroundTruth) {
    let (trace, truth) = synthesize(circuit, cfg, seed).unwrap();
    let analysis = analyze(&trace, &AnalysisConfig::default(), table, Some(profile)).unwrap();
    (analysis, truth)
}

const X_DURATION_S: [f64; 3] = [40.3e-6, 35.5e-6, 34.9e-6];
const X_DURATION_SIGMA_S: [f64; 3] = [3.1e-6, 3.8e-6, 6.8e-6];
const X_FREQ_HZ: [f64; 3] = [6.7745e6, 8.112e6, 9.57e6];
const X_FREQ_SIGMA_HZ: [f64; 3] = [600.0, 45e3, 160e3];
/// Pair durations and their spreads for (0,1), (1,2), (0,2).
const MS_PAIRS: [((usize, usize), f64, f64); 3] =
    [((0, 1), 232.5e-6, 3.8e-6), ((1, 2), 229.9e-6, 4.1e-6), ((0, 2), 222.3e-6, 4.0e-6)];

fn table_one_config() -> EmissionConfig {
    EmissionConfig {
        pad_s: 0.0,
        rabi_per_ion: X_DURATION_S.iter().map(|tau| PI / tau).collect(),
        duration_jitter_s: X_DURATION_SIGMA_S.to_vec(),
        freq_jitter_hz: X_FREQ_SIGMA_HZ.to_vec(),
        ms_pairs: MS_PAIRS.iter().map(|&(ions, duration_s, jitter_s)| MsPair { ions, duration_s, jitter_s }).collect(),
        ..Default::default()
    }
}

fn table_one_round_trip() -> Verdict {
    let started = Instant::now();
    let cfg = table_one_config();
    let profile = baseline(&cfg);
    let table = AddressingTable::measured(BIN_HZ);
    // 10 traces of 2 shots each: 200 X pulses per ion, 200 MS gates per pair
    let mut events = Vec::new();
    for k in 0..10 {
        let (a, _) = run(&CircuitSpec::x_sweep(2), &cfg, 1000 + k, &table, &profile);
        events.extend(a.all_events().cloned());
        let (a, _) = run(&CircuitSpec::ms_sweep(2), &cfg, 2000 + k, &table, &profile);
        events.extend(a.all_events().cloned());
    }
    let stats = aggregate_stats(&events);
    let elapsed = started.elapsed().as_secs_f64();

    let mut pass = elapsed < 60.0;
    let mut worst_dur: f64 = 0.0;
    let mut worst_freq: f64 = 0.0;
    let mut counts = Vec::new();
    for ion in 0..3 {
        let Some(row) = stats.ion(ion) else {
            return Verdict::new(false, format!("no statistics for ion {ion}"));
        };
        let ms_dur = MS_PAIRS.iter().filter(|p| p.0 .0 == ion || p.0 .1 == ion).map(|p| p.1).sum::<f64>() / 2.0;
        let dur_err = [row.single.dur_mean_s - X_DURATION_S[ion], row.ms.dur_mean_s - ms_dur];
        let freq_err = [row.single.freq_mean_hz - X_FREQ_HZ[ion], row.ms.freq_mean_hz - X_FREQ_HZ[ion]];
        for e in dur_err {
            pass &= e.abs() <= 8.4e-6;
            worst_dur = worst_dur.max(e.abs());
        }
        for e in freq_err {
            pass &= e.abs() <= 60e3;
            worst_freq = worst_freq.max(e.abs());
        }
        counts.push(format!("{}/{}", row.single.count, row.ms.count));
    }
    Verdict::new(
        pass,
        format!(
            "worst |Δτ| {:.2} µs (≤ 8.4), worst |Δf| {:.1} kHz (≤ 60), X/MS counts {}, {:.1} s (< 60)",
            worst_dur * 1e6,
            worst_freq * 1e-3,
            counts.join(" "),
            elapsed
        ),
    )
}

fn circuit_patterns() -> Verdict {
    let cfg = EmissionConfig::default();
    let profile = baseline(&cfg);
    let table = AddressingTable::measured(BIN_HZ);

    let (xa, _) = run(&CircuitSpec::x_sweep(10), &cfg, 61, &table, &profile);
    let want_x: Vec<(EventKind, Vec<usize>)> =
        [0, 1, 2].repeat(10).into_iter().map(|i| (EventKind::SingleQuditRotation, vec![i])).collect();
    let x_ok =
        xa.events.iter().filter(|ev| ev.iter().map(|e| (e.kind, e.ions.clone())).eq(want_x.iter().cloned())).count();

    let (ma, _) = run(&CircuitSpec::ms_sweep(10), &cfg, 62, &table, &profile);
    let want_ms: Vec<(EventKind, Vec<usize>)> =
        (0..10).flat_map(|_| [vec![0, 1], vec![0, 2], vec![1, 2]]).map(|p| (EventKind::Ms, p)).collect();
    let ms_ok =
        ma.events.iter().filter(|ev| ev.iter().map(|e| (e.kind, e.ions.clone())).eq(want_ms.iter().cloned())).count();

    let pass = xa.shots.len() == 10 && ma.shots.len() == 10 && x_ok == 10 && ms_ok == 10;
    Verdict::new(
        pass,
        format!(
            "X sweep {x_ok}/{} shots exact, MS sweep {ms_ok}/{} shots exact (10 shots each)",
            xa.shots.len(),
            ma.shots.len()
        ),
    )
}

fn shot_segmentation() -> Verdict {
    let cfg = EmissionConfig::default();
    let (trace, _) = synthesize(&CircuitSpec::x_sweep(20), &cfg, 31).unwrap();
    let a = analyze(&trace, &AnalysisConfig::default(), &AddressingTable::measured(BIN_HZ), None).unwrap();
    let idle: Vec<f64> = a.shots.windows(2).map(|w| w[1].t_start_s - w[0].t_end_s).collect();
    let mean = idle.iter().sum::<f64>() / idle.len().max(1) as f64;
    let rel = (mean - cfg.shot_gap_s).abs() / cfg.shot_gap_s;
    Verdict::new(
        a.shots.len() == 20 && rel <= 0.05,
        format!("{} shots (want 20), mean idle {:.4} ms ({:.2}% off, ≤ 5%)", a.shots.len(), mean * 1e3, rel * 100.0),
    )
}

fn alias_closure() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut hits = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let f_sig = rng.random_range(80e6..=250e6);
        let alias = fold_frequency(f_sig, FS);
        let cands = dealias_candidates(alias, FS, 3, AOM_BAND).unwrap();
        let err = cands.iter().map(|c| (c - f_sig).abs()).fold(f64::INFINITY, f64::min);
        worst = worst.max(err);
        if err <= 1e-6 {
            hits += 1;
        }
    }
    Verdict::new(hits == 1000, format!("{hits}/1000 recovered, worst error {worst:.2e} Hz (≤ 1e-6)"))
}

/// Breadth-first flood fill over the 8-neighbourhood.
fn flood_fill_partition(mask: &DetectionMask) -> BTreeSet<BTreeSet<(usize, usize)>> {
    let (nf, nt) = (mask.n_freq(), mask.n_time());
    let mut seen = vec![false; nf * nt];
    let mut parts = BTreeSet::new();
    for t in 0..nt {
        for f in 0..nf {
            if !mask.get(f, t) || seen[t * nf + f] {
                continue;
            }
            let mut part = BTreeSet::new();
            let mut queue = VecDeque::from([(t, f)]);
            seen[t * nf + f] = true;
            while let Some((t0, f0)) = queue.pop_front() {
                part.insert((t0, f0));
                for dt in -1i64..=1 {
                    for df in -1i64..=1 {
                        let (t1, f1) = (t0 as i64 + dt, f0 as i64 + df);
                        if t1 < 0 || f1 < 0 || t1 >= nt as i64 || f1 >= nf as i64 {
                            continue;
                        }
                        let (t1, f1) = (t1 as usize, f1 as usize);
                        if mask.get(f1, t1) && !seen[t1 * nf + f1] {
                            seen[t1 * nf + f1] = true;
                            queue.push_back((t1, f1));
                        }
                    }
                }
            }
            parts.insert(part);
        }
    }
    parts
}

fn ccl_equivalence() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut agree = 0;
    for _ in 0..200 {
        let (nf, nt) = (rng.random_range(1..=64), rng.random_range(1..=64));
        let density: f64 = rng.random_range(0.05..0.75);
        let mask = DetectionMask::from_fn(nf, nt, |_, _| rng.random::<f64>() < density);
        let ours: BTreeSet<BTreeSet<(usize, usize)>> = label_components(&mask)
            .iter()
            .map(|c| c.cells().iter().map(|cell| (cell.time, cell.freq)).collect())
            .collect();
        if ours == flood_fill_partition(&mask) {
            agree += 1;
        }
    }
    Verdict::new(agree == 200, format!("{agree}/200 random masks partition identically to flood fill"))
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitary_algebra() -> Verdict {
    let i = Complex64::i();
    let mut worst_unitarity: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let d = rng.random_range(2..=4);
        let lo = rng.random_range(0..d - 1);
        let hi = rng.random_range(lo + 1..d);
        let theta = rng.random_range(1e-3..=2.0 * PI);
        for gate in [NativeGate::rx(0, theta), NativeGate::ry(0, theta), NativeGate::ms(0, 1)] {
            let u = gate_unitary(&gate.with_levels(lo, hi), d).unwrap();
            let n = u.nrows();
            worst_unitarity = worst_unitarity.max(max_abs(&(u.adjoint() * &u - DMatrix::identity(n, n))));
        }
    }

    // X on levels (0,1) of a qubit and on (1,2) of a qutrit
    let mut worst_x: f64 = 0.0;
    for (d, lo, hi) in [(2, 0, 1), (3, 1, 2), (3, 0, 2)] {
        let u = gate_unitary(&NativeGate::x(0).with_levels(lo, hi), d).unwrap();
        let mut want = DMatrix::<Complex64>::identity(d, d);
        want[(lo, lo)] = 0.0.into();
        want[(hi, hi)] = 0.0.into();
        want[(lo, hi)] = -i;
        want[(hi, lo)] = -i;
        worst_x = worst_x.max(max_abs(&(u - want)));
    }

    let ms = gate_unitary(&NativeGate::ms(0, 1), 2).unwrap();
    let out = ms.column(0).into_owned();
    let bell = [Complex64::from(FRAC_1_SQRT_2), 0.0.into(), 0.0.into(), -i * FRAC_1_SQRT_2];
    // remove the global phase against the |00⟩ amplitude
    let phase = if out[0].norm() > 0.0 { bell[0] / out[0] * out[0].norm() / bell[0].norm() } else { 1.0.into() };
    let bell_err = (0..4).map(|k| (out[k] * phase - bell[k]).norm()).fold(0.0, f64::max);

    let pass = worst_unitarity < 1e-10 && worst_x < 1e-10 && bell_err < 1e-10;
    Verdict::new(
        pass,
        format!(
            "‖U†U−1‖max {worst_unitarity:.1e}, X block error {worst_x:.1e}, MS Bell error {bell_err:.1e} (all < 1e-10)"
        ),
    )
}

/// Decoy ions 3 and 4 sit at 133.78 and 135.08 MHz.
fn decoy_config(seed: u64) -> EmissionConfig {
    let mut cfg = EmissionConfig::default();
    cfg.addressing_freq_hz.extend([133.78e6, 135.08e6]);
    cfg.decoy = Some(DecoyConfig { n_decoys: 2, rng_seed: seed, gate_rate: 1.0 });
    cfg
}

fn is_subsequence<T: PartialEq>(needle: &[T], hay: &[T]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|n| it.any(|h| h == n))
}

/// Fraction of true gate-region addressing pulses matched by a detected
/// pulse on the same ion with time intersection-over-union ≥ 0.5.
fn region_b_recall(a: &Analysis, truth: &GroundTruth, table: &AddressingTable) -> (usize, usize) {
    let detected: Vec<(usize, f64, f64)> = a
        .detection
        .pulses
        .iter()
        .filter_map(|p| table.lookup(p.center_freq_hz).map(|(ion, _)| (ion, p.t_start_s, p.t_end_s + segment_s())))
        .collect();
    let mut hit = 0;
    let mut total = 0;
    for p in truth.shots.iter().flat_map(|s| s.region_pulses(Region::B)).filter(|p| p.role == PulseRole::Addressing) {
        total += 1;
        let matched = detected.iter().any(|&(ion, s, e)| {
            let inter = (e.min(p.t_end_s) - s.max(p.t_start_s)).max(0.0);
            let union = e.max(p.t_end_s) - s.min(p.t_start_s);
            Some(ion) == p.ion && inter / union >= 0.5
        });
        hit += usize::from(matched);
    }
    (hit, total)
}

fn mitigation() -> Verdict {
    let circuit = CircuitSpec::new(
        3,
        vec![
            NativeGate::x(0),
            NativeGate::ms(0, 1),
            NativeGate::ry(2, FRAC_PI_2),
            NativeGate::x(1),
            NativeGate::ms(1, 2),
            NativeGate::rx(0, FRAC_PI_2),
            NativeGate::ms(0, 2),
            NativeGate::ry(1, PI),
        ],
        2,
    );
    let truth_seq: Vec<(bool, Vec<usize>)> =
        circuit.gates.iter().map(|g| (g.kind == GateKind::Ms, g.ion_set())).collect();
    let mut entries = MEASURED_ADDRESSING_HZ.to_vec();
    entries.extend([(fold_frequency(133.78e6, FS), 0.0), (fold_frequency(135.08e6, FS), 0.0)]);
    let table = AddressingTable::from_measurements(&entries, 3.0, BIN_HZ).unwrap();
    let profile = baseline(&EmissionConfig::default());

    let (mut subseq_ok, mut n_seqs) = (0, 0);
    let (mut n_events, mut n_decoy) = (0usize, 0usize);
    let (mut conf_decoy, mut conf_real) = (Vec::new(), Vec::new());
    for seed in 0..5 {
        let (a, _) = run(&circuit, &decoy_config(seed), 300 + seed, &table, &profile);
        for events in &a.events {
            n_seqs += 1;
            let seq: Vec<(bool, Vec<usize>)> =
                events.iter().map(|e| (e.kind == EventKind::Ms, e.ions.clone())).collect();
            let computational: Vec<_> = seq.iter().filter(|(_, ions)| ions.iter().all(|&i| i < 3)).cloned().collect();
            if computational == truth_seq && seq.len() > truth_seq.len() && is_subsequence(&truth_seq, &seq) {
                subseq_ok += 1;
            }
            for e in events {
                n_events += 1;
                if e.ions.iter().any(|&i| i >= 3) {
                    n_decoy += 1;
                    conf_decoy.push(e.confidence);
                } else {
                    conf_real.push(e.confidence);
                }
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len().max(1) as f64;
    let conf_gap = (mean(&conf_decoy) - mean(&conf_real)).abs();
    let decoy_share = n_decoy as f64 / n_events.max(1) as f64;

    // interference in the addressing alias band at ten times the on-power
    // of one addressing tone
    let signal_power = EmissionConfig::default().amplitude.powi(2) / 2.0;
    let jammed = EmissionConfig {
        interference: Some(InterferenceConfig {
            bands: vec![NoiseBand { band: Band::new(4e6, 12e6), power: 10.0 * signal_power }],
            burst_s: 100e-6,
            duty: 0.5,
        }),
        ..Default::default()
    };
    let measured = AddressingTable::measured(BIN_HZ);
    let (mut clean, mut noisy) = ((0, 0), (0, 0));
    for seed in 0..5 {
        let (a, t) = run(&CircuitSpec::x_sweep(2), &EmissionConfig::default(), 400 + seed, &measured, &profile);
        let (h, n) = region_b_recall(&a, &t, &measured);
        clean = (clean.0 + h, clean.1 + n);
        let (a, t) = run(&CircuitSpec::x_sweep(2), &jammed, 400 + seed, &measured, &profile);
        let (h, n) = region_b_recall(&a, &t, &measured);
        noisy = (noisy.0 + h, noisy.1 + n);
    }
    let clean_recall = clean.0 as f64 / clean.1 as f64;
    let noisy_recall = noisy.0 as f64 / noisy.1 as f64;

    let pass =
        subseq_ok == n_seqs && decoy_share >= 0.3 && conf_gap < 0.05 && clean_recall == 1.0 && noisy_recall < 0.5;
    Verdict::new(
        pass,
        format!(
            "strict supersequence {subseq_ok}/{n_seqs}, decoy share {:.1}% (≥ 30), confidence gap {conf_gap:.3} (< 0.05), \
             recall clean {clean_recall:.3} (= 1) jammed {noisy_recall:.3} (< 0.5)",
            decoy_share * 100.0
        ),
    )
}

fn threshold_on_pure_noise() -> Verdict {
    let cfg = DetectorConfig { alpha: 6.0, ..Default::default() };
    let n = (2.5e-3 * FS) as usize;
    let mut quiet = 0;
    let mut fraction = 0.0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samples: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
        let det = detect_pulses(&SampleTrace::new(samples, FS).unwrap(), &cfg).unwrap();
        quiet += usize::from(det.pulses.is_empty());
        fraction += det.mask.fraction_set() / 100.0;
    }
    Verdict::new(
        quiet >= 99,
        format!("{quiet}/100 pure-noise traces without pulses (≥ 99), mean mask fraction {fraction:.3}"),
    )
}

fn corrupted_capture(dir: &std::path::Path, name: &str) -> (String, Vec<u8>) {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let sidecar = Sidecar {
        sample_rate_hz: 1e6,
        start_time_s: 0.0,
        scale: 1e-3,
        description: String::new(),
        truncated: false,
        n_samples: Some(400),
    };
    let server = thread::spawn(move || {
        let (mut s, _) = listener.accept().unwrap();
        let mut line = serde_json::to_string(&sidecar).unwrap();
        line.push('\n');
        s.write_all(line.as_bytes()).unwrap();
        for seq in 0..4u32 {
            let samples: Vec<i16> = (0..100).map(|k| (seq as i16) * 100 + k).collect();
            let mut bytes = StreamFrame { seq, samples }.encode();
            if seq == 2 {
                bytes[0] = b'X';
            }
            let _ = s.write_all(&bytes);
        }
    });
    let out = dir.join(name);
    let err = match capture_stream(addr, &CaptureOptions::default(), &out) {
        Err(e @ StreamError::MalformedFrame { .. }) => e.to_string(),
        other => format!("unexpected: {other:?}"),
    };
    server.join().unwrap();
    let kept = TraceFile::read(&out).map(|f| f.payload_bytes()).unwrap_or_default();
    (err, kept)
}

fn io_and_stream() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let mut worst_lsb: f64 = 0.0;
    for k in 0..20 {
        let len = rng.random_range(1..5000);
        let amp = 10f64.powf(rng.random_range(-3.0..3.0));
        let samples: Vec<f64> = (0..len).map(|_| amp * rng.random_range(-1.0..=1.0)).collect();
        let trace = SampleTrace::new(samples, FS).unwrap();
        let path = dir.path().join(format!("t{k}.rftrace"));
        let file = write_trace(&trace, &path, "acceptance").unwrap();
        let back = read_trace(&path).unwrap();
        let err = trace.samples.iter().zip(&back.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_lsb = worst_lsb.max(err / file.sidecar.scale);
    }

    let (trace, _) =
        synthesize(&CircuitSpec::x_sweep(1), &EmissionConfig { noise_sigma: 0.1, ..Default::default() }, 2).unwrap();
    let source = write_trace(&trace, &dir.path().join("src.rftrace"), "loopback").unwrap();
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    let served = source.clone();
    let server = thread::spawn(move || serve_session(&listener, &served, &ServeOptions::default()).unwrap());
    let captured = capture_stream(addr, &CaptureOptions::default(), &dir.path().join("cap.rftrace")).unwrap();
    server.join().unwrap();
    let loopback = TraceFile::read(&dir.path().join("cap.rftrace")).unwrap();
    let identical = loopback.payload_bytes() == source.payload_bytes() && !captured.file.sidecar.truncated;

    let (err_a, kept_a) = corrupted_capture(dir.path(), "bad_a.rftrace");
    let (err_b, kept_b) = corrupted_capture(dir.path(), "bad_b.rftrace");
    let deterministic = err_a.starts_with("malformed") || err_a.contains("magic");
    let abort_ok = deterministic && err_a == err_b && kept_a == kept_b && kept_a.len() == 2 * 200;

    Verdict::new(
        worst_lsb <= 1.0 && identical && abort_ok,
        format!(
            "worst round-trip error {worst_lsb:.3} LSB (≤ 1), loopback {} ({} samples), corrupted frame 3 keeps {} samples twice: {err_a}",
            if identical { "bit-identical" } else { "DIFFERS" },
            source.samples.len(),
            kept_a.len() / 2
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("table statistics round trip", table_one_round_trip),
        ("circuit pattern recovery", circuit_patterns),
        ("shot segmentation", shot_segmentation),
        ("alias closure", alias_closure),
        ("component labeling vs flood fill", ccl_equivalence),
        ("gate unitaries", unitary_algebra),
        ("decoys and interference", mitigation),
        ("threshold on pure noise", threshold_on_pure_noise),
        ("trace files and streaming", io_and_stream),
    ];
    let filters: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let started = Instant::now();
        let verdict = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Verdict::new(false, "panicked"));
        failed += usize::from(!verdict.pass);
        println!(
            "criterion {} {:<34} {}  {} [{:.1} s]",
            k + 1,
            name,
            if verdict.pass { "PASS" } else { "FAIL" },
            verdict.detail,
            started.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} failed", failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
