use std::fs;
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rfsc::circuit::load_circuit;
use rfsc::config::RunConfig;
use rfsc::report;
use rfsc::stream::{capture_stream, serve_session, CaptureOptions, ServeOptions, StreamError, DEFAULT_FRAME_SAMPLES};
use rfsc::tracefile::{write_trace, TraceFile};
use rfsc_core::emitsim::synthesize;
use rfsc_core::reconstruct::{aggregate_stats, AddressingTable, BaselineProfile, MEASURED_ADDRESSING_HZ};
use rfsc_core::sigproc::{dealias_candidates, Band};
use rfsc_core::{analyze, profile_trace};

#[derive(Parser)]
#[command(name = "rfsc", version, about = "Simulate and analyze RF emissions of trapped-ion control hardware")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Directory for outputs that are not given an explicit path.
    #[arg(long, global = true, default_value = ".")]
    out_dir: PathBuf,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a trace from a circuit document.
    Simulate {
        circuit: PathBuf,
        /// Output trace; defaults to <out-dir>/trace.rftrace.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the ground truth as JSON.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[arg(long, default_value = "")]
        description: String,
    },
    /// Detect pulses, segment shots and classify gates.
    Analyze {
        input: PathBuf,
        #[arg(long)]
        alpha: Option<f64>,
        /// Shot gap threshold in milliseconds.
        #[arg(long)]
        gap_ms: Option<f64>,
        /// Baseline written by `profile`; without it every pulse counts as a
        /// gate pulse.
        #[arg(long)]
        baseline: Option<PathBuf>,
        /// Also write the full spectrogram as CSV.
        #[arg(long)]
        spectrogram_csv: bool,
    },
    /// Learn the preparation/readout baseline from an empty-circuit trace.
    Profile {
        input: PathBuf,
        /// Defaults to <out-dir>/profile.json.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// List true frequencies that alias to the given one.
    Dealias {
        freq_mhz: f64,
        #[arg(long, default_value_t = 122.88)]
        fs_mhz: f64,
        #[arg(long, default_value_t = 3)]
        kmax: u32,
        /// Search band in MHz as `low,high`.
        #[arg(long, default_value = "80,250")]
        band: String,
    },
    /// Serve a trace file to capture clients, one session at a time.
    Stream {
        input: PathBuf,
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        #[arg(long, default_value_t = 5025)]
        port: u16,
        /// Pace frames at the trace's sample rate.
        #[arg(long)]
        realtime: bool,
        /// Exit after this many sessions; runs forever by default.
        #[arg(long)]
        sessions: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_FRAME_SAMPLES)]
        frame_samples: usize,
    },
    /// Capture a served stream into a trace file.
    Capture {
        /// Server address as host:port.
        addr: String,
        /// Stop after this many seconds of signal.
        #[arg(long)]
        duration: Option<f64>,
        /// Defaults to <out-dir>/capture.rftrace.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 10.0)]
        timeout_s: f64,
    },
}

enum Failure {
    Usage(String),
    Data(String),
    Network(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Data(_) => 3,
            Failure::Network(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Network(m) => m,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = match &cli.global.config {
        Some(path) => RunConfig::load(path).map_err(data)?,
        None => RunConfig::default(),
    };
    let g = &cli.global;
    match cli.command {
        Command::Simulate { circuit, output, truth, description } => {
            simulate(g, &cfg, &circuit, output, truth.as_deref(), &description)
        }
        Command::Analyze { input, alpha, gap_ms, baseline, spectrogram_csv } => {
            analyze_cmd(g, cfg, &input, alpha, gap_ms, baseline.as_deref(), spectrogram_csv)
        }
        Command::Profile { input, output } => profile_cmd(g, &cfg, &input, output),
        Command::Dealias { freq_mhz, fs_mhz, kmax, band } => dealias_cmd(freq_mhz, fs_mhz, kmax, &band),
        Command::Stream { input, bind, port, realtime, sessions, frame_samples } => {
            stream_cmd(&input, &bind, port, realtime, sessions, frame_samples)
        }
        Command::Capture { addr, duration, output, timeout_s } => capture_cmd(g, &addr, duration, output, timeout_s),
    }
}

fn out_path(g: &Global, explicit: Option<PathBuf>, default: &str) -> Result<PathBuf, Failure> {
    let path = explicit.unwrap_or_else(|| g.out_dir.join(default));
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(data)?;
    }
    Ok(path)
}

fn simulate(
    g: &Global,
    cfg: &RunConfig,
    circuit: &Path,
    output: Option<PathBuf>,
    truth_path: Option<&Path>,
    description: &str,
) -> Result<(), Failure> {
    let spec = load_circuit(circuit).map_err(data)?;
    let (trace, truth) = synthesize(&spec, &cfg.emission, g.seed).map_err(data)?;
    let path = out_path(g, output, "trace.rftrace")?;
    write_trace(&trace, &path, description).map_err(data)?;
    if let Some(t) = truth_path {
        let mut text = serde_json::to_string_pretty(&truth).map_err(data)?;
        text.push('\n');
        fs::write(t, text).map_err(data)?;
    }
    println!(
        "wrote {} ({} samples, {} shots, {} gates)",
        path.display(),
        trace.len(),
        truth.shots.len(),
        truth.gates.len()
    );
    Ok(())
}

fn table_for(cfg: &RunConfig, bin_hz: f64) -> Result<AddressingTable, Failure> {
    let entries = cfg.addressing_table_hz.clone().unwrap_or_else(|| MEASURED_ADDRESSING_HZ.to_vec());
    AddressingTable::from_measurements(&entries, if cfg.addressing_table_hz.is_some() { 1.0 } else { 3.0 }, bin_hz)
        .map_err(data)
}

fn analyze_cmd(
    g: &Global,
    mut cfg: RunConfig,
    input: &Path,
    alpha: Option<f64>,
    gap_ms: Option<f64>,
    baseline: Option<&Path>,
    spectrogram_csv: bool,
) -> Result<(), Failure> {
    if let Some(a) = alpha {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Failure::Usage("--alpha must be a non-negative number".into()));
        }
        cfg.analysis.detector.alpha = a;
    }
    if let Some(gap) = gap_ms {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Failure::Usage("--gap-ms must be positive".into()));
        }
        cfg.analysis.gap_threshold_s = gap * 1e-3;
    }
    let profile: Option<BaselineProfile> = match baseline {
        Some(p) => Some(serde_json::from_str(&fs::read_to_string(p).map_err(data)?).map_err(data)?),
        None => None,
    };
    let trace = TraceFile::read(input).map_err(data)?.to_trace().map_err(data)?;
    let bin_hz = trace.sample_rate_hz / cfg.analysis.detector.stft.segment_len as f64;
    let table = table_for(&cfg, bin_hz)?;
    let result = analyze(&trace, &cfg.analysis, &table, profile.as_ref()).map_err(data)?;
    let stats = aggregate_stats(result.all_events());

    fs::create_dir_all(&g.out_dir).map_err(data)?;
    let dir = &g.out_dir;
    report::write_pulses_csv(&dir.join("pulses.csv"), &result, &table).map_err(data)?;
    report::write_shots_json(&dir.join("shots.json"), &result).map_err(data)?;
    report::write_gates_json(&dir.join("gates.json"), &result).map_err(data)?;
    report::write_stats_csv(&dir.join("stats.csv"), &stats).map_err(data)?;
    let det = &result.detection;
    report::write_spectrogram_pgm(&dir.join("spectrogram.pgm"), &det.spectrogram, &det.pulses).map_err(data)?;
    if spectrogram_csv {
        report::write_spectrogram_csv(&dir.join("spectrogram.csv"), &det.spectrogram, &det.mask).map_err(data)?;
    }
    println!(
        "{} pulses, {} shots, {} gate events; threshold {:.4e}",
        det.pulses.len(),
        result.shots.len(),
        result.all_events().count(),
        det.stats.threshold
    );
    Ok(())
}

fn profile_cmd(g: &Global, cfg: &RunConfig, input: &Path, output: Option<PathBuf>) -> Result<(), Failure> {
    let trace = TraceFile::read(input).map_err(data)?.to_trace().map_err(data)?;
    let (profile, shots) = profile_trace(&trace, &cfg.analysis).map_err(data)?;
    let path = out_path(g, output, "profile.json")?;
    let mut text = serde_json::to_string_pretty(&profile).map_err(data)?;
    text.push('\n');
    fs::write(&path, text).map_err(data)?;
    println!(
        "{} shots; {} preamble and {} readout templates -> {}",
        shots.len(),
        profile.preamble_pulses.len(),
        profile.readout_pulses.len(),
        path.display()
    );
    Ok(())
}

fn format_mhz(hz: f64) -> String {
    let s = format!("{:.6}", hz * 1e-6);
    s.trim_end_matches('0').trim_end_matches('.').to_owned()
}

fn dealias_cmd(freq_mhz: f64, fs_mhz: f64, kmax: u32, band: &str) -> Result<(), Failure> {
    let bounds: Vec<f64> = band
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("--band `{band}` should be `low,high` in MHz")))?;
    let [lo, hi] = bounds[..] else {
        return Err(Failure::Usage(format!("--band `{band}` should be `low,high` in MHz")));
    };
    let cands = dealias_candidates(freq_mhz * 1e6, fs_mhz * 1e6, kmax, Band::new(lo * 1e6, hi * 1e6))
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for c in cands {
        println!("{}", format_mhz(c));
    }
    Ok(())
}

fn stream_cmd(
    input: &Path,
    bind: &str,
    port: u16,
    realtime: bool,
    sessions: Option<usize>,
    frame_samples: usize,
) -> Result<(), Failure> {
    if frame_samples == 0 || frame_samples > rfsc::stream::MAX_FRAME_SAMPLES {
        return Err(Failure::Usage(format!("--frame-samples must be in 1..={}", rfsc::stream::MAX_FRAME_SAMPLES)));
    }
    let file = TraceFile::read(input).map_err(data)?;
    let listener = TcpListener::bind((bind, port)).map_err(|e| Failure::Network(format!("bind {bind}:{port}: {e}")))?;
    let addr = listener.local_addr().map_err(|e| Failure::Network(e.to_string()))?;
    println!("serving {} on {addr}", input.display());
    let opts = ServeOptions { realtime, frame_samples };
    let mut served = 0;
    while sessions.is_none_or(|n| served < n) {
        match serve_session(&listener, &file, &opts) {
            Ok(r) => println!(
                "session {}: {} frames, {} samples{} in {:.3} s",
                r.peer,
                r.frames_sent,
                r.samples_sent,
                if r.client_closed { " (client left early)" } else { "" },
                r.elapsed.as_secs_f64()
            ),
            Err(e) => eprintln!("session failed: {e}"),
        }
        served += 1;
    }
    Ok(())
}

fn capture_cmd(
    g: &Global,
    addr: &str,
    duration: Option<f64>,
    output: Option<PathBuf>,
    timeout_s: f64,
) -> Result<(), Failure> {
    if duration.is_some_and(|d| !(d > 0.0 && d.is_finite())) {
        return Err(Failure::Usage("--duration must be positive".into()));
    }
    if !(timeout_s > 0.0 && timeout_s.is_finite()) {
        return Err(Failure::Usage("--timeout-s must be positive".into()));
    }
    let path = out_path(g, output, "capture.rftrace")?;
    let opts = CaptureOptions { duration_s: duration, read_timeout: Duration::from_secs_f64(timeout_s) };
    match capture_stream(addr, &opts, &path) {
        Ok(r) => {
            println!(
                "captured {} samples in {} frames{} -> {}",
                r.file.samples.len(),
                r.frames,
                if r.file.sidecar.truncated { " (truncated)" } else { "" },
                path.display()
            );
            Ok(())
        }
        Err(StreamError::TraceFile(e)) => Err(data(e)),
        Err(e) => Err(Failure::Network(e.to_string())),
    }
}
