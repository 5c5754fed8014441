use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tempfile::TempDir;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/examples")
}

fn rfsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rfsc")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = rfsc(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn stdout_lines(out: &Output) -> Vec<String> {
    String::from_utf8_lossy(&out.stdout).lines().map(str::to_owned).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Copies an example circuit with a different shot count.
fn circuit_with_shots(dir: &Path, name: &str, n_shots: usize) -> PathBuf {
    let mut doc = json(&examples().join(name));
    doc["n_shots"] = n_shots.into();
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_x_sweep_truth_has_thirty_gate_pulses_per_shot() {
    let dir = TempDir::new().unwrap();
    let circuit = circuit_with_shots(dir.path(), "x_sweep.json", 2);
    let (trace, truth) = (dir.path().join("x.rftrace"), dir.path().join("truth.json"));
    ok(&["simulate", s(&circuit), "-o", s(&trace), "--truth", s(&truth)]);
    assert!(trace.exists() && dir.path().join("x.rftrace.json").exists());
    let truth = json(&truth);
    let shots = truth["shots"].as_array().unwrap();
    assert_eq!(shots.len(), 2);
    for shot in shots {
        let b = shot["pulses"].as_array().unwrap().iter().filter(|p| p["region"] == "B").count();
        assert_eq!(b, 30);
    }
}

#[test]
fn empty_circuit_truth_has_only_preparation_and_readout() {
    let dir = TempDir::new().unwrap();
    let truth = dir.path().join("truth.json");
    ok(&["--out-dir", s(dir.path()), "simulate", s(&examples().join("empty.json")), "--truth", s(&truth)]);
    assert!(dir.path().join("trace.rftrace").exists());
    let truth = json(&truth);
    for shot in truth["shots"].as_array().unwrap() {
        let pulses = shot["pulses"].as_array().unwrap();
        assert!(!pulses.is_empty());
        assert!(pulses.iter().all(|p| p["region"] == "A" || p["region"] == "C"));
        assert!(shot["region_b"].is_null());
    }
}

#[test]
fn invalid_circuit_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"n_ions": 3, "gates": [{"kind": "Rz", "ions": [0]}]}"#).unwrap();
    let out = rfsc(&["--out-dir", s(dir.path()), "simulate", s(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schema"), "{}", String::from_utf8_lossy(&out.stderr));

    fs::write(&bad, r#"{"n_ions": 2, "gates": [{"kind": "MS", "ions": [0, 2]}]}"#).unwrap();
    assert_eq!(rfsc(&["--out-dir", s(dir.path()), "simulate", s(&bad)]).status.code(), Some(3));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(rfsc(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(rfsc(&["dealias"]).status.code(), Some(2));
    assert_eq!(rfsc(&["dealias", "6.7", "--band", "80"]).status.code(), Some(2));
    assert_eq!(rfsc(&["analyze", "x.rftrace", "--alpha", "-1"]).status.code(), Some(2));
}

#[test]
fn missing_input_is_a_data_error() {
    let dir = TempDir::new().unwrap();
    let out = rfsc(&["--out-dir", s(dir.path()), "analyze", s(&dir.path().join("nope.rftrace"))]);
    assert_eq!(out.status.code(), Some(3));
}

/// Simulates the MS sweep and an empty-circuit baseline, profiles and
/// analyzes into `dir/out`.
fn ms_sweep_analysis(dir: &Path) -> PathBuf {
    let circuit = circuit_with_shots(dir, "ms_sweep.json", 1);
    let (trace, base) = (dir.join("ms.rftrace"), dir.join("empty.rftrace"));
    let profile = dir.join("profile.json");
    let out = dir.join("out");
    ok(&["--seed", "3", "simulate", s(&examples().join("empty.json")), "-o", s(&base)]);
    ok(&["profile", s(&base), "-o", s(&profile)]);
    ok(&["--seed", "4", "simulate", s(&circuit), "-o", s(&trace)]);
    ok(&["--out-dir", s(&out), "analyze", s(&trace), "--baseline", s(&profile)]);
    out
}

#[test]
fn analyze_ms_sweep_reports_thirty_ms_events_over_three_pairs() {
    let dir = TempDir::new().unwrap();
    let out = ms_sweep_analysis(dir.path());
    for f in ["pulses.csv", "shots.json", "gates.json", "stats.csv", "spectrogram.pgm"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let gates = json(&out.join("gates.json"));
    let gates = gates.as_array().unwrap();
    assert_eq!(gates.len(), 30);
    let mut pairs = BTreeMap::new();
    for g in gates {
        assert_eq!(g["kind"], "MS");
        let ions: Vec<u64> = g["ions"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        *pairs.entry(ions).or_insert(0) += 1;
    }
    assert_eq!(pairs, BTreeMap::from([(vec![0, 1], 10), (vec![0, 2], 10), (vec![1, 2], 10)]));

    let stats = fs::read_to_string(out.join("stats.csv")).unwrap();
    let mut lines = stats.lines();
    assert_eq!(
        lines.next().unwrap(),
        "ion,x_dur_mean_us,x_dur_sigma_us,x_freq_mean_mhz,x_freq_sigma_mhz,\
         ms_dur_mean_us,ms_dur_sigma_us,ms_freq_mean_mhz,ms_freq_sigma_mhz"
    );
    assert_eq!(lines.count(), 3);

    let pgm = fs::read(out.join("spectrogram.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n"));
    assert!(pgm.contains(&255));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    let (oa, ob) = (ms_sweep_analysis(a.path()), ms_sweep_analysis(b.path()));
    assert_eq!(fs::read(a.path().join("ms.rftrace")).unwrap(), fs::read(b.path().join("ms.rftrace")).unwrap());
    for f in ["pulses.csv", "shots.json", "gates.json", "stats.csv", "spectrogram.pgm"] {
        assert_eq!(fs::read(oa.join(f)).unwrap(), fs::read(ob.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn dealias_lists_the_candidates() {
    assert_eq!(stdout_lines(&ok(&["dealias", "6.7745"])), ["116.1055", "129.6545", "238.9855"]);
    assert_eq!(stdout_lines(&ok(&["dealias", "0"])), ["122.88", "245.76"]);
    let none = ok(&["dealias", "6.7745", "--band", "140,230"]);
    assert!(none.stdout.is_empty());
    assert_eq!(
        stdout_lines(&ok(&["dealias", "6.7745", "--kmax", "1", "--band", "0,1000"])),
        ["6.7745", "116.1055", "129.6545"]
    );
}

#[test]
fn capture_from_a_closed_port_is_a_network_error() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = TempDir::new().unwrap();
    let out = rfsc(&["--out-dir", s(dir.path()), "capture", &format!("127.0.0.1:{port}"), "--timeout-s", "2"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn stream_and_capture_loop_back_bit_identically() {
    let dir = TempDir::new().unwrap();
    let trace = dir.path().join("mixed.rftrace");
    ok(&["simulate", s(&examples().join("mixed.json")), "-o", s(&trace)]);

    let mut server = Command::new(env!("CARGO_BIN_EXE_rfsc"))
        .args(["stream", s(&trace), "--port", "0", "--sessions", "1"])
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut first = String::new();
    BufReader::new(server.stdout.as_mut().unwrap()).read_line(&mut first).unwrap();
    let addr = first.trim().rsplit(' ').next().unwrap().to_owned();

    let captured = dir.path().join("cap.rftrace");
    ok(&["capture", &addr, "-o", s(&captured)]);
    assert!(server.wait().unwrap().success());
    assert_eq!(fs::read(&trace).unwrap(), fs::read(&captured).unwrap());
    let sidecar = json(&dir.path().join("cap.rftrace.json"));
    assert_eq!(sidecar["truncated"], false);
}

#[test]
fn shipped_documents_parse() {
    for entry in fs::read_dir(examples()).unwrap() {
        let path = entry.unwrap().path();
        rfsc::circuit::load_circuit(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
    for entry in fs::read_dir(examples().join("../schemas")).unwrap() {
        let schema = json(&entry.unwrap().path());
        assert_eq!(schema["$schema"], "https://json-schema.org/draft/2020-12/schema");
    }
}
