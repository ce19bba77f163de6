//! End-to-end runs of the `floquet-scan` binary.

use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_floquet-scan");

fn config(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

/// Single barrier under a 70 meV drive; `truncation` is a JSON fragment.
fn driven(xis: &str, truncation: &str) -> String {
    format!(
        r#"{{
        "device": {{"builder": "single_barrier", "width": 30, "height": 237, "lead_mass": 0.0667, "barrier_mass": 0.0918}},
        "waveform": {{"kind": "monochromatic", "omega_mev": 70, "xi": 0.1}},
        "truncation": {truncation},
        "scan": {{"energy_mev": {{"start": 20, "stop": 60, "step": 20}}, "xis": {xis}}}
    }}"#
    )
}

const ADAPTIVE: &str = r#"{"adaptive": {}}"#;
const ONE: &str = r#"{"fixed": 1}"#;

/// CSV payload without the wall-time column.
fn payload(csv_text: &[u8]) -> Vec<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).from_reader(csv_text);
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            r.iter().take(r.len() - 1).map(str::to_string).collect()
        })
        .collect()
}

#[test]
fn solve_prints_one_row() {
    let cfg = config(&driven("[0.1]", ADAPTIVE));
    let out = run(&["solve", "--config", cfg.path().to_str().unwrap(), "--energy", "35", "--format", "jsonl"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let row: serde_json::Value = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(row["energy_mev"], 35.0);
    assert_eq!(row["status"], "ok");
    assert!(row["total_transmission"].as_f64().unwrap() > 0.0);
}

#[test]
fn scan_is_identical_for_any_worker_count() {
    let cfg = config(&driven("[0.05, 0.1]", ADAPTIVE));
    let path = cfg.path().to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let mut payloads = Vec::new();
    for workers in ["1", "3"] {
        let file = dir.path().join(format!("w{workers}.csv"));
        let out = run(&["scan", "--config", path, "--workers", workers, "--seed", "7", "--output", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        payloads.push(payload(&std::fs::read(file).unwrap()));
    }
    assert_eq!(payloads[0].len(), 7);
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn config_errors_exit_with_one() {
    let cfg = config("{\"device\": {\"builder\": \"uniform\"}}");
    let out = run(&["scan", "--config", cfg.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/device"));
    let out = run(&["scan", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failed_points_set_exit_two_or_three() {
    // n_max = 1 cannot hold xi = 0.1; a nearly undriven point passes
    let all_bad = config(&driven("[0.1]", ONE));
    let out = run(&["scan", "--config", all_bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let partial = config(&driven("[1e-5, 0.1]", ONE));
    let out = run(&["scan", "--config", partial.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn tolerance_flag_overrides_config() {
    // xi = 0.02 on one sideband leaves deficits below 1e-3
    let cfg = config(&driven("[0.02]", ONE));
    let path = cfg.path().to_str().unwrap();
    assert_eq!(run(&["scan", "--config", path]).status.code(), Some(2));
    assert_eq!(run(&["scan", "--config", path, "--tolerance", "1e-2"]).status.code(), Some(0));
}

#[test]
fn diagnose_bessel_reports_agreement() {
    let cfg = config(&driven("[0.5]", ADAPTIVE));
    let out = run(&["diagnose-bessel", "--config", cfg.path().to_str().unwrap(), "--energy", "80"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["max_difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn converge_reports_levels() {
    let cfg = config(&driven("[0.1]", ONE));
    let out = run(&["converge", "--config", cfg.path().to_str().unwrap(), "--axis", "n-max"]);
    assert!(matches!(out.status.code(), Some(0) | Some(3)), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().count() > 5, "{text}");
}
