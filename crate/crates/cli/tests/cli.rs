use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gsqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsqc")).args(args).env_remove("GSQC_WORKERS").output().expect("spawn gsqc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const TWO_QUBIT: &str = r#"{"epsilon": 1.0, "qubits": [
 {"id": "q0", "boundary": {"a": [-1.0, 0.0, 0.0], "E": 10.0}, "rows": [
   {"op": "unitary", "gate": "I"}, {"op": "coupled_control", "partner": "q1", "partner_row": 2}, {"op": "boost", "lambda": 10.0}]},
 {"id": "q1", "boundary": {"a": [0.0, 0.0, 1.0], "E": 10.0}, "rows": [
   {"op": "unitary", "gate": "I"}, {"op": "coupled_target", "gate": "X", "partner": "q0", "partner_row": 2}, {"op": "boost", "lambda": 10.0}]}]}"#;

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(&good, TWO_QUBIT).unwrap();
    let o = gsqc(&["validate", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("dimension 64"));

    let dangling = dir.path().join("dangling.json");
    fs::write(&dangling, TWO_QUBIT.replace(r#""partner": "q1""#, r#""partner": "q9""#)).unwrap();
    let o = gsqc(&["validate", "--circuit", dangling.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("q9"));

    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"qubits\": [\n  {\"id\": 3}\n]}").unwrap();
    let o = gsqc(&["validate", broken.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    let o = gsqc(&["validate", "--list-presets"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().count() >= 10);
}

fn gap_at(preset: &str, lambda: &str) -> f64 {
    let dir = tempfile::tempdir().unwrap();
    let o = gsqc(&["gap", "--preset", preset, "--lambda", lambda, "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    let v = read_json(&dir.path().join("gap.json"));
    v[0]["result"]["gap"].as_f64().unwrap()
}

#[test]
fn gap_matches_references() {
    let g = gap_at("paper-1qubit-boost", "10");
    assert!((g - 1.94e-3).abs() / 1.94e-3 < 0.02, "{g}");
    let g = gap_at("paper-2qubit", "100");
    assert!((g - 3.13e-9).abs() / 3.13e-9 < 0.02, "{g}");
}

#[test]
fn free_two_row_gap_is_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsqc(&["gap", "--preset", "free-2row", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v = read_json(&dir.path().join("gap.json"));
    let g = v[0]["result"]["gap"].as_f64().unwrap();
    assert!((g - (11.0 - 101f64.sqrt())).abs() < 1e-12, "{g}");
}

fn sweep_json(args: &[&str]) -> Value {
    let dir = tempfile::tempdir().unwrap();
    let mut full = vec!["sweep"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", dir.path().to_str().unwrap()]);
    let o = gsqc(&full);
    assert!(o.status.success(), "{}", stdout(&o));
    read_json(&dir.path().join("sweep.json"))
}

#[test]
fn sweep_slopes() {
    let v = sweep_json(&["--family", "chain", "--n", "3", "--lambda", "10,sqrt(1000),100"]);
    let s = v["fit"]["slope"].as_f64().unwrap();
    assert!((s + 6.0).abs() < 0.3, "{s}");
    let v = sweep_json(&["--family", "single-project"]);
    let s = v["fit"]["slope"].as_f64().unwrap();
    assert!(s.abs() < 0.1, "{s}");
}

#[test]
fn two_wire_teleport_is_unmodified() {
    let plain = sweep_json(&["--family", "chain", "--n", "2", "--lambda", "sqrt(10),10"]);
    let tele = sweep_json(&["--family", "chain", "--n", "2", "--teleport", "--lambda", "sqrt(10),10"]);
    assert_eq!(plain["table"]["points"], tele["table"]["points"]);
}

#[test]
fn sweep_outputs_are_reproducible() {
    let run = |workers: &str| {
        let dir = tempfile::tempdir().unwrap();
        let o = gsqc(&[
            "sweep",
            "--family",
            "two-qubit-mixed",
            "--lambda",
            "1,sqrt(10),10,sqrt(1000),100",
            "--workers",
            workers,
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert!(o.status.success());
        ["sweep.csv", "sweep.json", "sweep.plot.dat"].map(|f| fs::read(dir.path().join(f)).unwrap())
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
    let csv = String::from_utf8(a[0].clone()).unwrap();
    assert!(csv.starts_with("lambda,gap,e2_minus_e0,residual,dimension,method,status\n"));
    assert_eq!(csv.lines().count(), 6);
}

#[test]
fn estimate_text() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsqc(&["estimate", "--n", "100", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let text = stdout(&o);
    for law in
        ["control operations = N²", "qubits ≈ F·N²", "λ = √D·N", "Δ ∝ ε/(D⁴N⁸)", "P ≈ e^(−FC/D)", "T ∝ Δ⁻² ∝ D⁸N¹⁶"]
    {
        assert!(text.contains(law), "missing {law} in\n{text}");
    }
    let v = read_json(&dir.path().join("estimate.json"));
    assert_eq!(v["gap_exponent"].as_f64(), Some(8.0));
    assert_eq!(gsqc(&["estimate", "--n", "0"]).status.code(), Some(2));
}

#[test]
fn repro_tolerance_controls_exit() {
    let o = gsqc(&["paper-repro"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("10/10"));
    assert_eq!(gsqc(&["paper-repro", "--tolerance", "1e-6"]).status.code(), Some(1));
    assert_eq!(gsqc(&["paper-repro", "--skip-slow"]).status.code(), Some(0));
}

#[test]
fn groundstate_profile() {
    let dir = tempfile::tempdir().unwrap();
    let o = gsqc(&["groundstate", "--preset", "free-6row", "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success());
    let v = read_json(&dir.path().join("profile.json"));
    assert!(v["residual_norm"].as_f64().unwrap() < 1e-12);
    for p in v["profiles"][0]["probability"].as_array().unwrap() {
        assert!((p.as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-12);
    }
    assert!(dir.path().join("groundstate.dump").exists());
}

#[test]
fn missing_input_is_usage_error() {
    assert_eq!(gsqc(&["gap"]).status.code(), Some(2));
    assert_eq!(gsqc(&["gap", "--preset", "nope"]).status.code(), Some(2));
}
