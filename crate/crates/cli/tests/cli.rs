use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TRAJECTORY_HEADER: &str = "t,nx,ny,nz,re_c0,im_c0,re_c1,im_c1";
const SWEEP_HEADER: &str = "scenario,f0,g0,xi,eta,symmetry,gamma_total_plus,gamma_dynamical_plus,\
gamma_geometric_plus,gamma_total_minus,gamma_dynamical_minus,gamma_geometric_minus,geometric_shift_plus,\
solid_angle_plus,fidelity_plus,end_x,end_y,end_z,passed,failure";

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pulseloop"))
        .args(args)
        .env_remove("PULSELOOP_STEPS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with('t'))
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn simulate_ideal_trajectory_closes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let o = run(&["simulate", "--seq", "90x 180y 90x", "--steps", "1024", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# gauge"));
    assert_eq!(lines.next().unwrap(), TRAJECTORY_HEADER);
    let data = rows(&text);
    assert_eq!(data.len(), 1025);
    for row in [&data[0], data.last().unwrap()] {
        assert!(row[1].abs() < 1e-9 && (row[2] - 1.0).abs() < 1e-9 && row[3].abs() < 1e-9, "{row:?}");
    }
    assert_eq!(data.last().unwrap()[0], 1.0);
}

#[test]
fn simulate_decimates_and_keeps_last_row() {
    let o = run(&["simulate", "--seq", "90x 180y 90x", "--steps", "1024", "--every", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let times: Vec<f64> = rows(&stdout(&o)).iter().map(|r| r[0]).collect();
    assert_eq!(times.len(), 5);
    assert_eq!(times[0], 0.0);
    assert_eq!(*times.last().unwrap(), 1.0);
}

#[test]
fn simulate_with_profile_file_returns_to_start() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write(dir.path(), "p.json", r#"{"kind": "piecewise_sine", "f0": 0.1, "g0": 0.1, "xi": 5, "eta": 5}"#);
    let o = run(&["simulate", "--seq", "90x 180y 90x", "--profile", &profile]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let data = rows(&stdout(&o));
    let (first, last) = (&data[0], data.last().unwrap());
    for i in 1..4 {
        assert!((first[i] - last[i]).abs() < 1e-6);
    }
}

#[test]
fn bad_sequence_is_a_usage_error() {
    let o = run(&["simulate", "--seq", "90q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"));
    let o = run(&["simulate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_profiles_and_configs_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let open = write(dir.path(), "open.json", r#"{"kind": "tabulated", "samples": [[0,0,0],[0.5,0,0],[1,0.2,0]]}"#);
    let o = run(&["phases", "--seq", "90x 180y 90x", "--profile", &open]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = write(dir.path(), "run.json", r#"{"sequence": "90x 180y 90x", "colour": "red"}"#);
    let o = run(&["phases", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
    let o = run(&["phases", "--seq", "180x", "--f0", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_pulseloop"))
        .args(["simulate", "--seq", "180x"])
        .env("PULSELOOP_STEPS", "100")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn phases_json(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn phases_report_schema_and_values() {
    let v = phases_json(&["phases", "--seq", "90x 180y 90x"]);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in [
        "basis_plus",
        "basis_minus",
        "plus",
        "minus",
        "unitary",
        "reference_unitary",
        "gate_deviation",
        "max_drive_overlap",
        "geometric_antisymmetry_residual",
        "solid_angle_plus",
    ] {
        assert!(keys.contains(&k), "missing {k}");
    }
    let plus = &v["plus"];
    for k in ["gamma_total", "gamma_dynamical", "gamma_geometric", "fidelity"] {
        assert!(plus[k].is_f64(), "missing plus.{k}");
    }
    assert!((plus["gamma_geometric"].as_f64().unwrap() + std::f64::consts::FRAC_PI_2).abs() < 1e-8);
    assert!((v["minus"]["gamma_total"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-8);
}

#[test]
fn phases_with_inline_global_sine_stays_geometric() {
    let v = phases_json(&[
        "phases", "--seq", "90x 180y 90x", "--kind", "global_sine", "--f0", "0.1", "--g0", "0.1", "--xi", "5", "--eta", "5",
    ]);
    assert!((v["plus"]["gamma_geometric"].as_f64().unwrap() + std::f64::consts::FRAC_PI_2).abs() < 1e-6);
    assert!((v["minus"]["gamma_geometric"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
}

#[test]
fn inline_flags_override_profile_file() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write(dir.path(), "p.json", r#"{"kind": "global_sine", "f0": 0.1, "g0": 0.1, "xi": 5, "eta": 5}"#);
    let from_file = phases_json(&["phases", "--seq", "90x 180y 90x", "--profile", &profile, "--g0", "0.0"]);
    let inline = phases_json(&[
        "phases", "--seq", "90x 180y 90x", "--kind", "global_sine", "--f0", "0.1", "--g0", "0", "--xi", "5", "--eta", "5",
    ]);
    assert_eq!(from_file, inline);
}

#[test]
fn misconfigured_basis_is_a_numeric_failure() {
    let o = run(&["phases", "--seq", "360x", "--basis", "1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("orthogonal"));
}

#[test]
fn sweep_writes_one_row_per_point() {
    let o = run(&["sweep", "--scenario", "piecewise_sine", "--f0", "0,0.1,0.5", "--g0", "0,0.1,0.5", "--xi", "5", "--steps", "1024"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SWEEP_HEADER);
    assert_eq!(lines.len(), 10);
}

#[test]
fn empty_sweep_grid_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", r#"{"scenario": "global_sine", "grid": {"f0": [], "g0": [0.1], "xi": [5]}}"#);
    let o = run(&["sweep", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("empty"));
}

#[test]
fn single_point_sweep_matches_phases() {
    let o = run(&["sweep", "--scenario", "global_sine", "--f0", "0.2", "--g0", "0.1", "--xi", "3", "--eta", "3", "--steps", "2048"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let col = |name: &str| row[header.iter().position(|h| *h == name).unwrap()].parse::<f64>().unwrap();
    let v = phases_json(&[
        "phases", "--seq", "90x 180y 90x", "--kind", "global_sine", "--f0", "0.2", "--g0", "0.1", "--xi", "3", "--eta", "3", "--steps", "2048",
    ]);
    for (csv, json) in [
        ("gamma_total_plus", &v["plus"]["gamma_total"]),
        ("gamma_dynamical_plus", &v["plus"]["gamma_dynamical"]),
        ("gamma_geometric_minus", &v["minus"]["gamma_geometric"]),
    ] {
        let j = json.as_f64().unwrap();
        assert!((col(csv) - j).abs() <= 1e-11 * j.abs().max(1e-3), "{csv}: {} vs {j}", col(csv));
    }
}

#[test]
fn papercheck_json_lists_every_criterion() {
    let o = run(&["papercheck", "--json", "--steps", "1024"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let criteria = v["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 10);
    let all_pass = criteria.iter().all(|c| c["verdict"] != "fail");
    assert_eq!(o.status.code(), Some(if all_pass { 0 } else { 1 }));
    for c in criteria {
        for k in ["id", "title", "verdict", "detail"] {
            assert!(!c[k].is_null(), "missing {k}");
        }
    }
    assert_eq!(criteria[9]["verdict"], "reported");
}
