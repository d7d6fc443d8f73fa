use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn diskmodes(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diskmodes"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn write_json(dir: &Path, name: &str, value: &Value) -> String {
    let path = dir.join(name);
    fs::write(&path, serde_json::to_string(value).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn spectrum_lists_every_mode() {
    let out = diskmodes(&[
        "spectrum", "--radius", "1", "--mass", "0", "--lambda", "-1", "--lmax", "4", "--nmax", "4",
    ]);
    let v = stdout_json(&out);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 36);
    let ls: Vec<i64> = entries.iter().map(|e| e["l"].as_i64().unwrap()).collect();
    assert_eq!(*ls.iter().min().unwrap(), -4);
    assert_eq!(*ls.iter().max().unwrap(), 4);
    assert_eq!(v["config"]["boundary"]["lambda"], -1.0);
}

#[test]
fn dirichlet_first_root() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("table.csv");
    let out = diskmodes(&[
        "spectrum",
        "--dirichlet",
        "--lmax",
        "2",
        "--nmax",
        "3",
        "--csv",
        csv.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    let first = v["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["l"] == 0 && e["n"] == 1)
        .unwrap();
    assert!((num(&first["x"]) - 2.404825557695773).abs() < 1e-14);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("l,n,x,k,omega,norm,residual\n"));
    assert_eq!(text.lines().count(), 1 + 5 * 3);
}

#[test]
fn invalid_input_exits_with_two() {
    let positive = diskmodes(&["spectrum", "--lambda", "0.5"]);
    assert_eq!(positive.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&positive.stderr).contains("non-oscillatory"));

    let both = diskmodes(&["spectrum", "--lambda", "-1", "--dirichlet"]);
    assert_eq!(both.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let corrupted = dir.path().join("state.json");
    fs::write(&corrupted, "{\"t0\": 0, \"amplitudes\": [{\"l\": 0,").unwrap();
    let out = diskmodes(&[
        "evolve",
        "--lmax",
        "1",
        "--nmax",
        "1",
        "--state",
        corrupted.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("malformed JSON"));

    let big = diskmodes(&["spectrum", "--lmax", "99"]);
    assert_eq!(big.status.code(), Some(2));
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_json(
        dir.path(),
        "run.json",
        &serde_json::json!({"l_max": 2, "n_max": 2, "boundary": {"kind": "dirichlet"}}),
    );
    let v = stdout_json(&diskmodes(&["spectrum", "--config", &cfg]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 10);
    assert_eq!(v["config"]["boundary"]["kind"], "dirichlet");
    let v = stdout_json(&diskmodes(&[
        "spectrum", "--config", &cfg, "--lmax", "1", "--lambda", "-3",
    ]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 6);
    assert_eq!(v["config"]["boundary"]["lambda"], -3.0);
    let bad = write_json(dir.path(), "bad.json", &serde_json::json!({"lmax": 2}));
    assert_eq!(
        diskmodes(&["spectrum", "--config", &bad]).status.code(),
        Some(2)
    );
}

#[test]
fn zero_state_gives_zero_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let state = write_json(
        dir.path(),
        "zero.json",
        &serde_json::json!({"t0": 0.0, "amplitudes": []}),
    );
    let out_dir = dir.path().join("run");
    let out = diskmodes(&[
        "evolve",
        "--lmax",
        "2",
        "--nmax",
        "2",
        "--state",
        &state,
        "--times",
        "0,0.5,1",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,r,theta,phi,pi"));
    let mut rows = 0;
    for line in lines {
        let cols: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[3], 0.0);
        assert_eq!(cols[4], 0.0);
        rows += 1;
    }
    assert!(rows > 0 && rows % 3 == 0);
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(num(&summary["energy_mode"]), 0.0);
}

#[test]
fn single_mode_returns_after_one_period() {
    let spectrum = stdout_json(&diskmodes(&["spectrum", "--lmax", "2", "--nmax", "2"]));
    let omega = spectrum["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["l"] == 1 && e["n"] == 2)
        .map(|e| num(&e["omega"]))
        .unwrap();
    let period = 2.0 * std::f64::consts::PI / omega;
    let dir = tempfile::tempdir().unwrap();
    let state = write_json(
        dir.path(),
        "one.json",
        &serde_json::json!({"t0": 0.0, "amplitudes": [{"l": 1, "n": 2, "re": 0.6, "im": -0.8}]}),
    );
    let times = format!("0,{period:.17e}");
    let v = stdout_json(&diskmodes(&[
        "evolve", "--lmax", "2", "--nmax", "2", "--state", &state, "--times", &times,
    ]));
    for a in v["final_state"]["amplitudes"].as_array().unwrap() {
        let (re, im) = (num(&a["re"]), num(&a["im"]));
        let (want_re, want_im) = if a["l"] == 1 && a["n"] == 2 {
            (0.6, -0.8)
        } else {
            (0.0, 0.0)
        };
        assert!(
            (re - want_re).abs() < 1e-12 && (im - want_im).abs() < 1e-12,
            "{a}"
        );
    }
}

#[test]
fn random_state_conserves_energy() {
    let v = stdout_json(&diskmodes(&[
        "evolve", "--lmax", "4", "--nmax", "4", "--seed", "7",
    ]));
    assert!(num(&v["summary"]["energy_drift"]) < 1e-6);
    assert!(num(&v["summary"]["angular_momentum_drift"]) < 1e-6);
}

#[test]
fn verify_fock_and_symmetry_pass() {
    let fock = stdout_json(&diskmodes(&["verify", "--suite", "fock"]));
    assert_eq!(fock["passed"], true);
    assert!(fock["suites"][0]["checks"].as_array().unwrap().len() > 20);

    let sym = stdout_json(&diskmodes(&[
        "verify", "--suite", "symmetry", "--lmax", "3", "--nmax", "3",
    ]));
    assert_eq!(sym["passed"], true);
    let negative: Vec<&Value> = sym["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["expect_violation"] == true)
        .collect();
    assert_eq!(negative.len(), 2);
    for c in negative {
        assert_eq!(c["passed"], true);
        assert!(num(&c["residual"]) > num(&c["tolerance"]));
    }
}

#[test]
fn verify_failure_exits_with_one() {
    // with a heavy field every frequency sits near the mass, so mixing two of
    // them barely moves the energy and the negative check cannot fire
    let out = diskmodes(&[
        "verify", "--suite", "symmetry", "--mass", "1000", "--lmax", "2", "--nmax", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).expect("report still printed");
    assert_eq!(report["passed"], false);
    let failed: Vec<&Value> = report["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0]["name"]
        .as_str()
        .unwrap()
        .contains("changes the energy"));
}

#[test]
fn under_resolved_grid_is_invalid_input() {
    let out = diskmodes(&[
        "verify",
        "--suite",
        "basis",
        "--lmax",
        "3",
        "--nmax",
        "3",
        "--grid-r",
        "9",
        "--grid-theta",
        "9",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = diskmodes(&[
            "verify",
            "--suite",
            "all",
            "--lmax",
            "3",
            "--nmax",
            "3",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(out.stdout.is_empty());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn charges_match_the_evolve_energy() {
    let dir = tempfile::tempdir().unwrap();
    let run = dir.path().join("run");
    let common = ["--lmax", "3", "--nmax", "3", "--seed", "5"];
    let mut args = vec!["evolve"];
    args.extend(common);
    args.extend(["--out", run.to_str().unwrap()]);
    assert!(diskmodes(&args).status.success());
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(run.join("summary.json")).unwrap()).unwrap();

    let mut alpha_minus = Vec::new();
    for l in -3i32..=3 {
        for n in 1..=3 {
            alpha_minus.push(
                serde_json::json!({"l": l, "n": n, "v": if l % 2 == 0 { 1.0 } else { -1.0 }}),
            );
        }
    }
    let coeffs = write_json(
        dir.path(),
        "h.json",
        &serde_json::json!({ "alpha_minus": alpha_minus }),
    );
    let state = run.join("final_state.json");
    let mut args = vec!["charges"];
    args.extend(common);
    args.extend([
        "--state",
        state.to_str().unwrap(),
        "--coefficients",
        &coeffs,
    ]);
    let report = stdout_json(&diskmodes(&args));
    let energy = num(&summary["energy_mode"]);
    assert!((num(&report["integral_value"]) - energy).abs() < 1e-6 * energy);
    assert!((num(&report["mode_value"]) - energy).abs() < 1e-12 * energy);
    assert!(num(&report["relative_gap"]) < 1e-6);
    assert_eq!(report["generators"].as_array().unwrap().len(), 21);
}

#[test]
fn charges_of_zero_state_and_bad_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write_json(
        dir.path(),
        "zero.json",
        &serde_json::json!({"t0": 0.0, "amplitudes": []}),
    );
    let coeffs = write_json(
        dir.path(),
        "c.json",
        &serde_json::json!({"alpha_plus": [{"l": 1, "n": 1, "re": 0.5, "im": 0.25}, {"l": -1, "n": 1, "re": 0.5, "im": -0.25}]}),
    );
    let report = stdout_json(&diskmodes(&[
        "charges",
        "--lmax",
        "2",
        "--nmax",
        "2",
        "--state",
        &zero,
        "--coefficients",
        &coeffs,
    ]));
    assert_eq!(num(&report["integral_value"]), 0.0);
    assert_eq!(num(&report["mode_value"]), 0.0);
    for g in report["generators"].as_array().unwrap() {
        assert_eq!(num(&g["number"]), 0.0);
    }

    let bad = write_json(
        dir.path(),
        "bad.json",
        &serde_json::json!({"beta": [{"l": 2, "n": 1, "v": 1.0}]}),
    );
    let out = diskmodes(&[
        "charges",
        "--lmax",
        "2",
        "--nmax",
        "2",
        "--state",
        &zero,
        "--coefficients",
        &bad,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("beta(2,1) != -beta(-2,1)"));
}
