//! End-to-end checks of the batch front end: subcommands, exit codes,
//! output formats.

use deltasim::cli::main_with_args;
use std::fs;
use std::path::Path;

fn write(path: &Path, text: &str) {
    fs::write(path, text).unwrap();
}

fn run(args: &[&str]) -> i32 {
    main_with_args(args.iter().map(|s| s.to_string()))
}

#[test]
fn validate_accepts_good_and_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    write(
        &good,
        r#"{"experiment": "synthesize", "gate": {"preset": "rx", "angle_over_pi": 0.5},
            "delta2_over_omega": -0.5}"#,
    );
    assert_eq!(run(&["deltasim", "validate", good.to_str().unwrap()]), 0);

    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"experiment": "synthesize", "gate": {"preset": "rx"}}"#);
    assert_eq!(run(&["deltasim", "validate", bad.to_str().unwrap()]), 2);

    let unknown_key = dir.path().join("unknown.json");
    write(
        &unknown_key,
        r#"{"experiment": "synthesize", "gate": {"preset": "rx", "angle_over_pi": 0.5},
            "extra": true}"#,
    );
    assert_eq!(run(&["deltasim", "validate", unknown_key.to_str().unwrap()]), 2);

    assert_eq!(run(&["deltasim", "validate", "/nonexistent/x.json"]), 2);
}

#[test]
fn capability_failures_exit_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("circuit.json");
    // drive far beyond the attainable J_1 range
    write(
        &cfg,
        r#"{"experiment": "circuit",
            "gate": {"preset": "rx", "angle_over_pi": 0.5},
            "circuit": {"kind": "single_qubit", "omega_ghz": 0.5}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        run(&[
            "deltasim",
            "circuit",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        3
    );
}

#[test]
fn preset_fig2_emits_commented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    assert_eq!(run(&["deltasim", "preset", "fig2", "--out", out.to_str().unwrap()]), 0);
    let text = fs::read_to_string(out.join("fig2.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# deltasim fig2 config-sha256="));
    assert_eq!(
        lines.next().unwrap(),
        "gamma_over_pi,delta2_over_omega,eta_over_omega,tau_over_tauc"
    );
    // 199 gamma values x 7 detunings
    assert_eq!(text.lines().count(), 2 + 199 * 7);

    assert_eq!(run(&["deltasim", "preset", "fig9", "--out", out.to_str().unwrap()]), 2);
}

#[test]
fn evolve_writes_trajectory_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("evolve.json");
    write(
        &cfg,
        r#"{"experiment": "evolve",
            "gate": {"preset": "rx", "angle_over_pi": 0.5},
            "delta2_over_omega": -0.5,
            "noise": {"kappa_over_omega": 0.0},
            "samples": 20}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        run(&[
            "deltasim",
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    for name in ["state.csv", "bloch.csv", "summary.json", "metadata.json"] {
        assert!(out.join(name).exists(), "{name} missing");
    }
    let bloch = fs::read_to_string(out.join("bloch.csv")).unwrap();
    assert!(bloch.lines().nth(1).unwrap().starts_with("t,x,y,z,leakage"));
    // endpoint of Rx(pi/2) from |0>: (0, 1, 0)
    let last: Vec<f64> = bloch
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(last[1].abs() < 1e-6 && (last[2] - 1.0).abs() < 1e-6 && last[3].abs() < 1e-6);

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let f = summary["result"]["final_fidelity"].as_f64().unwrap();
    assert!((f - 1.0).abs() < 1e-8);

    let meta: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("metadata.json")).unwrap()).unwrap();
    assert!(meta["result"]["wall_time_s"].as_f64().unwrap() >= 0.0);
    assert_eq!(meta["result"]["config"]["experiment"], "evolve");
}

#[test]
fn decoherence_emits_contract_columns() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("dec.json");
    write(
        &cfg,
        r#"{"experiment": "decoherence",
            "gate": {"preset": "rx", "angle_over_pi": 0.5},
            "delta2_over_omega": -0.5,
            "kappa_grid": {"min": 0.0, "max": 4.0e-4, "points": 2}}"#,
    );
    let out = dir.path().join("out");
    assert_eq!(
        run(&[
            "deltasim",
            "decoherence",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap()
        ]),
        0
    );
    let text = fs::read_to_string(out.join("decoherence.csv")).unwrap();
    assert_eq!(
        text.lines().nth(1).unwrap(),
        "scheme,gamma,theta,phi,delta,epsilon,kappa,tau_over_tauc,fidelity,\
         fidelity_diff_vs_single_loop,fidelity_diff_vs_toc"
    );
    assert_eq!(text.lines().count(), 2 + 2);
}
