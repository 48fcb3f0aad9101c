use std::path::Path;
use std::process::{Command, Output};

use faraday::{dense_spectrum, ModelParams};

fn faraday(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_faraday"))
        .args(args)
        .env_remove("FARADAY_THREADS")
        .output()
        .expect("run faraday")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    r.records()
        .map(|rec| rec.unwrap().iter().map(str::to_string).collect())
        .collect()
}

fn ground_value(csv: &str, quantity: &str) -> String {
    rows(csv)
        .into_iter()
        .find(|r| r[1] == quantity)
        .unwrap_or_else(|| panic!("no {quantity} row"))[4]
        .clone()
}

#[test]
fn ground_energy_matches_dense_oracle() {
    let out = stdout(&faraday(&["ground", "--theta", "0", "--length", "6"]));
    let energy: f64 = ground_value(&out, "energy").parse().unwrap();
    let dense = dense_spectrum(&ModelParams::new(0.0, 6).unwrap()).unwrap();
    assert!((energy - dense[0]).abs() < 1e-9);
    assert_eq!(ground_value(&out, "degeneracy"), "1");
    let gz = rows(&out).iter().filter(|r| r[1] == "g_z").count();
    assert_eq!(gz, 36);
    assert!(out.starts_with("theta,quantity,m,n,value\n"));
    assert!(!out.contains('\r'));
}

#[test]
fn ferromagnet_reports_full_multiplet() {
    let out = stdout(&faraday(&["ground", "--theta", "pi", "--length", "4"]));
    assert_eq!(ground_value(&out, "degeneracy"), "9");
    assert_eq!(ground_value(&out, "multiplet_extent"), "4");
    // k = 0 probe on |S=4, M=4⟩: (1/√4)·Σ 2·1 = 4.
    let jz: f64 = ground_value(&out, "ferro_jz").parse().unwrap();
    assert!((jz - 4.0).abs() < 1e-9);
}

#[test]
fn configuration_errors_exit_with_two() {
    for (args, field) in [
        (vec!["probe-map", "--length", "abc"], "length"),
        (vec!["probe-map", "--kpd-grid", ""], "kpd-grid"),
        (vec!["scan-theta", "--theta", "7"], "theta"),
        (vec!["ground", "--format", "xml"], "format"),
        (vec!["ground", "--boundary", "twisted"], "boundary"),
    ] {
        let out = faraday(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{args:?}: {err}");
    }
    assert_eq!(faraday(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn config_file_is_merged_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.ini");
    std::fs::write(
        &cfg,
        "[model]\ntheta = 0.1pi, 0.2pi\nlength = 4\n[run]\nformat = json\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let out = stdout(&faraday(&["scan-theta", "--config", path, "--theta", "0.05pi"]));
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["config"]["length"], 4);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 1);
    assert_eq!(doc["rows"][0]["phase_label"], "haldane");

    std::fs::write(&cfg, "[probe]\nlength = 4\n").unwrap();
    let out = faraday(&["scan-theta", "--config", path]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("length"));
}

#[test]
fn single_theta_scan_has_one_row() {
    let out = stdout(&faraday(&["scan-theta", "--theta", "0", "--length", "6"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(
        lines[0],
        "theta,phase_label,c_epsilon,d_epsilon,dimer_order,string_order,gap_estimate,error"
    );
}

#[test]
fn probe_map_order_and_peak() {
    let out = stdout(&faraday(&[
        "probe-map",
        "--theta",
        "0",
        "--length",
        "6",
        "--kpd-grid",
        "pi/8:pi:8",
        "--alpha-grid",
        "0,0.5",
    ]));
    let r = rows(&out);
    assert_eq!(r.len(), 16);
    // kpd-major within a θ block, alpha fastest.
    assert_eq!(r[0][2], r[2][2]);
    assert_ne!(r[0][2], r[1][2]);
    let alpha0: Vec<f64> = r
        .iter()
        .filter(|row| row[2].parse::<f64>().unwrap() == 0.0)
        .map(|row| row[3].parse().unwrap())
        .collect();
    let best = (0..alpha0.len())
        .max_by(|&a, &b| alpha0[a].total_cmp(&alpha0[b]))
        .unwrap();
    assert_eq!(best, 3, "peak should sit at kpd = pi/2: {alpha0:?}");
}

#[test]
fn product_state_mode_never_detects() {
    for seed in ["1", "2", "3"] {
        let out = stdout(&faraday(&[
            "witness-scan",
            "--product-state",
            "--seed",
            seed,
            "--length",
            "6",
            "--kpd-grid",
            "0:pi:9",
        ]));
        let r = rows(&out);
        assert_eq!(r.len(), 9);
        assert!(r.iter().all(|row| row[6] == "false"));
    }
}

#[test]
fn kappa_does_not_change_the_witness() {
    let base = ["witness-scan", "--theta", "0.102pi", "--length", "6", "--kpd-grid", "pi/16:pi/2:4"];
    let a = stdout(&faraday(&base));
    let mut with_kappa = base.to_vec();
    with_kappa.extend(["--kappa", "3.5"]);
    let b = stdout(&faraday(&with_kappa));
    assert_eq!(a, b);
    assert!(rows(&a).iter().any(|row| row[6] == "true"));
}

#[test]
fn hubbard_map_rows() {
    let out = stdout(&faraday(&["hubbard-map", "--u0", "1", "--u2", "0,-0.2"]));
    let r = rows(&out);
    assert_eq!(r.len(), 2);
    let theta: f64 = r[0][3].parse().unwrap();
    assert_eq!(theta, std::f64::consts::FRAC_PI_4);
    assert_eq!(r[0][5], "critical");
}

fn write_run(args: &[&str], path: &Path, threads: &str) {
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    full.extend(["--output", p, "--threads", threads]);
    stdout(&faraday(&full));
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "scan-theta",
        "--theta",
        "-0.5pi:0.3pi:5",
        "--length",
        "8",
        "--seed",
        "7",
    ];
    let paths: Vec<_> = ["a.csv", "b.csv", "c.csv"]
        .iter()
        .map(|f| dir.path().join(f))
        .collect();
    write_run(&args, &paths[0], "1");
    write_run(&args, &paths[1], "1");
    write_run(&args, &paths[2], "4");
    let a = std::fs::read(&paths[0]).unwrap();
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, std::fs::read(&paths[2]).unwrap());
}

#[test]
fn threads_fall_back_to_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_faraday"))
        .args(["ground", "--length", "4"])
        .env("FARADAY_THREADS", "two")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("threads"));
}
