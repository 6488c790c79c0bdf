use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fbm-springs")).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = bin(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn fails_with(args: &[&str], code: i32) -> String {
    let out = bin(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stderr).unwrap()
}

/// Rows of a two-column CSV after checking the header.
fn series(csv: &str, header: &str) -> Vec<(usize, f64)> {
    assert!(!csv.contains('\r'));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(header));
    lines
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn chain_couplings_antipersistent() {
    let rows = series(&ok(&["couplings", "--mode", "chain", "--monomers", "61", "--hurst", "0.3", "--center", "31"]), "index,g");
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|&(i, g)| i != 31 && g > 0.0));
    assert_eq!(rows.first().unwrap().0, 1);
    assert_eq!(rows.last().unwrap().0, 61);
}

#[test]
fn chain_couplings_persistent() {
    let rows = series(&ok(&["couplings", "--hurst", "0.8"]), "index,g");
    let at = |i: usize| rows.iter().find(|r| r.0 == i).unwrap().1;
    assert!(at(30) > 0.0 && at(32) > 0.0);
    assert!(at(29) < 0.0 && at(33) < 0.0);
    assert!(at(31 + 10) < 0.0);
}

#[test]
fn ring_couplings_have_one_row_per_distance() {
    let rows = series(&ok(&["couplings", "--mode", "ring", "--monomers", "61", "--hurst", "0.3"]), "distance,g");
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), (1..=30).collect::<Vec<_>>());
    assert!(rows[0].1 > 0.0);
}

#[test]
fn inadmissible_ring_names_the_criterion() {
    let err = fails_with(&["couplings", "--mode", "ring", "--hurst", "0.8"], 2);
    assert!(err.contains("indefinite") && err.contains("H <= 1/2"), "{err}");
    fails_with(&["couplings", "--mode", "ring", "--monomers", "6", "--hurst", "0.5"], 2);
    fails_with(&["couplings", "--mode", "ring", "--hurst", "0.3", "--center", "3"], 2);
    fails_with(&["couplings", "--hurst", "0.3", "--center", "62"], 2);
}

#[test]
fn two_coupling_spectrum_is_a_square() {
    let rows = series(&ok(&["spectrum", "--sites", "12", "--g1", "1", "--g2", "-0.25"]), "mode,lambda");
    assert_eq!(rows.len(), 12);
    for (m, lambda) in rows {
        let c = (2.0 * PI * m as f64 / 12.0).cos();
        assert!((lambda - (1.0 - c).powi(2)).abs() < 1e-13, "m = {m}");
    }
}

#[test]
fn nearest_neighbour_spectrum() {
    let rows = series(&ok(&["spectrum", "--sites", "9", "--g1", "0.7"]), "mode,lambda");
    assert_eq!(rows[0], (0, 0.0));
    for (m, lambda) in rows {
        let expected = 2.0 * 0.7 * (1.0 - (2.0 * PI * m as f64 / 9.0).cos());
        assert!((lambda - expected).abs() < 1e-14);
    }
}

#[test]
fn brownian_ring_covariance_spectrum() {
    let rows = series(&ok(&["spectrum", "--sites", "6", "--hurst", "0.5", "--covariance"]), "mode,lambda");
    let values: Vec<f64> = rows.iter().map(|r| r.1).collect();
    for (v, e) in values.iter().zip([0.0, 2.0, 0.0, 2.0, 0.0, 2.0]) {
        assert!((v - e).abs() < 1e-12, "{values:?}");
    }
}

#[test]
fn g_file_matches_flags_and_reports_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("ring.g");
    fs::write(&good, "# stiff ring\nN=12\ng1=1\n2 -0.25\n").unwrap();
    let from_file = ok(&["spectrum", "--g-file", good.to_str().unwrap()]);
    assert_eq!(from_file, ok(&["spectrum", "--sites", "12", "--g1", "1", "--g2", "-0.25"]));

    let bad = dir.path().join("bad.g");
    fs::write(&bad, "N=12\ng1=1\n\ng2=minus\n").unwrap();
    let err = fails_with(&["spectrum", "--g-file", bad.to_str().unwrap()], 2);
    assert!(err.contains("line 4"), "{err}");
    fails_with(&["spectrum", "--g-file", dir.path().join("missing.g").to_str().unwrap()], 2);
}

#[test]
fn critical_defaults_and_failures() {
    let r = json(&ok(&["critical"]));
    assert!((r["h_star"].as_f64().unwrap() - 0.75964).abs() < 1e-4);
    assert_eq!(r["iterations"], 19);
    assert_eq!(r["model"]["center"], 31);
    assert!(r["residual_coupling"].is_number());

    let fine = json(&ok(&["critical", "--tol", "1e-8"]));
    assert_eq!(fine["iterations"], 25);

    let err = fails_with(&["critical", "--offset", "1"], 3);
    assert!(err.contains("no sign change"), "{err}");
    fails_with(&["critical", "--bracket", "0.9", "0.6"], 2);
}

#[test]
fn ring_design_examples() {
    let r = json(&ok(&["ring-design", "--g1", "7", "--c", "1", "--gamma", "4", "--sites", "32", "--check"]));
    assert_eq!(r["admissible"], true);
    assert_eq!(r["zeta_bound"], true);
    assert_eq!(r["model"]["g_by_distance"].as_array().unwrap().len(), 16);

    // below the finite bound but still admissible
    let r = json(&ok(&["ring-design", "--g1", "3", "--c", "1", "--gamma", "4", "--sites", "32", "--check"]));
    assert_eq!(r["finite_bound"], false);
    assert_eq!(r["admissible"], true);
    assert!(r["lambda_min"].as_f64().unwrap() > 0.0);

    let unchecked = json(&ok(&["ring-design", "--g1", "7", "--c", "1", "--gamma", "4", "--sites", "32"]));
    assert!(unchecked["admissible"].is_null());

    let err = fails_with(&["ring-design", "--g1", "7", "--c", "1", "--gamma", "2.5", "--sites", "32", "--infinite-guarantee"], 2);
    assert!(err.contains("2.5"), "{err}");
}

#[test]
fn reflected_ring_sampling_within_bound() {
    let r = json(&ok(&["sample", "--model", "reflected", "--grid", "64", "--paths", "100000", "--seed", "3"]));
    assert_eq!(r["covariance"]["within_bound"], true, "{r}");
    assert_eq!(r["periodic_increments"]["within_bound"], true, "{r}");
    assert!(r["covariance"]["max_abs_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn brownian_chain_increments_are_white() {
    let r = json(&ok(&["sample", "--model", "chain", "--grid", "8", "--hurst", "0.5", "--paths", "50000"]));
    assert_eq!(r["covariance"]["within_bound"], true, "{r}");
    fails_with(&["sample", "--model", "chain", "--grid", "8"], 2);
}

#[test]
fn inadmissible_ring_cannot_be_sampled() {
    let err = fails_with(&["sample", "--model", "ring", "--grid", "8", "--hurst", "0.8", "--paths", "10"], 2);
    assert!(err.contains("indefinite"), "{err}");
}

#[test]
fn istas_brownian_pattern() {
    let rows = series(&ok(&["istas", "--hurst", "0.5", "--modes", "20"]), "mode,value");
    assert_eq!(rows.len(), 20);
    assert!((rows[0].1 - 8.0 * PI * PI).abs() < 1e-9 * 8.0 * PI * PI);
    for (n, v) in rows {
        if n % 2 == 0 {
            assert!(v.abs() < 1e-9);
        } else {
            assert!(v > 0.0);
        }
    }
}

fn read_all(paths: &[&Path]) -> Vec<Vec<u8>> {
    paths.iter().map(|p| fs::read(p).unwrap()).collect()
}

#[test]
fn manifest_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig2.csv");
    let csv_arg = csv.to_str().unwrap();
    ok(&["couplings", "--hurst", "0.8", "--out", csv_arg, "--gnuplot"]);
    let gp = dir.path().join("fig2.csv.gp");
    let manifest = dir.path().join("fig2.csv.manifest.json");
    let m = json(&fs::read_to_string(&manifest).unwrap());
    assert_eq!(m["command"], "couplings");
    assert_eq!(m["parameters"]["hurst"], "0.8");
    assert_eq!(m["parameters"]["monomers"], "61");
    assert_eq!(m["outputs"].as_array().unwrap().len(), 2);
    assert!(m["seed"].is_null());
    let script = fs::read_to_string(&gp).unwrap();
    assert!(script.contains("'fig2.csv'"));

    let before = read_all(&[&csv, &gp, &manifest]);
    fs::remove_file(&csv).unwrap();
    fs::remove_file(&gp).unwrap();
    ok(&["replay", manifest.to_str().unwrap()]);
    assert_eq!(read_all(&[&csv, &gp, &manifest]), before);
}

#[test]
fn sample_replay_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("paths.csv");
    let report = dir.path().join("report.json");
    let args = [
        "sample", "--model", "ring", "--grid", "10", "--hurst", "0.3", "--paths", "2000", "--seed", "17", "--out",
        csv.to_str().unwrap(), "--report", report.to_str().unwrap(),
    ];
    let stdout = ok(&args);
    assert_eq!(fs::read_to_string(&report).unwrap(), stdout);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 2001);
    assert!(text.starts_with("path,x0,x1,"));
    let manifest = dir.path().join("paths.csv.manifest.json");
    assert_eq!(json(&fs::read_to_string(&manifest).unwrap())["seed"], 17);

    let before = read_all(&[&csv, &report]);
    fs::remove_file(&csv).unwrap();
    fs::remove_file(&report).unwrap();
    assert_eq!(ok(&["replay", manifest.to_str().unwrap()]), stdout);
    assert_eq!(read_all(&[&csv, &report]), before);
}

#[test]
fn replay_rejects_foreign_manifests() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("m.json");
    fs::write(
        &manifest,
        r#"{"command":"istas","parameters":{},"argv":["istas","--hurst","0.5"],"artifact_version":"0.0.0-other","seed":null,"outputs":[]}"#,
    )
    .unwrap();
    let err = fails_with(&["replay", manifest.to_str().unwrap()], 2);
    assert!(err.contains("0.0.0-other"), "{err}");
    fs::write(&manifest, "not json").unwrap();
    fails_with(&["replay", manifest.to_str().unwrap()], 2);
}

#[test]
fn usage_errors() {
    assert!(bin(&["--help"]).status.success());
    fails_with(&["couplings"], 2);
    fails_with(&["spectrum", "--sites", "8", "--g1", "1", "--hurst", "0.3"], 2);
    fails_with(&["istas", "--hurst", "0.5", "--modes", "0"], 2);
}
