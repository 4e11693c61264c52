//! End-to-end CLI checks: exit codes, error wording, and byte-identical
//! outputs for identical inputs and seeds.

use std::path::Path;
use std::process::Command;

fn tamekit() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tamekit"))
}

fn write(path: &Path, contents: &str) {
    std::fs::create_dir_all(path.parent().unwrap()).unwrap();
    std::fs::write(path, contents).unwrap();
}

#[test]
fn power_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    write(&a, r#"{"dim": 1, "rows": [[4.0]]}"#);
    let out = dir.path().join("out");
    let ok = tamekit()
        .args(["power", "--input", a.to_str().unwrap(), "--r", "0.5", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("power.json")).unwrap();
    assert!(text.contains("2.0"));

    // Slit violation: exit 3, message names the offending eigenvalue.
    let bad = dir.path().join("bad.json");
    write(&bad, r#"{"dim": 1, "rows": [[-1.0]]}"#);
    let err = tamekit()
        .args(["power", "--input", bad.to_str().unwrap(), "--r", "0.5", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(3));
    let msg = String::from_utf8_lossy(&err.stderr);
    assert!(msg.contains("slit"), "stderr: {msg}");

    // Malformed input: exit 2.
    let ragged = dir.path().join("ragged.json");
    write(&ragged, r#"{"rows": [[1.0, 2.0], [3.0]]}"#);
    let err = tamekit()
        .args(["power", "--input", ragged.to_str().unwrap(), "--r", "0.5", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(err.status.code(), Some(2));

    // Unknown flags are a usage error: clap exits 2.
    let err = tamekit().args(["power", "--no-such-flag"]).output().unwrap();
    assert_eq!(err.status.code(), Some(2));
}

#[test]
fn retract_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let b = dir.path().join("b.json");
    write(&b, r#"{"dim": 2, "rows": [[0.0, -2.0], [2.0, 0.0]]}"#);
    let out = dir.path().join("out");
    let ok = tamekit()
        .args(["retract", "--input", b.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("retract.json")).unwrap()).unwrap();
    // 2 J_std retracts to J_std with residual at roundoff.
    assert_eq!(doc["matrix"]["rows"][0][1].as_f64().unwrap(), -1.0);
    assert_eq!(doc["matrix"]["rows"][1][0].as_f64().unwrap(), 1.0);
    assert!(doc["checks"]["square_residual"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn search_compatible_config_exits_zero_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(
        &cfg,
        r#"{"dim": 4, "k": 2, "mode": "random", "vertex_kind": "compatible", "seed": 11, "trials": 400}"#,
    );
    let out1 = dir.path().join("o1");
    let out2 = dir.path().join("o2");
    for out in [&out1, &out2] {
        let run = tamekit()
            .args(["search", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert_eq!(run.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&run.stderr));
    }
    // Byte-identical reports (timestamps live only in run.log).
    let j1 = std::fs::read(out1.join("report.json")).unwrap();
    let j2 = std::fs::read(out2.join("report.json")).unwrap();
    assert_eq!(j1, j2);
    let c1 = std::fs::read(out1.join("report.csv")).unwrap();
    let c2 = std::fs::read(out2.join("report.csv")).unwrap();
    assert_eq!(c1, c2);
    // And the compatible-vertex campaign keeps a nonnegative global min.
    let doc: serde_json::Value = serde_json::from_slice(&j1).unwrap();
    assert!(doc["global_min"].as_f64().unwrap() >= -1e-8);
}

#[test]
fn search_bad_config_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(&cfg, r#"{"dim": 5, "k": 2, "mode": "random", "seed": 1, "trials": 10}"#);
    let out = dir.path().join("out");
    let run = tamekit()
        .args(["search", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&run.stderr).contains("dim"));
}

#[test]
fn fib_product_reports_infinite_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let run = tamekit()
        .args([
            "fib",
            "--generator",
            "product",
            "--mesh",
            "2x2x2x2",
            "--out",
            out.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&run.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("fib.json")).unwrap()).unwrap();
    assert_eq!(doc["global_threshold"].as_str().unwrap(), "inf");
    let csv = std::fs::read_to_string(out.join("threshold.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().contains("inf"));
    // The emitted fibration file carries its schema tag.
    let fibdoc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("fibration.json")).unwrap()).unwrap();
    assert_eq!(fibdoc["schema"].as_str().unwrap(), "fib/1");
}

#[test]
fn radial_residuals_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let run = tamekit()
        .args(["radial", "--n", "2", "--mesh", "5x5", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(run.status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("radial.json")).unwrap()).unwrap();
    assert!(doc["max_residual"].as_f64().unwrap() <= 1e-6);
    let csv = std::fs::read_to_string(out.join("radial.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "t,r,residual");
    assert_eq!(csv.lines().count(), 26);
}

#[test]
fn thread_cap_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    write(
        &cfg,
        r#"{"dim": 4, "k": 2, "mode": "random", "vertex_kind": "tame", "seed": 5, "trials": 200}"#,
    );
    let out1 = dir.path().join("o1");
    let out2 = dir.path().join("o2");
    let run1 = tamekit()
        .env("TAMEKIT_THREADS", "1")
        .args(["search", "--config", cfg.to_str().unwrap(), "--out", out1.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(run1.status.code(), Some(0));
    let run2 = tamekit()
        .env("TAMEKIT_THREADS", "4")
        .args(["search", "--config", cfg.to_str().unwrap(), "--out", out2.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(run2.status.code(), Some(0));
    assert_eq!(
        std::fs::read(out1.join("report.json")).unwrap(),
        std::fs::read(out2.join("report.json")).unwrap()
    );
}
