use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn beltrami(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beltrami")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

fn stderr_json(out: &Output) -> Value {
    let text = String::from_utf8(out.stderr.clone()).unwrap();
    let line = text.lines().last().expect("an error line");
    serde_json::from_str(line).unwrap()
}

const SMALL: &str = r#"{
  "schema_version": 1,
  "domain": { "resolution": 64 },
  "mu": { "kind": "constant", "value": 0.3 },
  "u": { "kind": "disc-indicator", "radius": 1.0 },
  "family": { "points": 5 },
  "exhaust": { "radii": [1.0], "taylor_degree": 4 }
}"#;

#[test]
fn solve_beltrami_writes_artifacts_and_verifies() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", SMALL);
    let out = tmp.path().join("out");
    let o = out.to_str().unwrap();
    let r = beltrami(&["solve-beltrami", "--config", &cfg, "--out", o]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    for f in ["h.field", "g.field", "h_abs.pgm", "h_arg.txt", "residual_trace.csv", "report.csv", "config.json"] {
        assert!(out.join(f).exists(), "{f}");
    }
    let summary: Value = serde_json::from_str(std::str::from_utf8(&r.stdout).unwrap().trim()).unwrap();
    assert!(summary["metrics"]["beltrami_residual"].as_f64().unwrap() <= 1e-2);

    let v = beltrami(&["verify", "--out", o]);
    assert_eq!(v.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("verify.csv")).unwrap();
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")), "{csv}");
}

#[test]
fn every_solve_command_round_trips_through_verify() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", SMALL);
    for cmd in ["solve-dbar", "sweep-family", "exhaust", "oracle-compare"] {
        let out = tmp.path().join(cmd);
        let o = out.to_str().unwrap();
        let r = beltrami(&[cmd, "--config", &cfg, "--out", o, "--threads", "2"]);
        assert_eq!(r.status.code(), Some(0), "{cmd}: {}", String::from_utf8_lossy(&r.stderr));
        let v = beltrami(&["verify", "--out", o]);
        assert_eq!(v.status.code(), Some(0), "verify {cmd}: {}", String::from_utf8_lossy(&v.stderr));
    }
    let family = std::fs::read_to_string(tmp.path().join("sweep-family/family.csv")).unwrap();
    assert_eq!(family.lines().next().unwrap(), "b,iterations,residual,adjacent_difference,extrapolation_error");
    assert_eq!(family.lines().count(), 6);
    let trace = std::fs::read_to_string(tmp.path().join("exhaust/exhaustion.csv")).unwrap();
    assert_eq!(trace.lines().next().unwrap(), "step,radius,iterations,correction_sup,budget");
}

#[test]
fn invalid_mu_exits_1_before_writing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"schema_version": 1, "domain": {"resolution": 32}, "mu": {"kind": "constant", "value": 1.2}}"#,
    );
    let out = tmp.path().join("out");
    let r = beltrami(&["solve-beltrami", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(1));
    assert_eq!(stderr_json(&r)["error"], "invalid_beltrami");
    assert!(!out.exists());
}

#[test]
fn validation_errors_exit_1() {
    let tmp = tempfile::tempdir().unwrap();
    let cases = [
        r#"{"schema_version": 9}"#,
        r#"{"schema_version": 1, "mu": {"kind": "spiral"}}"#,
        r#"{"schema_version": 1, "domain": {"resolution": 10}, "mu": {"kind": "constant", "value": 0.1}}"#,
        r#"{"schema_version": 1, "solver": {"method": "wavelet"}, "mu": {"kind": "constant", "value": 0.1}}"#,
        r#"{"schema_version": 1}"#,
    ];
    for (k, json) in cases.iter().enumerate() {
        let cfg = write_config(tmp.path(), &format!("c{k}.json"), json);
        let r = beltrami(&["solve-beltrami", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
        assert_eq!(r.status.code(), Some(1), "{json}");
        let err = stderr_json(&r);
        assert!(err["message"].is_string());
    }
}

#[test]
fn solver_failure_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"schema_version": 1, "domain": {"resolution": 32}, "solver": {"max_iter": 2},
            "mu": {"kind": "constant", "value": 0.3}}"#,
    );
    let r = beltrami(&["solve-beltrami", "--config", &cfg, "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
    assert_eq!(stderr_json(&r)["error"], "no_convergence");
}

#[test]
fn io_errors_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().join("o");
    let r = beltrami(&["solve-beltrami", "--config", "/nonexistent/c.json", "--out", o.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
    let r = beltrami(&["verify", "--out", o.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));

    let cfg = write_config(tmp.path(), "c.json", SMALL);
    assert_eq!(beltrami(&["solve-dbar", "--config", &cfg, "--out", o.to_str().unwrap()]).status.code(), Some(0));
    let f = o.join("f.field");
    let mut bytes = std::fs::read(&f).unwrap();
    bytes.truncate(bytes.len() - 8);
    std::fs::write(&f, bytes).unwrap();
    let r = beltrami(&["verify", "--out", o.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(3));
    assert_eq!(stderr_json(&r)["error"], "format");
}

#[test]
fn tampered_result_fails_verification() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", SMALL);
    let o = tmp.path().join("o");
    assert_eq!(beltrami(&["solve-dbar", "--config", &cfg, "--out", o.to_str().unwrap()]).status.code(), Some(0));
    let path = o.join("summary.json");
    let mut summary: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    summary["metrics"]["residual"] = Value::from(1.0);
    std::fs::write(&path, summary.to_string()).unwrap();
    let r = beltrami(&["verify", "--out", o.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn method_flag_overrides_config_and_is_recorded() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "c.json",
        r#"{"schema_version": 1, "domain": {"resolution": 32}, "mu": {"kind": "linear-z", "coefficient": 0.3}}"#,
    );
    let o = tmp.path().join("o");
    let r = beltrami(&["solve-beltrami", "--config", &cfg, "--out", o.to_str().unwrap(), "--method", "quadrature"]);
    assert_eq!(r.status.code(), Some(0));
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(o.join("config.json")).unwrap()).unwrap();
    assert_eq!(stored["solver"]["method"], "quadrature");
    assert_eq!(beltrami(&["verify", "--out", o.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn file_fields_resolve_relative_to_config() {
    let tmp = tempfile::tempdir().unwrap();
    let first = tmp.path().join("first");
    let cfg = write_config(tmp.path(), "c.json", SMALL);
    assert_eq!(beltrami(&["solve-beltrami", "--config", &cfg, "--out", first.to_str().unwrap()]).status.code(), Some(0));
    let cfg2 = write_config(
        tmp.path(),
        "c2.json",
        r#"{"schema_version": 1, "domain": {"resolution": 64},
            "mu": {"kind": "file", "path": "first/mu.field"},
            "u": {"kind": "constant", "value": 0}}"#,
    );
    let second = tmp.path().join("second");
    let r = beltrami(&["solve-dbar", "--config", &cfg2, "--out", second.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", String::from_utf8_lossy(&r.stderr));
    // A file coefficient is raw data: it is cut off again, so only the
    // values on Ω carry over unchanged.
    let d = beltrami::DomainSpec::unit_disc(64).unwrap();
    let a = beltrami::io::load_field_on(first.join("mu.field"), d).unwrap();
    let b = beltrami::io::load_field_on(second.join("mu.field"), d).unwrap();
    assert_eq!(a.max_diff_over(&b, beltrami::Region::Omega).unwrap(), 0.0);
}

#[test]
fn identical_configs_give_identical_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "c.json", SMALL);
    let run = |name: &str, threads: &str| {
        let o = tmp.path().join(name);
        let r = beltrami(&["sweep-family", "--config", &cfg, "--out", o.to_str().unwrap(), "--threads", threads]);
        assert_eq!(r.status.code(), Some(0));
        o
    };
    let (a, b) = (run("a", "1"), run("b", "3"));
    for k in 0..5 {
        let name = format!("f_{k}.field");
        assert_eq!(std::fs::read(a.join(&name)).unwrap(), std::fs::read(b.join(&name)).unwrap());
    }
    assert_eq!(std::fs::read(a.join("family.csv")).unwrap(), std::fs::read(b.join("family.csv")).unwrap());
}
