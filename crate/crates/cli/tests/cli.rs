use std::fs;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvemetrics"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

const SQUARE: &str = r#"{"kind":"polyline","closed":true,"points":[[0,0,0],[2,0,0],[2,2,0],[0,2,0]]}"#;

#[test]
fn metrics_reports_json() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "square.json", SQUARE);
    let out = run(&["metrics", &f]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["length"], 8.0);
    assert!((v["width"].as_f64().unwrap()).abs() < 1e-9);
    assert_eq!(v["closed"], true);
    // Flat curve: zero inradius, infinite L/r printed as null.
    assert!(v["ratio_lr"].is_null());
}

#[test]
fn closed_flag_closes_an_open_polyline() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "open.json", &SQUARE.replace("true", "false"));
    let open = stdout_json(&run(&["metrics", &f]));
    let closed = stdout_json(&run(&["metrics", &f, "--closed"]));
    assert_eq!(open["length"], 6.0);
    assert_eq!(closed["length"], 8.0);
}

#[test]
fn malformed_json_exits_2_with_line_number() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", "{\"kind\":\"polyline\",\n\"closed\":true,\n\"points\":[[0,0,0],]}");
    let out = run(&["metrics", &f]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(run(&["metrics"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "pretzel"]).status.code(), Some(2));
    assert_eq!(run(&["sweep-h", "--from", "2", "--to", "1", "--steps", "5"]).status.code(), Some(2));
    assert_eq!(run(&["bound-table", "--kmax", "0"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "l5", "--h", "2"]).status.code(), Some(2));
}

#[test]
fn solve_h0_prints_root_and_ratio() {
    let out = run(&["solve-h0"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    let h0 = v["h0"].as_f64().unwrap();
    assert!((h0 - 1.97085).abs() < 1e-4);
    let ratio = v["ratio"].as_f64().unwrap();
    assert!(ratio > 5.114 && ratio < 5.1151);
}

#[test]
fn construct_then_measure() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("ball.json");
    let out = run(&["construct", "baseball", "-o", path.to_str().unwrap()]);
    assert!(out.status.success());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.contains("\"kind\":\"piecewise\""));
    let h = stdout_json(&run(&["horizon", path.to_str().unwrap(), "--tol", "1e-8"]));
    assert!((h["value"].as_f64().unwrap() - 8.0 * std::f64::consts::PI).abs() < 1e-3);
    assert_eq!(h["method"], "closed_form_inner");
}

#[test]
fn monte_carlo_horizon_is_seeded() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "loop.json",
        r#"{"kind":"polyline","closed":true,"points":[[3,0,0],[0,3,0],[0,0,3],[-3,0,0],[0,-3,0],[0,0,-3]]}"#,
    );
    let a = run(&["horizon", &f, "--mc", "2000"]);
    let b = run(&["horizon", &f, "--mc", "2000", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed 42"));
    let c = run(&["horizon", &f, "--mc", "2000", "--seed", "7"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn horizon_inside_sphere_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "small.json", r#"{"kind":"polyline","closed":true,"points":[[0.5,0,0],[0,0.5,0],[0,0,0.5]]}"#);
    assert_eq!(run(&["horizon", &f]).status.code(), Some(2));
}

#[test]
fn csv_outputs_have_headers() {
    let sweep = String::from_utf8(run(&["sweep-h", "--from", "1.9", "--to", "2.1", "--steps", "5"]).stdout).unwrap();
    let lines: Vec<&str> = sweep.lines().collect();
    assert_eq!(lines[0], "h,L,d,w,L/w");
    assert_eq!(lines.len(), 6);
    let table = String::from_utf8(run(&["bound-table", "--kmax", "3"]).stdout).unwrap();
    assert!(table.starts_with("k,open_w,open_r,closed_w,closed_r\n1,3.766"));
    let grid = String::from_utf8(run(&["i-grid", "--nx", "3", "--ny", "4"]).stdout).unwrap();
    assert_eq!(grid.lines().count(), 1 + 12);
}

#[test]
fn crofton_modes() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "square.json", SQUARE);
    let planar = stdout_json(&run(&["crofton", &f, "--mode", "planar"]));
    assert!((planar["value"].as_f64().unwrap() - 8.0).abs() < 1e-3);
    let ring: Vec<String> = (0..64)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 64.0;
            format!("[{},{},0]", t.cos(), t.sin())
        })
        .collect();
    let g = write(&dir, "great.json", &format!(r#"{{"kind":"polyline","closed":true,"points":[{}]}}"#, ring.join(",")));
    let out = run(&["crofton", &g, "--mode", "spherical", "--n", "20000"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["seed"], 42);
    assert!((v["value"].as_f64().unwrap() - std::f64::consts::TAU).abs() <= v["abs_error"].as_f64().unwrap());
}

#[test]
fn verify_constants_table() {
    let out = run(&["verify-paper"]);
    let table = String::from_utf8(out.stdout).unwrap();
    assert!(table.lines().any(|l| l.starts_with("L5 ratio ") && l.ends_with("PASS")), "{table}");
    // Two published figures do not reproduce: the h0 interval and the open
    // L/r constant. The run reports them and exits 1.
    let fails: Vec<&str> = table.lines().filter(|l| l.ends_with("FAIL")).collect();
    assert_eq!(fails.len(), 2, "{table}");
    assert!(fails[0].starts_with("h0 ") && fails[1].starts_with("open L/r"));
    assert_eq!(out.status.code(), Some(1));
    // Idempotent.
    assert_eq!(run(&["verify-paper"]).stdout, table.as_bytes());
}
