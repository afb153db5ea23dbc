use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn shc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shc")).args(args).output().expect("spawn shc")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn construct_then_validate() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[1.0, 2.0, 3.0]");
    let l = write(&dir, "l.json", "[0.9, 2.0, 3.1]");
    let cert = dir.path().join("cert.json");
    let o = shc(&["construct", "-d", s(&d), "-l", s(&l), "-o", s(&cert)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout_json(&o)["diag_residual"].as_f64().unwrap() < 1e-12);

    let a = write(&dir, "a.json", "[[1.0, 0.0, 0.0], [0.0, 2.0, 0.0], [0.0, 0.0, 3.0]]");
    let o = shc(&["validate", "-A", s(&a), "-l", s(&l), "--cert", s(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["diag_ok"], Value::Bool(true));

    let wrong = write(&dir, "wrong.json", "[0.8, 2.0, 3.2]");
    let o = shc(&["validate", "-A", s(&a), "-l", s(&wrong), "--cert", s(&cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout_json(&o)["spectrum_ok"], Value::Bool(false));
}

#[test]
fn correct_real_and_complex() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", "[-1.0001, 1.0, 5.0001]");
    let out = dir.path().join("c.json");
    let a = write(&dir, "a.json", "[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 5.0]]");
    let o = shc(&["correct", "-A", s(&a), "-l", s(&l), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout_json(&o)["distance_to_original"].as_f64().unwrap() < 0.1);
    assert!(out.exists());

    let h = write(
        &dir,
        "h.json",
        "[[[0,0],[0,1],[0,0]], [[0,-1],[0,0],[0,0]], [[0,0],[0,0],[5,0]]]",
    );
    let o = shc(&["correct", "-A", s(&h), "-l", s(&l), "-o", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = shc(&["validate", "-A", s(&h), "-l", s(&l), "--cert", s(&out)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn infeasible_target_exits_two() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[1.0, 2.0]");
    let l = write(&dir, "l.json", "[1.1, 1.9]");
    let o = shc(&["construct", "-d", s(&d), "-l", s(&l), "-o", s(&dir.path().join("c.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn bad_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", "[[0.0, 1.0], [2.0, 0.0]]");
    assert_eq!(shc(&["decompose", "-A", s(&a)]).status.code(), Some(1));
    let missing = dir.path().join("nope.json");
    assert_eq!(shc(&["decompose", "-A", s(&missing)]).status.code(), Some(1));
}

#[test]
fn decompose_prints_blocks() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", "[[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 5.0]]");
    let o = shc(&["decompose", "-A", s(&a)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["blocks"].as_array().unwrap().len(), 2);
}

#[test]
fn violate_breaks_the_relation() {
    let dir = TempDir::new().unwrap();
    let d = write(&dir, "d.json", "[0.0, 1.0, 4.0]");
    let l = write(&dir, "l.json", "[-0.5, 1.5, 4.0]");
    let o = shc(&["violate", "-l", s(&l), "-d", s(&d), "-i", "2", "--eps", "1e-3"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lt: Vec<f64> = serde_json::from_slice(&o.stdout).unwrap();
    assert!(lt[0] + lt[1] > 1.0);
}

#[test]
fn sweep_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "cfg.json", r#"{"family": "irreducible", "n": 4, "seed": 3, "eps_grid": [1e-3, 1e-4, 1e-5]}"#);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let o = shc(&["sweep", "-c", s(&cfg), "-o", s(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let slope = stdout_json(&o)["fitted_slope"].as_f64().unwrap();
    assert!((slope - 1.0).abs() < 0.1, "{slope}");
    assert_eq!(shc(&["sweep", "-c", s(&cfg), "-o", s(&b)]).status.code(), Some(0));
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 1 + 3 * 5);

    let bad = write(&dir, "bad.json", r#"{"family": "tridiagonal", "n": 4}"#);
    assert_eq!(shc(&["sweep", "-c", s(&bad), "-o", s(&a)]).status.code(), Some(1));
}
