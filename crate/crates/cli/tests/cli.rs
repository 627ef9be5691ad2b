use std::path::Path;
use std::process::{Command, Output};

fn regupath(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regupath")).args(args).output().unwrap()
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let out = regupath(&["preset", "linear_benchmark"]);
    assert!(out.status.success());
    let mut cfg: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    cfg["model"]["n"] = 61.into();
    cfg["j_max"] = 8.into();
    cfg["output_dir"] = dir.join("out").to_str().unwrap().into();
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn preset_prints_valid_json() {
    for name in ["example1", "example2_smooth", "example2_piecewise", "linear_benchmark", "constructed_source"] {
        let out = regupath(&["preset", name]);
        assert!(out.status.success(), "{name}");
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert!(v["experiment"].is_string());
    }
}

#[test]
fn unknown_preset_is_a_config_error() {
    let out = regupath(&["preset", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown preset"));
}

#[test]
fn invalid_config_exits_2_and_lists_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path());
    let mut cfg: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    cfg["q"] = 1.5.into();
    cfg["alpha0"] = (-1.0).into();
    std::fs::write(&path, cfg.to_string()).unwrap();
    let out = regupath(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("q") && err.contains("alpha0"), "{err}");
    assert!(!dir.path().join("out").exists());
}

#[test]
fn missing_config_exits_2() {
    let out = regupath(&["run", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn run_writes_bundle_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path());
    let cfg = path.to_str().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = regupath(&["run", "--config", cfg, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stdout).contains("hanke_raus"));
    }
    assert!(a.join("config.json").is_file());
    for name in ["data.csv", "path_quadratic.csv", "reconstruction_quadratic.csv", "summary.csv"] {
        let x = std::fs::read_to_string(a.join(name)).unwrap();
        assert_eq!(x, std::fs::read_to_string(b.join(name)).unwrap(), "{name}");
    }
    let c = dir.path().join("c");
    let o = regupath(&["run", "--config", cfg, "--seed", "7", "--out", c.to_str().unwrap()]);
    assert!(o.status.success());
    assert_ne!(std::fs::read(a.join("data.csv")).unwrap(), std::fs::read(c.join("data.csv")).unwrap());
}

#[test]
fn path_subcommand_skips_rules() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path());
    let o = regupath(&["path", "--config", path.to_str().unwrap()]);
    assert!(o.status.success());
    let out = dir.path().join("out");
    assert!(out.join("path_quadratic.csv").is_file());
    assert!(!out.join("reconstruction_quadratic.csv").exists());
}

#[test]
fn theory_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path());
    let o = regupath(&["theory", "--config", path.to_str().unwrap(), "--deltas", "0.02,0.01"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let table = std::fs::read_to_string(dir.path().join("out/theory_table.csv")).unwrap();
    assert_eq!(table.lines().count(), 3);
    let bad = regupath(&["theory", "--config", path.to_str().unwrap(), "--deltas", "0.01,0.02"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn thread_count_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = small_config(dir.path());
    let o = Command::new(env!("CARGO_BIN_EXE_regupath"))
        .args(["path", "--config", path.to_str().unwrap()])
        .env("REGUPATH_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_regupath"))
        .args(["preset", "example1"])
        .env("REGUPATH_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
