use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn usvpath(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_usvpath"))
        .args(args)
        .arg("--out")
        .arg(out)
        .arg("--quiet")
        .env_remove("USVPATH_OUT")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SHORT: &[&str] = &["--set", "sim.duration=20", "--set", "sim.dt=0.05"];

fn with_short<'a>(args: &[&'a str]) -> Vec<&'a str> {
    args.iter().chain(SHORT).copied().collect()
}

#[test]
fn run_writes_log_and_metrics() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &with_short(&["run", "--emit-plot-script"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let log = std::fs::read_to_string(dir.path().join("log.csv")).unwrap();
    assert!(log.starts_with("t,north,east,yaw,"));
    assert_eq!(log.lines().count(), 1 + 401);
    let metrics = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(metrics.lines().count(), 2);
    assert!(dir.path().join("plot.gp").exists());
    assert!(dir.path().join("path.csv").exists());
}

#[test]
fn missing_config_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &["run", "--config", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("/nonexistent/scenario.json"));
    assert!(!dir.path().join("log.csv").exists());
}

#[test]
fn bad_override_key_lists_valid_keys() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &["run", "--set", "guidance.params.lookahead=3"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("guidance.params.lookahead_delta"), "{err}");
    assert!(err.contains("sim.dt"), "{err}");
}

#[test]
fn config_file_is_read() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("s.json");
    std::fs::write(&cfg, r#"{"name": "tiny", "sim": {"duration": 1.0, "dt": 0.1}}"#).unwrap();
    let out = dir.path().join("out");
    let o = usvpath(&out, &["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let metrics = std::fs::read_to_string(out.join("metrics.csv")).unwrap();
    assert!(metrics.lines().nth(1).unwrap().starts_with("tiny,vfalos,"));
    assert_eq!(std::fs::read_to_string(out.join("log.csv")).unwrap().lines().count(), 12);
}

#[test]
fn divergence_exits_with_two() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(
        dir.path(),
        &with_short(&[
            "run",
            "--set",
            "control.heading.kp=1e300",
            "--set",
            "control.heading.output_limit=1e308",
            "--set",
            "vessel.thrust_limit=1e308",
        ]),
    );
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("non-finite"));
}

#[test]
fn compare_three_laws() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &with_short(&["compare", "--laws", "tlos,vfilos,vfalos", "--emit-plot-script"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for law in ["tlos", "vfilos", "vfalos"] {
        assert!(dir.path().join(format!("log_{law}.csv")).exists());
    }
    let table = std::fs::read_to_string(dir.path().join("comparison.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("law,baseline,rms_cross_track,"));
    assert!(lines[0].ends_with("rank_rms,rank_overshoot,rank_convergence"));
    assert!(lines[1].starts_with("tlos,") && lines[3].starts_with("vfalos,"));
}

#[test]
fn compare_single_law_and_unknown_law() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &with_short(&["compare", "--laws", "alos"]));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table = std::fs::read_to_string(dir.path().join("comparison.csv")).unwrap();
    assert_eq!(table.lines().count(), 2);
    assert!(table.lines().nth(1).unwrap().ends_with(",1,1,1"));

    let o = usvpath(dir.path(), &with_short(&["compare", "--laws", "alos,pure-pursuit"]));
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("pure-pursuit"));
}

#[test]
fn sweep_rows_follow_values() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(
        dir.path(),
        &with_short(&["sweep", "--sweep-key", "guidance.params.lookahead_delta", "--sweep-values", "3,5,8"]),
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let firsts: Vec<&str> = csv.lines().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(firsts, ["guidance.params.lookahead_delta", "3", "5", "8"]);
}

#[test]
fn sweep_preserves_other_keys() {
    // Sweeping a key to its current value reproduces the plain run exactly.
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &with_short(&["run", "--set", "guidance.params.vf_k=0.5"]));
    assert_eq!(o.status.code(), Some(0));
    let metrics = std::fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    let run_fields = metrics.lines().nth(1).unwrap().split_once(",vfalos,").unwrap().1.to_string();

    let o = usvpath(
        dir.path(),
        &with_short(&[
            "sweep",
            "--set",
            "guidance.params.vf_k=0.5",
            "--sweep-key",
            "guidance.params.lookahead_delta",
            "--sweep-values",
            "5.0",
        ]),
    );
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let sweep_fields = csv.lines().nth(1).unwrap().split_once(',').unwrap().1;
    assert_eq!(sweep_fields, run_fields);
}

#[test]
fn sweep_without_values_fails() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &["sweep", "--sweep-key", "guidance.params.vf_k", "--sweep-values"]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    let o = usvpath(dir.path(), &["sweep", "--sweep-key", "guidance.params.nope", "--sweep-values", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_stability_outcomes() {
    let dir = TempDir::new().unwrap();
    let o = usvpath(dir.path(), &["verify-stability"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("stability.csv")).unwrap();
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));

    let o = usvpath(dir.path(), &["verify-stability", "--set", "guidance.params.adaptation_gain=-0.05"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("stability check failed"));

    let o = usvpath(dir.path(), &["verify-stability", "--set", "sim.duration=0.2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("at least 50"));
}

#[test]
fn output_dir_from_environment() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_usvpath"))
        .args(["run", "-q", "--set", "sim.duration=1"])
        .env("USVPATH_OUT", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(dir.path().join("log.csv").exists());
}

#[test]
fn usage_errors_are_config_errors() {
    let o = Command::new(env!("CARGO_BIN_EXE_usvpath")).arg("fly").output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    let o = Command::new(env!("CARGO_BIN_EXE_usvpath")).arg("--help").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
}
