//! End-to-end checks of the `capsim` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use capsim::experiment::{verify_manifest, RunManifest};

fn capsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_capsim")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_three_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = capsim(&["run", "--rho", "0.5", "--r", "10", "--out", path(dir.path())]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["trajectory.csv", "analysis.json", "panels.csv"] {
        assert!(dir.path().join(name).is_file(), "{name}");
    }
    let csv = fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert_eq!(csv.lines().count(), 151);
    let analysis: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("analysis.json")).unwrap()).unwrap();
    assert_eq!(analysis["hump"]["found"], true);
    assert_eq!(analysis["hump"]["t_peak"], 51);
}

#[test]
fn single_cell_sweep_matches_run_byte_for_byte() {
    let run_dir = tempfile::tempdir().unwrap();
    let sweep_dir = tempfile::tempdir().unwrap();
    let args = ["--rho", "0.75", "--r", "20", "--horizon", "120"];
    let mut run = vec!["run"];
    run.extend(args);
    run.extend(["--out", path(run_dir.path())]);
    assert_eq!(code(&capsim(&run)), 0);
    let mut sweep = vec!["sweep"];
    sweep.extend(args);
    sweep.extend(["--out", path(sweep_dir.path())]);
    assert_eq!(code(&capsim(&sweep)), 0);

    let cell = sweep_dir.path().join("rho0.75_r20");
    for name in ["trajectory.csv", "analysis.json", "panels.csv"] {
        assert_eq!(
            fs::read(run_dir.path().join(name)).unwrap(),
            fs::read(cell.join(name)).unwrap(),
            "{name}"
        );
    }
    let manifest: RunManifest =
        serde_json::from_str(&fs::read_to_string(sweep_dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.cells.len(), 1);
    assert!(verify_manifest(&manifest, sweep_dir.path()).is_empty());

    fs::write(cell.join("panels.csv"), "tampered\n").unwrap();
    assert_eq!(verify_manifest(&manifest, sweep_dir.path()).len(), 1);
}

#[test]
fn sweeps_are_reproducible_across_directories() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = capsim(&["sweep", "--rho", "0.25,0.5", "--r", "inf,1", "--horizon", "60", "--out", path(dir.path())]);
        assert_eq!(code(&out), 0);
    }
    assert_eq!(
        fs::read(a.path().join("manifest.json")).unwrap(),
        fs::read(b.path().join("manifest.json")).unwrap()
    );
}

#[test]
fn oracle_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = capsim(&[
        "oracle", "--n", "10", "--l", "7", "--r", "3", "--rho", "1/2", "--replicates", "2000", "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("oracle_report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn oracle_exact_only_accepts_large_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = capsim(&[
        "oracle", "--n", "60", "--l", "40", "--r", "5", "--rho", "0.3", "--replicates", "0", "--out",
        path(dir.path()),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn invalid_input_exits_with_usage_code() {
    let dir = tempfile::tempdir().unwrap();
    let d = path(dir.path());
    assert_eq!(code(&capsim(&["oracle", "--n", "30", "--replicates", "10", "--out", d])), 2);
    assert_eq!(code(&capsim(&["run", "--rho", "1.5", "--out", d])), 2);
    assert_eq!(code(&capsim(&["run", "--rho", "0", "--out", d])), 2);
    assert_eq!(code(&capsim(&["run", "--horizon", "ten", "--out", d])), 2);
    assert_eq!(code(&capsim(&["frobnicate"])), 2);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("settings.cfg");
    let out_dir = dir.path().join("out");
    fs::write(&cfg, format!("# test\nrho = 0.25\nhorizon = 40\nout = {}\n", out_dir.display())).unwrap();
    let out = capsim(&["run", "--config", path(&cfg), "--horizon", "30"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let analysis: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("analysis.json")).unwrap()).unwrap();
    assert_eq!(analysis["params"]["rho"], 0.25);
    assert_eq!(analysis["params"]["horizon"], 30);

    fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(code(&capsim(&["run", "--config", path(&cfg)])), 2);
}

#[test]
fn analyze_round_trips_and_detects_wrong_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("run");
    let out = capsim(&["run", "--rho", "0.5", "--r", "10", "--out", path(&run_dir)]);
    assert_eq!(code(&out), 0);
    let input = run_dir.join("trajectory.csv");

    let again = dir.path().join("again");
    let out = capsim(&["analyze", "--input", path(&input), "--rho", "0.5", "--r", "10", "--out", path(&again)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        fs::read(run_dir.join("analysis.json")).unwrap(),
        fs::read(again.join("analysis.json")).unwrap()
    );

    let wrong = dir.path().join("wrong");
    let out = capsim(&["analyze", "--input", path(&input), "--rho", "0.25", "--r", "10", "--out", path(&wrong)]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("disagree"));
}
