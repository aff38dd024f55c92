use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qswitch_cli::record::RunRecord;

fn qswitch(root: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qswitch"))
        .args(args)
        .env("QSWITCH_OUTPUT_ROOT", root)
        .output()
        .expect("spawn qswitch")
}

fn header(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

#[test]
fn two_switch_writes_record_and_tables() {
    let root = tempfile::tempdir().unwrap();
    let out = qswitch(root.path(), &["two-switch"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stdout)
    );
    let dir = root.path().join("two_switch_forms_seed0");
    let record = RunRecord::load(&dir).unwrap();
    assert!(record.passed);
    assert_eq!(record.command, "two_switch_forms");
    assert!(record.config.unwrap().mode.is_none());
    for t in &record.tables {
        assert!(dir.join(t).is_file(), "missing {t}");
    }
    assert!(record.metrics["max_deviation_rz_quantum"] < 1e-8);
    let rows = fs::read_to_string(dir.join("tables/two_switch_rz.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(rows, 1 + 25 * 101);
}

#[test]
fn fourier_tables_have_coefficient_columns() {
    let root = tempfile::tempdir().unwrap();
    let out = qswitch(root.path(), &["fourier", "--seed", "4"]);
    assert!(out.status.success());
    let dir = root.path().join("fourier_scan_seed4");
    assert_eq!(
        header(&dir.join("tables/fourier_three_switch_quantum.csv")),
        "frequency,re,im"
    );
    assert_eq!(
        RunRecord::load(&dir).unwrap().metrics["baseline_max_frequency"],
        2.0
    );
}

#[test]
fn fixed_replay_and_dataset_dump() {
    let root = tempfile::tempdir().unwrap();
    let dir = root.path().join("replay");
    let out = qswitch(
        root.path(),
        &[
            "three-switch",
            "--mode",
            "fixed",
            "--replay",
            "--out",
            dir.to_str().unwrap(),
        ],
    );
    assert!(out.status.success());
    let record = RunRecord::load(&dir).unwrap();
    assert!((record.metrics["test_accuracy"] - 0.5).abs() <= 0.08);
    assert_eq!(
        header(&dir.join("tables/test.csv")),
        "x1,x2,label,expectation,predicted"
    );
    let grid = fs::read_to_string(dir.join("tables/boundary.csv"))
        .unwrap()
        .lines()
        .count();
    assert_eq!(grid, 1 + 101 * 101);
}

#[test]
fn short_training_run_writes_ancilla_tables() {
    let root = tempfile::tempdir().unwrap();
    let args = [
        "three-switch",
        "--mode",
        "classical",
        "--train",
        "--budget",
        "30",
        "--restarts",
        "2",
        "--n-train",
        "20",
    ];
    let out = qswitch(root.path(), &args);
    assert!(out.status.code().is_some_and(|c| c <= 1));
    let dir = root.path().join("three_switch_train_classical_seed0");
    let probs = fs::read_to_string(dir.join("tables/ancilla_probabilities.csv")).unwrap();
    let total: f64 = probs
        .lines()
        .skip(1)
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-10);
    assert_eq!(
        fs::read_to_string(dir.join("tables/ancilla_density.csv"))
            .unwrap()
            .lines()
            .count(),
        65
    );
    let record = RunRecord::load(&dir).unwrap();
    assert!(record.metrics["evaluations"] <= 30.0);
    assert_eq!(record.params["model"].len(), 12);
}

#[test]
fn rerun_reproduces_metrics() {
    let root = tempfile::tempdir().unwrap();
    let first = root.path().join("first");
    let second = root.path().join("second");
    let common = ["--budget", "60", "--restarts", "3", "--seed", "9"];
    let mut args = vec!["reupload", "--out", first.to_str().unwrap()];
    args.extend(common);
    qswitch(root.path(), &args);
    let out = qswitch(
        root.path(),
        &[
            "rerun",
            first.to_str().unwrap(),
            "--out",
            second.to_str().unwrap(),
        ],
    );
    assert!(out.status.code().is_some_and(|c| c <= 1));
    let (a, b) = (
        RunRecord::load(&first).unwrap(),
        RunRecord::load(&second).unwrap(),
    );
    assert_eq!(a.metrics, b.metrics);
    assert_eq!(a.params, b.params);
    assert_eq!(a.checks, b.checks);
    for t in &a.tables {
        assert_eq!(
            fs::read(first.join(t)).unwrap(),
            fs::read(second.join(t)).unwrap()
        );
    }
}

#[test]
fn selftest_passes_and_catches_injected_fault() {
    let root = tempfile::tempdir().unwrap();
    assert!(qswitch(root.path(), &["selftest"]).status.success());
    let out = qswitch(
        root.path(),
        &[
            "selftest",
            "--inject-fault",
            "--out",
            root.path().join("f").to_str().unwrap(),
        ],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL] permutation faithfulness"));
}

#[test]
fn invalid_arguments_are_rejected() {
    let root = tempfile::tempdir().unwrap();
    let out = qswitch(root.path(), &["three-switch", "--mode", "sideways"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qswitch(
        root.path(),
        &["three-switch", "--mode", "quantum", "--replay", "--train"],
    );
    assert_eq!(out.status.code(), Some(2));
    let out = qswitch(
        root.path(),
        &["rerun", root.path().join("missing").to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(2));
}
