use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use mmlab::report::ConditionDoc;

fn mmlab(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmlab"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run mmlab")
}

#[test]
fn oscillator_report_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmlab(
        &["oscillator", "--m", "1", "--omega", "1", "--hbar", "1", "--size", "64", "--alpha-max", "4", "--out", "r.json"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: ConditionDoc = serde_json::from_slice(&fs::read(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(doc.window, [0, 59]);
    assert_eq!(doc.rows.len(), 60);
    assert!(doc.rows.iter().all(|r| r.residual_eq25.abs() <= 1e-10));
    assert_eq!(doc.edge_diag_im, -63.0);
    // no temporary files left behind
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn csv_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmlab(&["oscillator", "--size", "8", "--format", "csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 8);
    assert!(text.starts_with("n,eq4_hermitian,eq4_constrained,eq14,eq25,bj_alternative,"));
}

#[test]
fn invalid_arguments_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["potential", "--coeffs", "0,0,0.5,0,0.05", "--size", "-3"][..],
        &["potential", "--coeffs", "0,1"],
        &["potential"],
        &["oscillator", "--m", "-1"],
        &["oscillator", "--size", "4", "--alpha-max", "4"],
        &["oscillator", "--format", "xml"],
        &["classical", "--coeffs", "0,0,-2,0,1", "--size", "2"],
        &["frobnicate"],
        &["oscillator", "--config", "missing.cfg"],
    ] {
        let out = mmlab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn write_failure_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmlab(&["oscillator", "--size", "4", "--out", "no/such/dir/r.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("run.cfg"),
        "# quartic run\ncoeffs = 0,0,0.5,0,0.05\nsize = 20\nbasis_size = 80\nalpha_max = 3\nformat = json\n",
    )
    .unwrap();
    let out = mmlab(&["potential", "--config", "run.cfg", "--size", "16", "--out", "q.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: ConditionDoc = serde_json::from_slice(&fs::read(dir.path().join("q.json")).unwrap()).unwrap();
    assert_eq!(doc.system.size, 16);
    assert_eq!(doc.system.kind, "potential");
    assert_eq!(doc.window, [0, 12]);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for (name, args) in [
        ("a", &["potential", "--coeffs", "0,0,0.5,0,0.05", "--size", "12", "--basis-size", "48"][..]),
        ("b", &["correspondence", "--size", "10", "--format", "csv"]),
        ("c", &["classical", "--size", "5", "--j0", "half"]),
    ] {
        let first = mmlab(args, dir.path());
        let second = mmlab(args, dir.path());
        assert_eq!(first.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&first.stderr));
        assert_eq!(first.stdout, second.stdout, "{name}");
        assert!(!first.stdout.is_empty());
    }
}

#[test]
fn classical_levels() {
    let dir = tempfile::tempdir().unwrap();
    let out = mmlab(&["classical", "--size", "3", "--j0", "half", "--format", "csv"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    let energies: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    assert_eq!(energies.len(), 3);
    for (n, e) in energies.iter().enumerate() {
        assert!((e - (n as f64 + 0.5)).abs() < 1e-9);
    }
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = mmlab(&["verify", "--out", "v.csv"], dir.path());
    assert_eq!(ok.status.code(), Some(0));
    let table = fs::read_to_string(dir.path().join("v.csv")).unwrap();
    assert_eq!(table.lines().count(), 10);
    let bad = mmlab(&["verify", "--perturb", "1e-3"], dir.path());
    assert_eq!(bad.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&bad.stdout).contains("FAIL [1]"));
}
