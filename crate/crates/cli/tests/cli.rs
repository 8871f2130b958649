use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
}

fn nudicke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nudicke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn no_coupling_survival_is_one_everywhere() {
    let dir = tempfile::tempdir().unwrap();
    let out = nudicke(&[
        "run",
        path_str(&scenario("no_coupling")),
        "--out-dir",
        path_str(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("no_coupling.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[..2], ["step", "time"]);
    let mut rows = 0;
    for line in lines {
        rows += 1;
        for v in line.split(',').skip(2) {
            let v: f64 = v.parse().unwrap();
            assert!((v - 1.0).abs() < 1e-12, "{line}");
        }
    }
    assert_eq!(rows, 5);
    assert!(dir.path().join("no_coupling_diagonal_dicke_step4.qasm").exists());
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = nudicke(&[
            "run",
            path_str(&scenario("fig3")),
            "--out-dir",
            path_str(dir.path()),
            "--shots",
            "1024",
            "--seed",
            "11",
        ]);
        assert!(out.status.success());
    }
    let read = |d: &tempfile::TempDir| std::fs::read(d.path().join("fig3.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    let text = String::from_utf8(read(&a)).unwrap();
    assert!(text.lines().next().unwrap().contains("conventional_m0_circuit_err"));
}

#[test]
fn compare_reports_qubit_counts() {
    let out = nudicke(&["compare", path_str(&scenario("fig3"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let qubits = |enc: &str| -> usize {
        let line = text.lines().find(|l| l.starts_with(enc)).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(qubits("conventional"), 8);
    assert_eq!(qubits("dicke_ancilla"), 5);
}

#[test]
fn compare_no_coupling_has_no_deviation() {
    let out = nudicke(&["compare", path_str(&scenario("no_coupling"))]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(2) {
        let dev: f64 = line.split_whitespace().nth(6).unwrap().parse().unwrap();
        assert!(dev < 1e-9, "{line}");
    }
}

#[test]
fn export_qasm_writes_one_file_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let out = nudicke(&[
        "export-qasm",
        path_str(&scenario("fig3")),
        "--out-dir",
        path_str(dir.path()),
    ]);
    assert!(out.status.success());
    let mut names: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names.len(), 20);
    assert!(names.contains(&"fig3_dicke_ancilla_step10.qasm".to_string()));
    let text = std::fs::read_to_string(dir.path().join("fig3_conventional_step1.qasm")).unwrap();
    assert!(text.starts_with("OPENQASM 3.0;"));
}

#[test]
fn invalid_config_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(scenario("fig3"))
        .unwrap()
        .replace("\"n_steps\": 10", "\"n_steps\": 0");
    std::fs::write(&bad, text).unwrap();
    let out = nudicke(&["run", path_str(&bad), "--out-dir", path_str(dir.path())]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_steps"));

    let out = nudicke(&["run", "/nonexistent/scenario.json"]);
    assert!(!out.status.success());
}

#[test]
fn oversized_ensemble_hits_dimension_cap() {
    let dir = tempfile::tempdir().unwrap();
    let big = dir.path().join("big.json");
    let text = std::fs::read_to_string(scenario("fig3"))
        .unwrap()
        .replace("\"n_particles\": 7", "\"n_particles\": 20");
    std::fs::write(&big, text).unwrap();
    let out = nudicke(&["run", path_str(&big), "--out-dir", path_str(dir.path())]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds the cap"));
}

#[test]
fn bare_shots_flag_enables_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = scenario("no_coupling");
    let out = nudicke(&["run", path_str(&cfg), "--shots", "--out-dir", path_str(dir.path())]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("no_coupling.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("_circuit_err"));
}
