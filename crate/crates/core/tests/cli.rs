use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_nsk-dg");

fn nsk(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn bad_config_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.cfg", "case = test1\nrho1 = -1\n");
    let out = nsk(&["run", "--config", &cfg, "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let cfg = write_config(dir.path(), "unknown.cfg", "case = test1\nfoo = 1\n");
    assert_eq!(nsk(&["run", "--config", &cfg]).status.code(), Some(1));
    assert_eq!(nsk(&["run", "--config", "/nonexistent.cfg"]).status.code(), Some(1));
    assert_eq!(nsk(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn newton_failure_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "hard.cfg",
        "case = test2\ninitial = random 3 0.5\nmesh = interval -1 1 32\nt_final = 0.1\nnewton_max_iter = 1\nnewton_tol = 1e-14\n",
    );
    let o = dir.path().join("o");
    let out = nsk(&["run", "--config", &cfg, "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read(&o.join("manifest.txt")).contains("status = failed"));
}

#[test]
fn check_passes() {
    let out = nsk(&["check"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().count() >= 10);
    assert!(text.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn run_writes_timeseries_manifest_and_snapshots() {
    let dir = tempfile::tempdir().unwrap();
    let text = "case = test6\nmesh = interval -1 1 20\nt_final = 0.05\nsnapshot_every = 2\n";
    let cfg = write_config(dir.path(), "run.cfg", text);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for o in [&a, &b] {
        let out = nsk(&["run", "--config", &cfg, "--out", o.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let ts = read(&a.join("timeseries.csv"));
    let mut lines = ts.lines();
    assert!(lines.next().unwrap().starts_with("step,t,energy,mass,deviation"));
    assert_eq!(lines.count(), 6);
    let manifest = read(&a.join("manifest.txt"));
    assert!(manifest.contains("status = ok"));
    assert!(manifest.contains("rows = 6"));
    assert!(manifest.contains("case = test6"));
    for name in ["snapshot_000000.dat", "snapshot_000002.dat", "snapshot_000004.dat", "snapshot_000005.dat"] {
        assert_eq!(read(&a.join(name)), read(&b.join(name)), "{name}");
    }
    assert_eq!(ts, read(&b.join("timeseries.csv")));
}

#[test]
fn out_key_is_used_when_no_flag_is_given() {
    let dir = tempfile::tempdir().unwrap();
    let o = dir.path().join("from_file");
    let text = format!("case = test1\nmesh = interval -1 1 8\nt_final = 0.02\nout = {}\n", o.display());
    let cfg = write_config(dir.path(), "run.cfg", &text);
    assert_eq!(nsk(&["run", "--config", &cfg]).status.code(), Some(0));
    assert!(o.join("timeseries.csv").exists());
}

#[test]
fn two_dimensional_snapshots_are_vtk() {
    let dir = tempfile::tempdir().unwrap();
    let text = "case = test2\ninitial = pure 1\nmesh = rectangle 0 1 0 1 2 2\nt_final = 0.02\nsnapshot_every = 1\n";
    let cfg = write_config(dir.path(), "pure.cfg", text);
    let o = dir.path().join("o");
    assert_eq!(nsk(&["run", "--config", &cfg, "--out", o.to_str().unwrap()]).status.code(), Some(0));
    let vtk = read(&o.join("snapshot_000002.vtk"));
    assert!(vtk.starts_with("# vtk DataFile Version 3.0"));
    assert!(vtk.contains("DATASET UNSTRUCTURED_GRID"));
    assert!(vtk.contains("POINTS 48 double"));
    let phi: Vec<f64> = vtk
        .split("SCALARS phi double 1\nLOOKUP_TABLE default\n")
        .nth(1)
        .unwrap()
        .split_whitespace()
        .take(48)
        .map(|w| w.parse().unwrap())
        .collect();
    assert!(phi.iter().all(|p| (p - 1.0).abs() < 1e-12), "{phi:?}");
}

#[test]
fn converge_prints_a_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.cfg", "case = test1\nt_final = 0.01\n");
    let o = dir.path().join("o");
    let out = nsk(&["converge", "--config", &cfg, "--levels", "16,32", "--out", o.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let table = read(&o.join("convergence.csv"));
    assert_eq!(table, String::from_utf8_lossy(&out.stdout));
    assert_eq!(table.lines().count(), 3);
    assert!(table.starts_with("N,e_phi,eoc_phi"));

    let cfg = write_config(dir.path(), "r.cfg", "case = test2\n");
    assert_eq!(nsk(&["converge", "--config", &cfg, "--levels", "16"]).status.code(), Some(1));
}
