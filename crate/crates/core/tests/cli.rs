use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use vofham::benchmarks::Benchmark;
use vofham::report::RunConfig;

fn run(out_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vofham"))
        .args(args)
        .env("VOFHAM_OUT", out_dir)
        .output()
        .unwrap()
}

#[test]
fn table_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(run(a.path(), &["table", "--problem", "2"]).status.success());
    assert!(run(b.path(), &["table", "--problem", "2"]).status.success());
    let ja = fs::read(a.path().join("problem2_table.json")).unwrap();
    let jb = fs::read(b.path().join("problem2_table.json")).unwrap();
    assert_eq!(ja, jb);
    let csv = fs::read_to_string(a.path().join("problem2_table.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "terms,e_min,hbar_star");
    assert_eq!(lines[1], "2,0.2891785254,-0.2573132748");
    assert_eq!(lines.len(), 4);
}

#[test]
fn written_config_reproduces_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig::benchmark(Benchmark::Nonlinear, false).unwrap();
    let path = dir.path().join("run.json");
    fs::write(&path, cfg.to_json().unwrap()).unwrap();
    let first = tempfile::tempdir().unwrap();
    assert!(run(first.path(), &["table", "--problem", "2"])
        .status
        .success());
    let second = tempfile::tempdir().unwrap();
    let out = run(
        second.path(),
        &["table", "--config", path.to_str().unwrap()],
    );
    assert!(out.status.success());
    assert_eq!(
        fs::read(first.path().join("problem2_table.json")).unwrap(),
        fs::read(second.path().join("problem2_table.json")).unwrap()
    );
}

#[test]
fn curves_write_three_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &[
            "curves",
            "--problem",
            "2",
            "--hbar",
            "-0.134256",
            "--points",
            "11",
        ],
    );
    assert!(out.status.success());
    for (name, header, rows) in [
        ("problem2_residual_curve.csv", "hbar,E", 11),
        ("problem2_midline.csv", "t,u", 11),
        ("problem2_surface.csv", "x,t,u", 121),
    ] {
        let text = fs::read_to_string(dir.path().join(name)).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(header));
        let body: Vec<&str> = lines.collect();
        assert_eq!(body.len(), rows, "{name}");
        assert!(body
            .iter()
            .all(|l| !l.contains("NaN") && !l.contains("inf")));
    }
}

#[test]
fn residual_curve_edges_exceed_the_minimum() {
    let dir = tempfile::tempdir().unwrap();
    assert!(
        run(dir.path(), &["curves", "--problem", "1", "--points", "101"])
            .status
            .success()
    );
    let text = fs::read_to_string(dir.path().join("problem1_residual_curve.csv")).unwrap();
    let e: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    assert!(e[0] > min && e[e.len() - 1] > min);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"problem\": \"problem9\"}").unwrap();
    let out = run(dir.path(), &["table", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["table", "--problem", "2", "--terms", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(dir.path(), &["curves", "--problem", "2", "--hbar", "1e200"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(dir.path(), &["validate-oracle", "--nodes", "256"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn empty_term_list_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["table", "--problem", "1", "--terms", ""]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}
