//! End-to-end checks of the `dks` binary: flags, exit codes, report formats.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn dks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dks"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("dks-cli-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn solve_planted_reports_certificate() {
    let out = dks(&[
        "solve",
        "--generate",
        "planted",
        "--n",
        "512",
        "--p",
        "0.25",
        "--planted-k",
        "20",
        "--k",
        "20",
        "--alg",
        "rcc2",
        "--q",
        "64",
        "--restarts",
        "20",
        "--seed",
        "1",
        "--out",
        "json",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["runs"][0]["integer_value"], 380.0);
    assert_eq!(doc["runs"][0]["certified"], true);
    assert_eq!(doc["summary"]["best_integer_value"], 380.0);
    assert_eq!(doc["runs"][0]["vertex_set"].as_array().unwrap().len(), 20);
}

#[test]
fn solve_rejects_k_out_of_range_with_exit_2() {
    let out = dks(&[
        "solve",
        "--generate",
        "erdos",
        "--n",
        "32",
        "--p",
        "0.4",
        "--k",
        "2",
        "--q",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("k = 2"), "stderr: {msg}");
    assert!(
        msg.contains("3..="),
        "stderr should cite the k range: {msg}"
    );
}

#[test]
fn solve_requires_an_instance_source() {
    let out = dks(&["solve", "--k", "5", "--q", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let out = dks(&[
        "solve",
        "--input",
        "/nonexistent/file.txt",
        "--k",
        "5",
        "--q",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cannot read"));
}

#[test]
fn csv_header_matches_contract() {
    let out = dks(&[
        "solve",
        "--generate",
        "erdos",
        "--n",
        "24",
        "--p",
        "0.4",
        "--k",
        "4",
        "--q",
        "6",
        "--iters",
        "50",
        "--no-timing",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with(
        "instance,n,m,k,alg,q,iters,restarts,seed,bound,integer_value,certified,time_s,termination\n"
    ));
}

#[test]
fn oracle_prints_triangle_optimum() {
    let path = tmp("k3.txt");
    fs::write(&path, "0 1\n1 2\n0 2\n").unwrap();
    let out = dks(&["oracle", "--input", path.to_str().unwrap(), "--k", "3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("optimum 3 objective 6"), "got: {text}");
    assert!(text.contains("set 0 1 2"));
    fs::remove_file(&path).ok();
}

#[test]
fn oracle_guard_exits_3() {
    let out = dks(&[
        "oracle",
        "--generate",
        "erdos",
        "--n",
        "100",
        "--p",
        "0.2",
        "--k",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("guard"));
}

#[test]
fn oracle_maps_back_to_original_labels() {
    let path = tmp("labels.txt");
    // triangle on raw ids 10, 20, 30 plus a pendant 40
    fs::write(&path, "10 20\n20 30\n10 30\n30 40\n").unwrap();
    let out = dks(&["oracle", "--input", path.to_str().unwrap(), "--k", "3"]);
    assert!(out.status.success());
    assert!(
        stdout(&out).contains("set 10 20 30"),
        "got: {}",
        stdout(&out)
    );
    fs::remove_file(&path).ok();
}

#[test]
fn sweep_grid_shape_and_roundtrip() {
    let path = tmp("sweep.csv");
    let out = dks(&[
        "sweep",
        "--generate",
        "erdos",
        "--n",
        "64",
        "--p",
        "0.4",
        "--k",
        "6",
        "--q-list",
        "2,8,16",
        "--iters-list",
        "40,80",
        "--seed",
        "5",
        "--no-timing",
        "--out-path",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("q,iters,bound,integer_value,wall_time_s,termination\n"));

    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 6, "3x2 grid");
    for row in &rows {
        assert_eq!(row.len(), 6);
        row[0].parse::<usize>().unwrap();
        row[1].parse::<usize>().unwrap();
        row[2].parse::<f64>().unwrap();
    }
    fs::remove_file(&path).ok();
}

#[test]
fn weighted_edges_load_with_warning() {
    let path = tmp("weighted.txt");
    let mut text = String::new();
    for i in 0..16u32 {
        for j in (i + 1)..16 {
            text.push_str(&format!("{i} {j} 2.5\n"));
        }
    }
    fs::write(&path, text).unwrap();
    let out = dks(&[
        "solve",
        "--input",
        path.to_str().unwrap(),
        "--k",
        "4",
        "--q",
        "4",
        "--iters",
        "50",
        "--no-timing",
    ]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("weights ignored"));
    // K16: any 4 vertices induce a clique, value 12
    assert!(stdout(&out).contains(",12,"), "got: {}", stdout(&out));
    fs::remove_file(&path).ok();
}

#[test]
fn matrix_instance_loads() {
    let path = tmp("matrix.txt");
    // 4-cycle as a strict lower triangle: rows for i=1..3
    fs::write(&path, "4 50\n1\n0 1\n1 0 1\n").unwrap();
    let out = dks(&[
        "oracle",
        "--input",
        path.to_str().unwrap(),
        "--matrix",
        "--k",
        "3",
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert!(stdout(&out).contains("optimum 2"));
    fs::remove_file(&path).ok();
}

#[test]
fn json_runs_one_object_per_repetition() {
    let out = dks(&[
        "solve",
        "--generate",
        "erdos",
        "--n",
        "32",
        "--p",
        "0.3",
        "--k",
        "4",
        "--q",
        "6",
        "--iters",
        "80",
        "--reps",
        "3",
        "--seed",
        "11",
        "--out",
        "json",
        "--no-timing",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    // repetition i uses seed + i
    assert_eq!(runs[0]["seed"], 11);
    assert_eq!(runs[1]["seed"], 12);
    assert_eq!(runs[2]["seed"], 13);
    assert_eq!(doc["summary"]["reps"], 3);
}
