use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lassospec"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const DUMBBELL: &str = r#"{"vertices":["a","b"],"edges":[
  {"id":"br","from":"a","to":"b","length":1.0},
  {"id":"la","from":"a","to":"a","length":1.3},
  {"id":"lb","from":"b","to":"b","length":0.8}]}"#;
const LOOP: &str = r#"{"vertices":["v"],"edges":[{"id":"l","from":"v","to":"v","length_pi":2}]}"#;
const DD: &str = r#"{"vertices":["a","b"],"edges":[{"id":"e","from":"a","to":"b","length_pi":1}],"dirichlet":["a","b"]}"#;
const NN: &str = r#"{"vertices":["a","b"],"edges":[{"id":"e","from":"a","to":"b","length_pi":1}]}"#;

#[test]
fn analyze_dumbbell() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "db.json", DUMBBELL);
    let o = run(&["analyze", s(&g)]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["betti"], 2);
    assert_eq!(v["m_U"], 3);
    assert_eq!(v["m_M"], 3);
    assert_eq!(v["is_lasso_tree"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&run(&["spectrum"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["construct", "--neumann", "1"])), 2);
    assert_eq!(code(&run(&["spectrum", "/nonexistent/graph.json"])), 2);
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "db.json", DUMBBELL);
    assert_eq!(
        code(&run(&["spectrum", s(&g), "--k-max", "3", "--count", "4"])),
        2
    );
    let bad = write(
        &dir,
        "bad.json",
        r#"{"vertices":["a"],"edges":[{"id":"e","from":"a","to":"a","length":-1}]}"#,
    );
    let o = run(&["analyze", s(&bad)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("nonpositive length"));
}

#[test]
fn loop_graph_is_exceptional() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "loop.json", LOOP);
    for cmd in ["classify", "bounds"] {
        let o = run(&[cmd, s(&g)]);
        assert_eq!(code(&o), 4);
        assert!(String::from_utf8_lossy(&o.stderr).contains("exceptional: loop graph"));
    }
}

#[test]
fn construct_then_classify() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.json");
    let o = run(&[
        "construct",
        "--neumann",
        "2",
        "--dirichlet",
        "4",
        "--beta",
        "2",
        "-o",
        s(&out),
    ]);
    assert_eq!(code(&o), 0);
    let seq = stdout_json(&o);
    assert_eq!(seq["sequence"][0]["first_index"], 4);
    assert_eq!(seq["sequence"][0]["multiplicity"], 9);
    assert_eq!(seq["sequence"][0]["paper_formula_first_index"], 10);

    let o = run(&["classify", s(&out), "--k-max", "1.5", "--tol", "1e-6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    let e = r["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["n"] == 4)
        .unwrap();
    assert_eq!(e["m"], 9);
    assert_eq!(e["sharp_degenerate"], true);
    assert_eq!(e["maximally_degenerate"], true);
}

#[test]
fn construct_classify_round_trip_matrix() {
    let dir = TempDir::new().unwrap();
    for (n, d, b) in [
        (2, 0, 0),
        (0, 2, 0),
        (1, 1, 0),
        (0, 0, 2),
        (1, 2, 1),
        (3, 0, 1),
        (0, 3, 3),
    ] {
        let out = dir.path().join(format!("g{n}{d}{b}.json"));
        let args = [n.to_string(), d.to_string(), b.to_string()];
        let o = run(&[
            "construct",
            "--neumann",
            &args[0],
            "--dirichlet",
            &args[1],
            "--beta",
            &args[2],
            "-o",
            s(&out),
        ]);
        assert_eq!(code(&o), 0);
        let o = run(&["classify", s(&out), "--count", "30"]);
        assert_eq!(
            code(&o),
            0,
            "({n},{d},{b}) {}",
            String::from_utf8_lossy(&o.stdout)
        );
    }
    assert_eq!(
        code(&run(&[
            "construct",
            "--neumann",
            "1",
            "--dirichlet",
            "0",
            "--beta",
            "0"
        ])),
        2
    );
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "db.json", DUMBBELL);
    let a = run(&["spectrum", s(&g), "--k-max", "9", "--threads", "1"]);
    let b = run(&["spectrum", s(&g), "--k-max", "9", "--threads", "4"]);
    let c = bin()
        .args(["spectrum", s(&g), "--k-max", "9"])
        .env("LASSOSPEC_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn spectrum_csv_columns() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "loop.json", LOOP);
    let o = run(&["spectrum", s(&g), "--k-max", "2.5", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "first_index,lambda,multiplicity");
    assert_eq!(lines.len(), 4);
    assert!(lines[2].starts_with("2,") && lines[2].ends_with(",2"));
    assert_eq!(code(&run(&["analyze", s(&g), "--format", "csv"])), 2);
}

#[test]
fn spectrum_report_to_file() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "nn.json", NN);
    let out = dir.path().join("s.json");
    let o = run(&["spectrum", s(&g), "--count", "4", "-o", s(&out)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["entries"][2]["first_index"], 3);
    assert!((v["entries"][2]["lambda"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn join_and_attach_with_verification() {
    let dir = TempDir::new().unwrap();
    let dd = write(&dir, "dd.json", DD);
    let joined = dir.path().join("joined.json");
    let o = run(&[
        "join",
        s(&dd),
        s(&dd),
        "--vertex",
        "b",
        "--vertex",
        "a",
        "--lambda",
        "1",
        "--verify",
        "-o",
        s(&joined),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["prediction"]["first_index"], 2);
    assert_eq!(r["verification"]["ok"], true);
    assert!(joined.exists());

    let nn = write(&dir, "nn.json", NN);
    let o = run(&[
        "attach-loop",
        s(&nn),
        "--vertex",
        "b",
        "--lambda",
        "1",
        "--harmonic",
        "2",
        "--verify",
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    assert_eq!(r["prediction"]["first_index"], 5);
    assert_eq!(r["prediction"]["multiplicity"], 2);
    assert_eq!(r["prediction"]["profile"]["betti"], 1);

    assert_eq!(
        code(&run(&[
            "attach-loop",
            s(&dd),
            "--vertex",
            "a",
            "--lambda",
            "1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "join",
            s(&dd),
            s(&dd),
            "--vertex",
            "a",
            "--lambda",
            "1"
        ])),
        2
    );
    // 2 is not an eigenvalue of the DD interval of length π.
    assert_eq!(
        code(&run(&[
            "join",
            s(&dd),
            s(&dd),
            "--vertex",
            "a",
            "--vertex",
            "a",
            "--lambda",
            "2"
        ])),
        3
    );
}

#[test]
fn perturb_reports_sandwich() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "db.json", DUMBBELL);
    let o = run(&[
        "perturb",
        s(&g),
        "--edge",
        "la",
        "--rho",
        "0.5",
        "--index",
        "3",
    ]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    assert_eq!(r["sandwich_ok"], true);
    assert_eq!(
        code(&run(&[
            "perturb",
            s(&g),
            "--edge",
            "zz",
            "--rho",
            "0.5",
            "--index",
            "3"
        ])),
        2
    );
}

#[test]
fn bounds_table() {
    let dir = TempDir::new().unwrap();
    let g = write(&dir, "nn.json", NN);
    let o = run(&["bounds", s(&g), "--count", "5"]);
    assert_eq!(code(&o), 0);
    let r = stdout_json(&o);
    let t = r["table"].as_array().unwrap();
    assert!(t[0]["lower"].is_null());
    assert_eq!(t[0]["upper"].as_f64(), Some(0.0));
    assert!((t[2]["lower"].as_f64().unwrap() - 4.0).abs() < 1e-12);
}
