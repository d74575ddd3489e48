use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, contents).unwrap();
        p
    }
}

fn alphabb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_alphabb")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_ok(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

const CUBIC: &str = "n=2\n5*x1*x2^2 + (100/3)*x1^3 - (7/6)*x2^3\n";
const BOX12: &str = r#"{"box": [[1, 2], [1, 2]]}"#;
const CUBIC_HESSIAN: &str = r#"{"n": 2, "lower": [[200, 10], [10, -4]], "upper": [[400, 20], [20, 13]]}"#;
const OSCIL: &str = r#"{"n": 3, "h": [[8, -1, -6], [-1, -2, 0], [-6, 0, 6]]}"#;

#[test]
fn hessian_of_example_objective() {
    let ws = Workspace::new();
    let e = ws.file("f.txt", CUBIC);
    let b = ws.file("box.json", BOX12);
    let v = json_ok(&alphabb(&["hessian", path(&e), "--box", path(&b)]));
    assert_eq!(v["n"], 2);
    assert_eq!(v["lower"], serde_json::json!([[200.0, 10.0], [10.0, -4.0]]));
    assert_eq!(v["upper"], serde_json::json!([[400.0, 20.0], [20.0, 13.0]]));
}

#[test]
fn pointmat_and_alpha_round_trip() {
    let ws = Workspace::new();
    let im = ws.file("im.json", CUBIC_HESSIAN);
    let b = ws.file("box.json", BOX12);
    let pm = json_ok(&alphabb(&["pointmat", path(&im)]));
    assert_eq!(pm["h"], serde_json::json!([[200.0, -20.0], [-20.0, -4.0]]));

    let v = json_ok(&alphabb(&["alpha", path(&im), "--d", "radius", "--box", path(&b)]));
    assert_eq!(floats(&v["alpha"]), vec![0.0, 12.0]);

    let pm_file = ws.file("pm.json", &pm.to_string());
    let d = ws.file("d.json", "[0.1, 1]");
    let v = json_ok(&alphabb(&["alpha", path(&pm_file), "--d", &format!("@{}", path(&d))]));
    let h = alphabb::PointMatrix64::from_rows(vec![vec![200.0, -20.0], vec![-20.0, -4.0]]).unwrap();
    assert_eq!(floats(&v["alpha"]), h.alpha(&[0.1, 1.0]).unwrap().values());
    assert_eq!(floats(&v["alpha"]), vec![0.0, 3.0]);
}

#[test]
fn alpha_is_scale_invariant() {
    let ws = Workspace::new();
    let m = ws.file("m.json", OSCIL);
    let d1 = ws.file("d1.json", "[0.3, 0.7, 1.1]");
    let d2 = ws.file("d2.json", r#"{"d": [0.6, 1.4, 2.2]}"#);
    let a = json_ok(&alphabb(&["alpha", path(&m), "--d", &format!("@{}", path(&d1))]));
    let b = json_ok(&alphabb(&["alpha", path(&m), "--d", &format!("@{}", path(&d2))]));
    assert_eq!(a["alpha"], b["alpha"]);
}

#[test]
fn improve_set_heuristic_with_trace() {
    let ws = Workspace::new();
    let m = ws.file("m.json", OSCIL);
    let v = json_ok(&alphabb(&["improve", path(&m), "--method", "li2", "--trace"]));
    assert_eq!(floats(&v["d"]), vec![0.5, 1.0, 0.5]);
    assert_eq!(v["status"], "all_saturated");
    let trace = v["trace"].as_array().unwrap();
    assert_eq!(trace.len(), 1);
    assert_eq!(trace[0]["kind"], "subsystem_update");
    assert_eq!(trace[0]["index_or_set"], serde_json::json!([1, 3]));
    assert_eq!(trace[0]["deficit_objective_after"], 2.5);
}

#[test]
fn improve_row_heuristic_caps() {
    let ws = Workspace::new();
    let m = ws.file("m.json", OSCIL);
    let v = json_ok(&alphabb(&["improve", path(&m), "--method", "li1", "--max", "3"]));
    assert_eq!(v["status"], "iteration_cap");
    assert_eq!(v["iterations"], 3);
    assert!(v.get("trace").is_none());
}

#[test]
fn reducible_input_split_or_rejected() {
    let ws = Workspace::new();
    let m = ws.file(
        "m.json",
        r#"{"n": 3, "h": [[200, 0, -20], [0, -3, 0], [-20, 0, -4]]}"#,
    );
    let v = json_ok(&alphabb(&["improve", path(&m), "--method", "li2"]));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 2);
    assert_eq!(v["blocks"][0]["indices"], serde_json::json!([1, 3]));
    assert_eq!(floats(&v["d"]), vec![0.1, 1.0, 1.0]);

    let out = alphabb(&["improve", path(&m), "--method", "li2", "--strict-irreducible"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
}

#[test]
fn check_reports_conditions() {
    let ws = Workspace::new();
    let m = ws.file("m.json", OSCIL);
    let good = ws.file("good.json", "[0.5, 1, 0.5]");
    let v = json_ok(&alphabb(&["check", path(&m), "--d", &format!("@{}", path(&good))]));
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["blocks"][0]["report"]["i_star"], serde_json::json!([2]));

    let start = ws.file("start.json", "[1, 1, 1]");
    let v = json_ok(&alphabb(&["check", path(&m), "--d", &format!("@{}", path(&start))]));
    assert_eq!(v["all_pass"], false);
    let c1 = &v["blocks"][0]["report"]["c1_saturation"];
    assert_eq!(c1["pass"], false);
    assert_eq!(c1["worst_row"], 1);
    assert_eq!(c1["worst_value"], 1.0);
}

#[test]
fn oracle_finds_known_optimum() {
    let ws = Workspace::new();
    let m = ws.file("m.json", OSCIL);
    let v = json_ok(&alphabb(&["oracle", path(&m), "--grid", "0.01"]));
    assert!((v["deficit_objective"].as_f64().unwrap() - 2.5).abs() < 0.01);
    let big = ws.file(
        "big.json",
        r#"{"n": 5, "h": [[1,0,0,0,0],[0,1,0,0,0],[0,0,1,0,0],[0,0,0,1,0],[0,0,0,0,1]]}"#,
    );
    assert_eq!(alphabb(&["oracle", path(&big)]).status.code(), Some(1));
}

#[test]
fn conjecture_small_run() {
    let v = json_ok(&alphabb(&["conjecture", "--n", "3", "--trials", "5", "--seed", "42", "--grid", "0.02"]));
    assert_eq!(v["passes"], 5);
    assert_eq!(v["failures"], 0);
    assert_eq!(v["counterexamples"], serde_json::json!([]));
}

#[test]
fn underestimator_sampling() {
    let ws = Workspace::new();
    let e = ws.file("f.txt", CUBIC);
    let b = ws.file("box.json", BOX12);
    let d = ws.file("d.json", "[0.1, 1]");
    let v = json_ok(&alphabb(&[
        "underest",
        path(&e),
        "--box",
        path(&b),
        "--d",
        &format!("@{}", path(&d)),
        "--samples",
        "2000",
        "--seed",
        "3",
    ]));
    assert_eq!(floats(&v["alpha"]), vec![0.0, 3.0]);
    assert!(v["report"]["max_g_minus_f"].as_f64().unwrap() <= 0.0);
    assert_eq!(v["report"]["midpoint_separation"], 0.75);
}

#[test]
fn experiment_is_deterministic_across_workers() {
    let args = ["experiment", "--n", "5", "--family", "tridiagonal", "--trials", "300", "--seed", "9"];
    let one = alphabb(&[&["--jobs", "1"], &args[..]].concat());
    let four = alphabb(&[&["--jobs", "4"], &args[..]].concat());
    let v = json_ok(&one);
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(v["trials_requested"], 300);
    assert_eq!(
        v["trials_counted"].as_u64().unwrap() + v["skipped"].as_u64().unwrap(),
        300
    );
    let t = alphabb(&["experiment", "--n", "3,5", "--family", "general,tridiagonal", "--trials", "50", "--table"]);
    assert!(t.status.success());
    assert_eq!(String::from_utf8(t.stdout).unwrap().lines().count(), 3);
}

#[test]
fn input_errors_exit_one_without_output() {
    let ws = Workspace::new();
    let bad = ws.file("bad.json", "{ not json");
    let out = alphabb(&["pointmat", path(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());

    let wrong = ws.file("wrong.json", r#"{"n": 2, "x": []}"#);
    assert_eq!(alphabb(&["pointmat", path(&wrong)]).status.code(), Some(1));
    assert_eq!(alphabb(&["pointmat", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(alphabb(&["improve"]).status.code(), Some(1));

    let e = ws.file("f.txt", "n=2\nx1 + * x2\n");
    let b = ws.file("box.json", BOX12);
    assert_eq!(alphabb(&["hessian", path(&e), "--box", path(&b)]).status.code(), Some(1));
}

#[test]
fn structural_errors_exit_three() {
    let ws = Workspace::new();
    let asym = ws.file(
        "asym.json",
        r#"{"n": 2, "lower": [[0, 1], [2, 0]], "upper": [[1, 3], [3, 1]]}"#,
    );
    assert_eq!(alphabb(&["pointmat", path(&asym)]).status.code(), Some(3));

    let m = ws.file("m.json", OSCIL);
    let flat = ws.file("flat.json", r#"{"box": [[0, 1], [2, 2], [0, 1]]}"#);
    assert_eq!(
        alphabb(&["alpha", path(&m), "--box", path(&flat)]).status.code(),
        Some(3)
    );
    let zero = ws.file("zero.json", "[1, 0, 1]");
    assert_eq!(
        alphabb(&["alpha", path(&m), "--d", &format!("@{}", path(&zero))]).status.code(),
        Some(3)
    );
}

#[test]
fn outputs_parse_with_library_schemas() {
    let ws = Workspace::new();
    let e = ws.file("f.txt", CUBIC);
    let b = ws.file("box.json", BOX12);
    let out = alphabb(&["hessian", path(&e), "--box", path(&b)]);
    let im = alphabb::io::parse_matrix(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let im_file = ws.file("im.json", std::str::from_utf8(&out.stdout).unwrap());
    let out = alphabb(&["pointmat", path(&im_file)]);
    let pm = alphabb::io::parse_matrix(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(pm.point_matrix().unwrap(), im.point_matrix().unwrap());
}
