use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (bool, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_liemoments")).args(args).output().unwrap();
    (out.status.success(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> Value {
    let (ok, out, err) = run(args);
    assert!(ok, "{args:?}: {err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn info_reports_center() {
    let v = json(&["info", "E6"]);
    assert_eq!(v["rank"], 6);
    assert_eq!(v["dim"], 78);
    assert_eq!(v["fundamental_group_order"], 3);
}

#[test]
fn weights_of_adjoint() {
    let v = json(&["weights", "A2", "1,1"]);
    assert_eq!(v["dimension"], "8");
    assert_eq!(v["weights"].as_array().unwrap().len(), 7);
    let (ok, csv, _) = run(&["weights", "A1", "2", "--format", "csv"]);
    assert!(ok);
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn single_evaluations_agree() {
    let base = ["--group", "A1", "--lambda", "1", "--a", "1", "--b", "1", "--N", "6"];
    let exact = json(&[&["exact"][..], &base].concat());
    assert_eq!(exact["exact"], "132");
    let quad = json(&[&["quad"][..], &base].concat());
    assert!((quad["quad"].as_f64().unwrap() - 132.0).abs() < 1e-8);
    let asym = json(&[&["asym"][..], &base].concat());
    let v = asym["value"].as_f64().unwrap();
    assert!((v / 132.0 - 1.0).abs() < 0.5);
}

#[test]
fn class_function_and_grid_flags() {
    let v = json(&["exact", "--group", "A1", "--lambda", "1", "--a", "1", "--N", "2", "--f", "2:1;0:1"]);
    assert_eq!(v["exact"], "2");
    let (ok, _, err) = run(&["quad", "--group", "A1", "--lambda", "1", "--a", "1", "--N", "4", "--grid", "3"]);
    assert!(!ok);
    assert!(err.contains("grid too small"));
    let v = json(&["quad", "--group", "A1", "--lambda", "1", "--a", "1", "--N", "4", "--grid", "64"]);
    assert!((v["quad"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn hypothesis_violation_is_an_error() {
    let (ok, _, err) = run(&["asym", "--group", "A1", "--lambda", "1", "--a", "0,1", "--N", "4"]);
    assert!(!ok);
    assert!(err.contains("gcd"));
}

#[test]
fn converge_writes_report() {
    let dir = std::env::temp_dir().join(format!("liemoments-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("study.toml");
    std::fs::write(
        &cfg,
        "group = \"A1\"\nlambda = \"1\"\na = \"1\"\nn_range = [2, 20, 2]\npaths = [\"exact\", \"quad\", \"asymptotic\"]\n",
    )
    .unwrap();
    let out = dir.join("report.csv");
    let (ok, _, err) = run(&["converge", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert!(ok, "{err}");
    let first = std::fs::read_to_string(&out).unwrap();
    assert_eq!(first.lines().count(), 11);
    assert!(first.lines().nth(1).unwrap().starts_with("2,1,1,"));
    let (ok, _, _) = run(&["converge", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--format", "csv"]);
    assert!(ok);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let (ok, json_out, _) = run(&["converge", cfg.to_str().unwrap()]);
    assert!(ok);
    let v: Value = serde_json::from_str(&json_out).unwrap();
    assert!(v["fitted_exponent"].as_f64().unwrap() <= -0.5);
    std::fs::remove_dir_all(&dir).unwrap();
}
