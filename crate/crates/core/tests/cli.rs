use std::process::{Command, Output};

use serde_json::Value;

fn snm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = snm(&all);
    serde_json::from_str(&stdout(&o)).expect("valid json")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .take_while(|l| !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn csv_field(text: &str, col: &str) -> String {
    let rows = csv_rows(text);
    let i = rows[0].iter().position(|h| h == col).expect("column");
    rows[1][i].clone()
}

#[test]
fn invert_examples() {
    let o = snm(&["invert", "gamma", "--a", "2", "--p", "0.5", "--format", "csv"]);
    assert!(o.status.success());
    let root: f64 = csv_field(&stdout(&o), "root").parse().unwrap();
    assert!((root - 1.6783469900166605).abs() <= 1e-15, "{root}");

    let v = json(&["invert", "beta", "--a", "1", "--b", "1", "--p", "0.37"]);
    assert!((v["root"].as_f64().unwrap() - 0.37).abs() <= 1e-16);

    let v = json(&["invert", "elliptic", "--m", "0", "--p", "0.3"]);
    assert_eq!(v["root"].as_f64().unwrap(), 0.47123889803846897);
}

#[test]
fn json_has_the_documented_keys() {
    let v = json(&["invert", "gamma", "--a", "5", "--p", "0.2"]);
    for key in ["root", "iterations", "converged", "reason", "trace"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["trace"].as_array().unwrap().len() as u64, v["iterations"].as_u64().unwrap());
    assert_eq!(v["converged"], Value::Bool(true));
}

#[test]
fn trace_rows_match_iterations() {
    for args in [
        vec!["invert", "gamma", "--a", "30", "--p", "0.9"],
        vec!["invert", "beta", "--a", "0.5", "--b", "3", "--p", "0.2"],
        vec!["invert", "elliptic", "--m", "0.7", "--p", "0.4", "--method", "newton"],
    ] {
        let mut a = args.clone();
        a.extend(["--trace", "--format", "csv"]);
        let text = stdout(&snm(&a));
        let iterations: usize = csv_field(&text, "iterations").parse().unwrap();
        let trace = text.split("\n\n").nth(1).expect("trace section");
        assert_eq!(trace.lines().count(), iterations + 1, "{args:?}");

        let mut a = args.clone();
        a.push("--trace");
        let text = stdout(&snm(&a));
        let after = text.split_once("fallback\n").expect("trace header").1;
        assert_eq!(after.lines().count(), iterations, "{args:?}");
    }
}

#[test]
fn formats_agree() {
    let args = ["invert", "beta", "--a", "2.5", "--b", "7", "--p", "0.3"];
    let table = stdout(&snm(&args));
    let table_root: f64 = table.lines().next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    let mut a = args.to_vec();
    a.extend(["--format", "csv"]);
    let csv_root: f64 = csv_field(&stdout(&snm(&a)), "root").parse().unwrap();
    let json_root = json(&args)["root"].as_f64().unwrap();
    assert_eq!(csv_root, json_root);
    assert!((table_root - csv_root).abs() <= 5e-12 * csv_root.abs());
    assert_eq!(format!("{:.11e}", table_root), format!("{:.11e}", csv_root));
}

#[test]
fn exit_codes() {
    assert_eq!(snm(&["invert", "gamma", "--a", "3", "--p", "0.4"]).status.code(), Some(0));
    // one iteration is not enough to converge from a + 1
    assert_eq!(
        snm(&["invert", "gamma", "--a", "5", "--p", "0.01", "--max-iter", "1"]).status.code(),
        Some(1)
    );
    // outside the principal branch around the root the step cannot reach it
    assert_eq!(snm(&["invert", "tan", "--c", "2", "--x0", "-1"]).status.code(), Some(1));
    assert_eq!(snm(&["invert", "gamma", "--p", "0.4"]).status.code(), Some(2));
    assert_eq!(snm(&["invert", "gamma", "--a", "-1", "--p", "0.4"]).status.code(), Some(2));
    assert_eq!(snm(&["invert", "beta", "--a", "2", "--b", "2", "--p", "0"]).status.code(), Some(2));
    assert_eq!(snm(&["invert", "elliptic", "--m", "1.5", "--p", "0.4"]).status.code(), Some(2));
    assert_eq!(snm(&["invert", "gamma", "--a", "2", "--p", "0.4", "--format", "xml"]).status.code(), Some(2));
    assert_eq!(snm(&["invert", "gamma", "--a", "2", "--p", "0.4", "--max-iter", "0"]).status.code(), Some(2));
    assert_eq!(snm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(snm(&["osculate", "tan", "--c", "1", "--range", "1:0"]).status.code(), Some(2));
    let failed = snm(&["invert", "gamma", "--a", "5", "--p", "0.01", "--max-iter", "1", "--format", "json"]);
    let v: Value = serde_json::from_slice(&failed.stdout).unwrap();
    assert_eq!(v["reason"], "MaxIter");
}

#[test]
fn oracle_flag_is_hidden() {
    let help = stdout(&snm(&["invert", "--help"]));
    assert!(!help.contains("--oracle"));
    let v = json(&["invert", "gamma", "--a", "2", "--p", "0.5", "--oracle"]);
    assert!((v["oracle"].as_f64().unwrap() - v["root"].as_f64().unwrap()).abs() <= 1e-15);
}

fn compare(args: &[&str]) -> Vec<Value> {
    json(args)["rows"].as_array().unwrap().clone()
}

fn iterations(rows: &[Value], method: &str) -> u64 {
    rows.iter().find(|r| r["method"] == method).unwrap()["iterations"].as_u64().unwrap()
}

#[test]
fn compare_orders_methods() {
    let rows = compare(&["compare", "gamma", "--a", "5", "--p", "0.5"]);
    assert_eq!(rows.len(), 3);
    let (s, h, n) = (iterations(&rows, "snm"), iterations(&rows, "halley"), iterations(&rows, "newton"));
    assert!(s <= h && h <= n, "{s} {h} {n}");
    for r in &rows {
        assert_eq!(r["converged"], true);
        let errors = r["errors"].as_array().unwrap();
        assert_eq!(errors.len() as u64, r["iterations"].as_u64().unwrap() + 1);
    }
}

#[test]
fn compare_exact_and_elliptic_cases() {
    let rows = compare(&["compare", "gamma", "--a", "1", "--p", "0.3", "--methods", "snm"]);
    assert_eq!(rows.len(), 1);
    assert_eq!(iterations(&rows, "snm"), 1);

    let rows = compare(&["compare", "elliptic", "--m", "0.6", "--p", "0.5", "--methods", "snm,halley"]);
    assert_eq!(rows.len(), 2);
    let snm_row = rows.iter().find(|r| r["method"] == "snm").unwrap();
    assert_eq!(snm_row["iterations"], 2);
    let last = snm_row["errors"].as_array().unwrap().last().unwrap().as_f64().unwrap();
    assert!(last <= 1e-14);
}

#[test]
fn compare_csv_columns() {
    let text = stdout(&snm(&["compare", "gamma", "--a", "5", "--p", "0.5", "--format", "csv"]));
    let rows = csv_rows(&text);
    assert_eq!(&rows[0][..6], &["method", "iterations", "converged", "reason", "root", "residual"]);
    assert_eq!(rows.len(), 4);
    for r in &rows[1..] {
        assert_eq!(r.len(), rows[0].len());
    }
}

fn osculate(args: &[&str]) -> Vec<Value> {
    json(args)["samples"].as_array().unwrap().clone()
}

#[test]
fn osculate_gamma_snm_curve_is_closest() {
    let samples = osculate(&[
        "osculate", "gamma", "--a", "30", "--p", "0.5", "--x0", "31", "--range", "15:50", "--samples", "200",
    ]);
    assert_eq!(samples.len(), 200);
    let mut err = [0.0f64; 3];
    for s in &samples {
        let f = s["function"].as_f64().unwrap();
        for (k, c) in ["snm", "halley", "newton"].iter().enumerate() {
            if let Some(v) = s[*c].as_f64() {
                err[k] += (v - f).abs();
            } else {
                err[k] = f64::INFINITY;
            }
        }
    }
    assert!(err[0] < err[1] && err[0] < err[2], "{err:?}");
    let at = samples.iter().find(|s| s["x"].as_f64().unwrap() >= 31.0).unwrap();
    assert!(at["function"].as_f64().unwrap() > 0.5 && at["function"].as_f64().unwrap() < 0.6);
}

#[test]
fn osculate_tan_is_exact() {
    for x0 in ["-0.4", "0", "0.3"] {
        let samples = osculate(&[
            "osculate", "tan", "--c", "0.5", "--x0", x0, "--range", "-1.1:1.1", "--samples", "57",
        ]);
        for s in &samples {
            let f = s["function"].as_f64().unwrap();
            let y = s["snm"].as_f64().unwrap();
            assert!((y - f).abs() <= 1e-12 * f.abs().max(1.0), "{x0} {s}");
        }
    }
}

#[test]
fn osculate_newton_is_tangent() {
    let samples = osculate(&[
        "osculate", "gamma", "--a", "4", "--p", "0.3", "--x0", "5", "--range", "4.99:5.01", "--samples", "3",
        "--curves", "function,newton",
    ]);
    let f: Vec<f64> = samples.iter().map(|s| s["function"].as_f64().unwrap()).collect();
    let n: Vec<f64> = samples.iter().map(|s| s["newton"].as_f64().unwrap()).collect();
    assert!((f[1] - n[1]).abs() <= 1e-12);
    let slope_f = (f[2] - f[0]) / 0.02;
    let slope_n = (n[2] - n[0]) / 0.02;
    assert!((slope_f - slope_n).abs() <= 1e-5);
    assert!(samples[0].get("snm").is_none());
}

#[test]
fn osculate_poles_are_empty_fields() {
    // the SNM curve for tan about 0.3 leaves the principal branch below -1.27
    let text = stdout(&snm(&[
        "osculate", "tan", "--c", "0.5", "--x0", "0.3", "--range", "-1.5:1.5", "--samples", "4", "--format", "csv",
    ]));
    let rows = csv_rows(&text);
    assert_eq!(rows[0], ["x", "function", "snm", "halley", "newton"]);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[1][2], "");
    assert!(rows[2][2].parse::<f64>().is_ok());
}
