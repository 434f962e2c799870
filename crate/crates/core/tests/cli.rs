use std::process::{Command, Output};

use serde_json::Value;

fn biconn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biconn")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn field(v: &Value, key: &str) -> f64 {
    v[key].as_str().unwrap().parse().unwrap()
}

#[test]
fn exact_count_of_small_case() {
    let v = json(&biconn(&["count", "exact", "--n", "4", "--m", "4", "--predicate", "two-connected"]));
    assert_eq!(v["count"], "3");
    let v = json(&biconn(&["count", "exact", "--n", "4", "--m", "5", "--predicate", "two_connected"]));
    assert_eq!(v["count"], "6");
}

#[test]
fn params_report_the_root() {
    let v = json(&biconn(&["params", "--n", "1000", "--m", "2000"]));
    let lambda = field(&v, "lambda_c");
    assert!(lambda > 3.58 && lambda < 3.60, "{lambda}");
    assert_eq!(field(&v, "c"), 4.0);
}

#[test]
fn main_and_b_regimes_agree() {
    let main = json(&biconn(&["count", "asymptotic", "--n", "1000", "--m", "2000", "--regime", "main"]));
    let b = json(&biconn(&["count", "asymptotic", "--n", "1000", "--m", "2000", "--regime", "b"]));
    assert_eq!(main["ln_count"], b["ln_count"]);
}

#[test]
fn degree_file_commands() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    std::fs::write(&path, "3 3 2 2\n").unwrap();
    let p = path.to_str().unwrap();

    let v = json(&biconn(&["count", "exact-degseq", "--file", p, "--predicate", "two-connected"]));
    // the only simple graph is K4 minus an edge, hit by 3! 3! 2! 2! of 9!! matchings
    assert_eq!(v["count"], "1");
    assert_eq!(v["probability"], "16/105");

    let v = json(&biconn(&["sample", "kernel", "--file", p, "--seed", "3"]));
    let lines = v["edge_list"].as_str().unwrap().lines().count();
    assert_eq!(lines, 6);
}

#[test]
fn output_does_not_depend_on_threads() {
    let args = ["estimate", "--n", "400", "--m", "560", "--event", "2cs,simple", "--samples", "300", "--seed", "9"];
    let one = biconn(&[&["--threads", "1"][..], &args[..]].concat());
    let four = biconn(&[&["--threads", "4"][..], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn table_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.json");
    std::fs::write(
        &sweep,
        r#"{"variable": "c", "values": [3, 4, 5], "fixed": {"n": 10000}, "output": "t.csv"}"#,
    )
    .unwrap();
    let out = biconn(&["table", "--sweep", sweep.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("t.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("n,m,c,lambda_c"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(biconn(&["params", "--n", "10"]).status.code(), Some(2));
    let out = biconn(&["params", "--n", "10", "--m", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "domain");
    let out = biconn(&["count", "exact", "--n", "12", "--m", "14"]);
    assert_eq!(out.status.code(), Some(1));
    let out = biconn(&["estimate", "--model", "pairing", "--n", "50", "--m", "80", "--event", "2cs"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn xyz_reports_its_mode() {
    let v = json(&biconn(&["xyz", "--mode", "section8", "--n", "200", "--m", "300", "--samples", "64", "--seed", "2"]));
    assert_eq!(v["mode"], "section8");
    let mean: f64 = v["summary"]["x_plus_y_plus_z"]["value"].as_str().unwrap().parse().unwrap();
    assert!(mean > 0.0);
}
