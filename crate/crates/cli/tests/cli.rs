use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adiasearch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("valid json")
}

/// Lines that are neither comments nor the header.
fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn header(csv: &str) -> &str {
    csv.lines().find(|l| !l.starts_with('#')).unwrap()
}

#[test]
fn exit_codes_distinguish_failure_classes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args).status.code().unwrap();
    assert_eq!(code(&["gap-curve", "--n", "1"]), 1);
    assert_eq!(code(&["gap-curve", "--n", "nan"]), 1);
    assert_eq!(code(&["lowerbound", "--n", "65"]), 1);
    assert_eq!(code(&["lowerbound", "--n", "4.5"]), 1);
    assert_eq!(code(&["evolve", "--n", "4", "--epsilon", "0"]), 1);
    assert_eq!(code(&["schedule", "--n", "4", "--resolution", "10"]), 1);
    assert_eq!(code(&["no-such-command"]), 1);
    let missing = dir.path().join("missing").join("x.csv");
    assert_eq!(
        code(&["gap-curve", "--n", "4", "-o", missing.to_str().unwrap()]),
        2
    );
    assert_eq!(code(&["evolve", "--n", "4", "--epsilon", "1e-320"]), 3);
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn config_errors_are_reported_on_stderr() {
    let out = run(&["gap-curve", "--n", "1"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("n must be >= 2, got 1"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn gap_curve_csv_layout() {
    let csv = stdout(&["gap-curve", "--n", "100", "--points", "11"]);
    let first = csv.lines().next().unwrap();
    let config: Value = serde_json::from_str(first.strip_prefix("# config: ").unwrap()).unwrap();
    assert_eq!(config["command"], "gap-curve");
    assert_eq!(config["points"], 11);
    assert_eq!(header(&csv), "s,f,g,gap,e_minus,e_plus,matrix_element");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r.len() == 7));
    let mid: Vec<f64> = rows[5].iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid[0], 0.5);
    assert!((mid[3] - 0.1).abs() < 1e-12);
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
}

#[test]
fn format_follows_extension_unless_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let as_json = dir.path().join("curve.json");
    stdout(&[
        "gap-curve",
        "--n",
        "16",
        "--points",
        "5",
        "-o",
        as_json.to_str().unwrap(),
    ]);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&as_json).unwrap()).unwrap();
    assert_eq!(doc["config"]["format"], "json");

    let forced = dir.path().join("curve.json");
    let p = forced.to_str().unwrap();
    stdout(&[
        "gap-curve",
        "--n",
        "16",
        "--points",
        "5",
        "-o",
        p,
        "--format",
        "csv",
    ]);
    assert!(std::fs::read_to_string(Path::new(p))
        .unwrap()
        .starts_with("# config: "));

    let doc = json(&["schedule", "--n", "16"]);
    assert!(doc["knots"].is_array());
    let csv = stdout(&["schedule", "--n", "16", "--format", "csv"]);
    assert_eq!(header(&csv), "t,s");
}

#[test]
fn schedule_reports_constant_comparison_only_for_modified() {
    let modified = json(&["schedule", "--n", "1e6", "--schedule", "modified"]);
    let cmp = &modified["constant_comparison"];
    assert!(cmp["within_soft_band"].as_bool().unwrap());
    let eps_t = cmp["epsilon_times_total_time"].as_f64().unwrap();
    assert!((eps_t - 2.565).abs() < 0.01, "{eps_t}");

    let linear = json(&["schedule", "--n", "100"]);
    assert!(linear.get("constant_comparison").is_none_or(Value::is_null));
    let t = linear["total_time"].as_f64().unwrap();
    assert!((t - 99f64.sqrt() / 0.1).abs() / t < 1e-4);
    let knots = linear["knots"].as_array().unwrap();
    assert_eq!(knots[0], serde_json::json!([0.0, 0.0]));
    assert_eq!(knots.last().unwrap()[1], 1.0);
}

#[test]
fn evolve_report_fields() {
    let doc = json(&["evolve", "--n", "4", "--steps", "2000"]);
    assert!((doc["initial_fidelity"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!(doc["fidelity"].as_f64().unwrap() > 0.9);
    assert_eq!(doc["energy_shifted"]["max_ground_energy"], 0.0);
    assert!(doc["lower_bound"]["satisfied"].as_bool().unwrap());
    assert_eq!(doc["config"]["steps"], 2000);

    let csv = stdout(&["evolve", "--n", "4", "--steps", "200", "--format", "csv"]);
    assert_eq!(data_rows(&csv).len(), 1);
}

#[test]
fn sweep_rows_are_sorted_by_schedule_then_n() {
    let csv = stdout(&["sweep", "--n-list", "1e4,100,1e3", "--steps", "500"]);
    assert_eq!(
        header(&csv),
        "n,schedule,total_time,min_gap,max_e_minus,fidelity"
    );
    let keys: Vec<(String, f64)> = data_rows(&csv)
        .into_iter()
        .map(|r| (r[1].clone(), r[0].parse().unwrap()))
        .collect();
    assert_eq!(keys.len(), 6);
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    assert_eq!(keys, sorted);

    let only = stdout(&[
        "sweep",
        "--n-list",
        "100",
        "--schedule",
        "modified",
        "--steps",
        "500",
    ]);
    assert_eq!(data_rows(&only).len(), 1);
}

#[test]
fn lowerbound_reports_margins_and_bounds() {
    let doc = json(&[
        "lowerbound",
        "--n",
        "8",
        "--steps",
        "5000",
        "--samples",
        "50",
    ]);
    let margins = doc["rate_margins"].as_array().unwrap();
    assert!(!margins.is_empty());
    assert!(margins.iter().all(|m| m["satisfied"].as_bool().unwrap()));
    assert!(doc["rate_inequality"]["satisfied"].as_bool().unwrap());
    assert!(doc["integrated_bound"]["satisfied"].as_bool().unwrap());
    assert!(doc["theorem_bound"]["closes"].as_bool().unwrap());
    assert_eq!(doc["final_fidelities"].as_array().unwrap().len(), 8);
    assert_eq!(doc["overlap_sum_trajectory"].as_array().unwrap().len(), 50);

    let csv = stdout(&[
        "lowerbound",
        "--n",
        "8",
        "--steps",
        "2000",
        "--samples",
        "20",
        "--format",
        "csv",
    ]);
    assert_eq!(header(&csv), "t,s,overlap_sum,rate,bound");
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 20);
    assert_eq!(rows[0][3], "");
}
