use std::process::{Command, Output};

use serde_json::Value;

fn record_walk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_record-walk"))
        .args(args)
        .env_remove("RECORD_WALK_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Manifest JSON and the data lines after it.
fn split_csv(text: &str) -> (Value, Vec<String>) {
    let mut lines = text.lines();
    let head = lines.next().unwrap();
    let manifest = serde_json::from_str(head.strip_prefix("# manifest: ").expect("manifest preamble")).unwrap();
    (manifest, lines.map(str::to_owned).collect())
}

fn column(lines: &[String], name: &str) -> Vec<Option<f64>> {
    let idx = lines[0].split(',').position(|c| c == name).expect("column present");
    lines[1..]
        .iter()
        .map(|l| l.split(',').nth(idx).unwrap().parse().ok())
        .collect()
}

#[test]
fn theory_symmetric_mean_records() {
    let (manifest, lines) = split_csv(&stdout(&record_walk(&[
        "theory", "--quantity", "mean-records", "--regime", "symmetric", "--n-max", "2",
    ])));
    assert_eq!(lines, ["n,value", "0,1", "1,1.5", "2,1.875"]);
    assert_eq!(manifest["subcommand"], "theory");
    assert_eq!(manifest["params"]["n_max"], 2);
    assert!(manifest["started"].is_string() && manifest["finished"].is_string());
}

#[test]
fn theory_large_drift_asymptotic_rate() {
    let (_, lines) = split_csv(&stdout(&record_walk(&[
        "theory", "--quantity", "asymptotic-rate", "--c", "2", "--sigma", "1",
    ])));
    let v = column(&lines, "value")[0].unwrap();
    assert!((v - 0.9730).abs() < 5e-5, "{v}");
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["theory", "--quantity", "survival", "--regime", "sideways"][..],
        &["simulate", "--reals", "0", "--emit", "record-rate"],
        &["theory", "--quantity", "survival", "--regime", "symmetric", "--c", "0.1"],
        &["theory", "--quantity", "record-rate", "--sigma", "-1"],
        &["series", "--order", "3", "--emit", "pi"],
        &["analyze", "--emit", "drift-summary"],
    ] {
        let out = record_walk(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn series_survival_and_first_record_distribution() {
    let q = stdout(&record_walk(&["series", "--c", "0", "--sigma", "1", "--order", "2", "--emit", "q"]));
    let (_, q_lines) = split_csv(&q);
    assert_eq!(q_lines, ["n,value", "0,1", "1,0.5", "2,0.375"]);

    let pi = stdout(&record_walk(&["series", "--c", "0.3", "--order", "40", "--emit", "pi", "--m", "1"]));
    let q = stdout(&record_walk(&["series", "--c", "0.3", "--order", "40", "--emit", "q", "--side", "negative"]));
    assert_eq!(split_csv(&pi).1, split_csv(&q).1);

    let (_, single) = split_csv(&stdout(&record_walk(&["series", "--order", "0", "--emit", "mean"])));
    assert_eq!(single, ["n,value", "0,1"]);
}

#[test]
fn simulate_is_deterministic_for_a_seed() {
    let args = ["simulate", "--c", "0.2", "--steps", "30", "--reals", "5000", "--seed", "9", "--emit", "mean-records"];
    let a = stdout(&record_walk(&args));
    let b = stdout(&record_walk(&args));
    assert_eq!(split_csv(&a).1, split_csv(&b).1);
    assert_eq!(split_csv(&a).0["seed"], 9);

    let threaded = Command::new(env!("CARGO_BIN_EXE_record-walk"))
        .args(args)
        .env("RECORD_WALK_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(split_csv(&stdout(&threaded)).1, split_csv(&a).1);
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_record-walk"))
        .args(["theory", "--quantity", "crossover", "--c", "0.1"])
        .env("RECORD_WALK_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn symmetric_record_rate_matches_closed_form_at_every_step() {
    let text = stdout(&record_walk(&[
        "simulate", "--c", "0", "--steps", "100", "--reals", "100000", "--emit", "record-rate",
    ]));
    let (_, lines) = split_csv(&text);
    let est = column(&lines, "estimate");
    let se = column(&lines, "std_error");
    let exact = column(&lines, "analytic");
    let series = column(&lines, "series");
    for n in 0..=100 {
        let (e, s, a) = (est[n].unwrap(), se[n].unwrap(), exact[n].unwrap());
        assert!((e - a).abs() <= 3.0 * s.max(1e-12), "n={n}: {e} +/- {s} vs {a}");
        assert!((series[n].unwrap() - a).abs() < 1e-12);
    }
}

#[test]
fn uniform_runs_leave_series_column_empty() {
    let (_, lines) = split_csv(&stdout(&record_walk(&[
        "simulate", "--dist", "uniform", "--c", "0.05", "--steps", "5", "--reals", "1000", "--emit", "record-rate",
    ])));
    assert!(column(&lines, "series").iter().all(Option::is_none));
    assert!(column(&lines, "analytic").iter().all(Option::is_some));
}

#[test]
fn asymptotic_rate_row_carries_references() {
    let text = stdout(&record_walk(&[
        "simulate", "--c", "1", "--steps", "200", "--reals", "20000", "--emit", "asymptotic-rate", "--tail", "100",
    ]));
    let (manifest, lines) = split_csv(&text);
    let est = column(&lines, "estimate")[0].unwrap();
    let se = column(&lines, "std_error")[0].unwrap();
    let limit = column(&lines, "series_limit")[0].unwrap();
    assert!((est - limit).abs() <= 3.0 * se, "{est} +/- {se} vs {limit}");
    assert_eq!(column(&lines, "n_tail")[0], Some(100.0));
    assert_eq!(manifest["results"]["estimate"], est);
}

#[test]
fn scaling_rows_have_matching_x() {
    let (_, lines) = split_csv(&stdout(&record_walk(&[
        "simulate", "--c", "0.1", "--steps", "50", "--reals", "2000", "--emit", "scaling",
    ])));
    let x = column(&lines, "x");
    assert_eq!(x.len(), 50);
    assert!((x[49].unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn synthetic_drift_summary_recovers_mean() {
    let (manifest, lines) = split_csv(&stdout(&record_walk(&[
        "analyze", "--synthetic", "366", "5000", "0.025", "--seed", "42", "--emit", "drift-summary",
    ])));
    let mean = column(&lines, "mean_c_over_sigma")[0].unwrap();
    let se = column(&lines, "std_error")[0].unwrap();
    assert!((mean - 0.025).abs() <= 3.0 * se, "{mean} +/- {se}");
    assert_eq!(manifest["seed"], 42);
}

#[test]
fn windowed_output_matches_report_shape() {
    let (manifest, lines) = split_csv(&stdout(&record_walk(&[
        "analyze", "--synthetic", "20", "1000", "0", "--emit", "windowed", "--window-len", "100",
    ])));
    assert_eq!(lines.len(), 101);
    assert_eq!(manifest["results"]["n_sequences"], 200);
    let upper = column(&lines, "mean_upper");
    assert_eq!(upper[0], Some(1.0));
    assert_eq!(upper[99].unwrap(), manifest["results"]["final_upper"].as_f64().unwrap());
}

#[test]
fn missing_input_file_is_a_runtime_error() {
    let out = record_walk(&["analyze", "--input", "/nonexistent/prices.csv", "--emit", "raw-records"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/prices.csv"));
}

#[test]
fn reads_price_csv_and_writes_json_file() {
    let dir = std::env::temp_dir().join(format!("record-walk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("prices.csv");
    std::fs::write(
        &input,
        "ticker,date,close\nAAA,2020-01-02,10\nAAA,2020-01-03,11\nAAA,2020-01-06,10.5\nAAA,2020-01-07,12\n\
         BBB,2020-01-02,5\nBBB,2020-01-03,4\nBBB,2020-01-06,4.5\nBBB,2020-01-07,3\n",
    )
    .unwrap();
    let output = dir.join("out.json");
    let out = record_walk(&[
        "analyze", "--input", input.to_str().unwrap(), "--emit", "raw-records", "--json", "--output", output.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    // AAA: records at 0, 1, 3; BBB: upper only at 0
    assert_eq!(doc["rows"][3]["mean_upper"], 2.0);
    assert_eq!(doc["rows"][3]["mean_lower"], 2.0);
    assert_eq!(doc["manifest"]["results"]["n_tickers"], 2);
    std::fs::remove_dir_all(dir).unwrap();
}
