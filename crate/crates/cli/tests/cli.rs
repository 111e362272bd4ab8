use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn triwell(args: &[&str]) -> Output {
    triwell_with_config(args, None)
}

fn triwell_with_config(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_triwell"));
    cmd.args(args).env_remove("TRIWELL_CONFIG");
    if let Some(path) = config {
        cmd.env("TRIWELL_CONFIG", path);
    }
    cmd.output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_error(out: &Output) -> Value {
    let v: Value = serde_json::from_slice(&out.stderr).expect("stderr is a JSON error object");
    v["error"].clone()
}

fn f(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_string).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn analyze_reports_closed_form_action() {
    let out = triwell(&["analyze", "--alpha", "1", "--beta", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    let action = f(&doc["action"]["analytic"]);
    assert!((action - 4.0 * 2f64.sqrt()).abs() < 1e-14);
    for section in ["geometry", "action", "fluctuation", "prediction", "oracle", "comparison"] {
        assert!(doc[section].is_object(), "missing section {section}");
    }
    let parities: Vec<&str> =
        doc["oracle"]["levels"].as_array().unwrap().iter().map(|l| l["parity"].as_str().unwrap()).collect();
    assert_eq!(&parities[..3], ["even", "odd", "even"]);
}

#[test]
fn analyze_rejects_non_positive_alpha() {
    let out = triwell(&["analyze", "--alpha", "0", "--beta", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_error(&out);
    assert_eq!(e["field"], "alpha");
    assert!(e["message"].as_str().unwrap().contains("alpha must be positive"));
}

#[test]
fn analyze_below_regime_guard_exits_4() {
    let out = triwell(&["analyze", "--alpha", "1", "--beta", "0.8"]);
    assert_eq!(out.status.code(), Some(4));
    assert_eq!(stderr_error(&out)["kind"], "regime_guard");
}

#[test]
fn every_invalid_field_is_named() {
    let cases: [(&[&str], &str); 8] = [
        (&["analyze", "--beta", "-1"], "beta"),
        (&["analyze", "--T", "abc"], "T"),
        (&["analyze", "--x-max", "0"], "x_max"),
        (&["analyze", "--n-points", "12.5"], "n_points"),
        (&["analyze", "--n-points", "50"], "n_points"),
        (&["analyze", "--format", "xml"], "format"),
        (&["sweep", "--alpha-range", "1", "2", "x"], "alpha_range"),
        (&["analyze", "--unknown"], "unknown"),
    ];
    for (args, field) in cases {
        let out = triwell(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_error(&out)["field"], field, "{args:?}");
    }
}

#[test]
fn interval_outside_the_safe_window_is_a_config_error() {
    let out = triwell(&["analyze", "--T", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["field"], "T");
}

#[test]
fn analyze_refuses_a_range() {
    let out = triwell(&["analyze", "--beta-range", "1.6", "2.4", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["field"], "beta_range");
}

#[test]
fn beta_sweep_rows_in_order_with_falling_splitting() {
    let out = triwell(&["sweep", "--alpha", "1", "--beta-range", "1.6", "2.4", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    let (header, rows) = csv_rows(&text);
    assert_eq!(
        header,
        ["alpha", "beta", "S_E", "E_instanton", "dE_instanton", "E_oracle", "dE_oracle", "ratio_dE", "gap_ratio"]
    );
    assert_eq!(rows.len(), 5);
    let betas: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(betas.windows(2).all(|w| w[1] > w[0]));
    let de: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(de.windows(2).all(|w| w[1] < w[0]));
    // S_E = 2.32 at beta = 1.6: oracle columns are empty, not zero.
    assert!(rows[0][5..].iter().all(String::is_empty));
    assert!(rows[1][5..].iter().all(|c| !c.is_empty()));
}

#[test]
fn sweep_count_of_one_is_rejected() {
    let out = triwell(&["sweep", "--beta-range", "1.6", "2.4", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["field"], "beta_range");
}

#[test]
fn sweep_flushes_rows_before_a_failure() {
    // beta = 1.6 is below the regime guard and needs no grid; the override
    // is too narrow for beta = 2.
    let out = triwell(&["sweep", "--beta-range", "1.6", "2.0", "2", "--x-max", "4.4", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let (_, rows) = csv_rows(&String::from_utf8_lossy(&out.stdout));
    assert_eq!(rows.len(), 1);
    assert_eq!(stderr_error(&out)["field"], "x_max");
}

#[test]
fn csv_round_trip_is_idempotent() {
    let out = triwell(&["sweep", "--beta-range", "1.6", "2.4", "5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let (header, rows) = csv_rows(&text);
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(&header).unwrap();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .map(|c| if c.is_empty() { String::new() } else { format!("{:.16e}", c.parse::<f64>().unwrap()) })
            .collect();
        w.write_record(&cells).unwrap();
    }
    assert_eq!(String::from_utf8(w.into_inner().unwrap()).unwrap(), text);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["analyze", "--alpha", "0.8", "--beta", "2.1"][..],
        &["sweep", "--alpha-range", "0.5", "2", "4", "--beta", "2"][..],
        &["verify", "--quick"][..],
    ] {
        let a = triwell(args);
        let b = triwell(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "# point\nalpha = 2\nbeta = 1.8\n").unwrap();
    let doc = stdout_json(&triwell_with_config(&["analyze"], Some(&path)));
    assert_eq!(f(&doc["alpha"]), 2.0);
    assert_eq!(f(&doc["beta"]), 1.8);
    let doc = stdout_json(&triwell_with_config(&["analyze", "--beta", "2"], Some(&path)));
    assert_eq!(f(&doc["alpha"]), 2.0);
    assert_eq!(f(&doc["beta"]), 2.0);
}

#[test]
fn config_file_unknown_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    fs::write(&path, "alpha = 1\ngamma = 3\n").unwrap();
    let out = triwell_with_config(&["analyze"], Some(&path));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_error(&out)["field"], "gamma");
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = triwell(&["analyze", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(f(&doc["beta"]), 2.0);
}

#[test]
fn verify_passes_at_the_default_point() {
    let out = triwell(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let doc = stdout_json(&out);
    assert_eq!(doc["summary"]["failed"], 0);
    assert_eq!(doc["summary"]["skipped"], 0);
}

#[test]
fn quick_verify_skips_the_oracle() {
    let out = triwell(&["verify", "--quick", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["point", "module", "check", "status", "measured", "bound"]);
    let skipped: Vec<&str> = rows.iter().filter(|r| r[3] == "skip").map(|r| r[2].as_str()).collect();
    assert!(skipped.contains(&"oracle checks"));
    assert!(skipped.contains(&"oracle levels at alpha=1, beta=2"));
    assert!(rows.iter().all(|r| r[3] != "fail"));
}

#[test]
fn injected_kappa_fault_is_caught() {
    let out = triwell(&["verify", "--quick", "--inject-kappa-scale", "1.01"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    let failed: Vec<&str> = doc["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"series equals closed form"));
}

#[test]
fn plot_data_tables() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("plots");
    let out = triwell(&["plot-data", "--beta", "1.6", "--format", "csv", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let manifest = stdout_json(&out);
    assert_eq!(manifest["files"].as_array().unwrap().len(), 3);
    assert!(!target.join("splitting.csv").exists());
    for name in ["potential", "kink", "zero_mode"] {
        let (_, rows) = csv_rows(&fs::read_to_string(target.join(format!("{name}.csv"))).unwrap());
        assert_eq!(rows.len(), 1001, "{name}");
    }
    let (_, pot) = csv_rows(&fs::read_to_string(target.join("potential.csv")).unwrap());
    assert_eq!(pot[500], ["0.0000000000000000e0", "0.0000000000000000e0"]);
    let (_, kink) = csv_rows(&fs::read_to_string(target.join("kink.csv")).unwrap());
    assert_eq!(kink[500][0].parse::<f64>().unwrap(), 0.0);
    let phi0: f64 = kink[500][1].parse().unwrap();
    assert!((phi0 + 1.6 / 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn plot_data_adds_a_splitting_curve_for_sweeps() {
    let dir = tempfile::tempdir().unwrap();
    let out = triwell(&["plot-data", "--beta-range", "1.6", "2.4", "5", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("splitting.json")).unwrap()).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1001);
    assert_eq!(f(&rows[0][1]), 1.6);
    assert_eq!(f(&rows[1000][1]), 2.4);
}

#[test]
fn help_exits_cleanly() {
    let out = triwell(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("plot-data"));
}
