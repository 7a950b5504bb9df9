//! End-to-end tests of the `bbsim` binary: exit codes, file outputs and
//! determinism, exercised through the real CLI.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use bbsim::output::{SUMMARY_CSV_HEADER, TIMESERIES_CSV_HEADER};
use bbsim_core::broker::HISTORY_CSV_HEADER;

fn bbsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbsim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn write_small_config(dir: &Path) -> std::path::PathBuf {
    let path = dir.join("small.json");
    fs::write(
        &path,
        r#"{
            "background": {"arbit_kbps": 5500},
            "run": {"duration_s": 300, "warmup_s": 100, "replications": 2, "base_seed": 7}
        }"#,
    )
    .unwrap();
    path
}

#[test]
fn run_writes_two_summary_rows_for_both_schemes() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let out = dir.path().join("summary.csv");

    let output = bbsim(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], SUMMARY_CSV_HEADER);
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("traditional,5500.000"));
    assert!(lines[2].starts_with("proposed,5500.000"));
}

#[test]
fn identical_seeds_give_byte_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");

    for out in [&out_a, &out_b] {
        let output = bbsim(&[
            "run",
            "--config",
            config.to_str().unwrap(),
            "--seed",
            "12345",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(output.status.success(), "stderr: {}", stderr(&output));
    }
    assert_eq!(fs::read(&out_a).unwrap(), fs::read(&out_b).unwrap());
}

#[test]
fn run_dumps_timeseries_and_history() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let timeseries = dir.path().join("ticks.csv");
    let history = dir.path().join("history.csv");

    let output = bbsim(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--scheme",
        "proposed",
        "--timeseries",
        timeseries.to_str().unwrap(),
        "--history",
        history.to_str().unwrap(),
        "--out",
        dir.path().join("s.csv").to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    let ticks = fs::read_to_string(&timeseries).unwrap();
    let tick_lines: Vec<&str> = ticks.lines().collect();
    assert_eq!(tick_lines[0], TIMESERIES_CSV_HEADER);
    // the dump covers the whole replication: 100 s warmup + 300 s at t1 = 1 s
    assert_eq!(tick_lines.len(), 1 + 400);
    assert!(tick_lines[1].ends_with(",proposed"));

    let history_text = fs::read_to_string(&history).unwrap();
    let history_lines: Vec<&str> = history_text.lines().collect();
    assert_eq!(history_lines[0], HISTORY_CSV_HEADER);
    assert_eq!(history_lines.len(), 1 + 400);
    // times carry at least 3 decimal places
    assert!(history_lines[1].starts_with("0.000,"));
    assert!(history_lines[2].starts_with("1.000,"));
}

#[test]
fn missing_config_exits_one() {
    let output = bbsim(&["run", "--config", "/no/such/file.json"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("/no/such/file.json"));
}

#[test]
fn invalid_config_lists_every_violation() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.json");
    fs::write(
        &config,
        r#"{"window":{"T_s":61,"t1_s":2},"femto":{"users":0}}"#,
    )
    .unwrap();

    let output = bbsim(&["validate-config", config.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    let err = stderr(&output);
    assert!(err.contains("window.T_s"), "stderr: {err}");
    assert!(err.contains("femto.users"), "stderr: {err}");
}

#[test]
fn validate_accepts_good_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let output = bbsim(&["validate-config", config.to_str().unwrap()]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    assert!(String::from_utf8_lossy(&output.stdout).contains("configuration OK"));
}

#[test]
fn malformed_arbit_range_exits_one() {
    let output = bbsim(&["sweep", "--arbit", "6000:4500:500"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("malformed --arbit range"));
}

#[test]
fn unknown_flag_exits_one() {
    let output = bbsim(&["run", "--frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let output = bbsim(&["--help"]);
    assert_eq!(output.status.code(), Some(0));
    let text = String::from_utf8_lossy(&output.stdout);
    assert!(text.contains("sweep"));
}

#[test]
fn sweep_then_report_renders_charts() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let sweep_csv = dir.path().join("sweep.csv");

    let output = bbsim(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--arbit",
        "4500:6000:500",
        "--out",
        sweep_csv.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));
    let rows = fs::read_to_string(&sweep_csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 8, "4 levels x 2 schemes");

    let report_dir = dir.path().join("report");
    let output = bbsim(&[
        "report",
        sweep_csv.to_str().unwrap(),
        "--out-dir",
        report_dir.to_str().unwrap(),
    ]);
    assert!(output.status.success(), "stderr: {}", stderr(&output));

    for name in [
        "fig_sl_traditional.svg",
        "fig_sl_proposed.svg",
        "fig_utilization.svg",
        "fig_utilization_high_sl.svg",
    ] {
        let contents = fs::read_to_string(report_dir.join(name)).unwrap();
        assert!(contents.starts_with("<svg"), "{name} is not an SVG");
    }
    assert!(report_dir.join("summary.txt").exists());
}

#[test]
fn report_rejects_unknown_header() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bad.csv");
    fs::write(&csv, "a,b,c\n1,2,3\n").unwrap();
    let output = bbsim(&["report", csv.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("unexpected header"));
}

#[test]
fn report_rejects_empty_data() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("empty.csv");
    fs::write(&csv, format!("{SUMMARY_CSV_HEADER}\n")).unwrap();
    let output = bbsim(&["report", csv.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));
    assert!(stderr(&output).contains("no data"));
}

#[test]
fn unwritable_output_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_small_config(dir.path());
    let output = bbsim(&[
        "run",
        "--config",
        config.to_str().unwrap(),
        "--out",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(output.status.code(), Some(2));
    assert!(stderr(&output).contains("/nonexistent-dir/out.csv"));
}
