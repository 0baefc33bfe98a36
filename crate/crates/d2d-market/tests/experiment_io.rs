//! File-level behavior: config loading, summary and trace output, and the
//! CLI binary's exit codes.

mod common;

use std::fs;
use std::process::Command;

use common::live_market_config;
use d2d_market::config::{dump_config, load_config, ExperimentSpec, Mode, OutputFormat};
use d2d_market::experiment::{run_experiment, trace_path};
use d2d_market::scenario::ScenarioConfig;

fn live_spec(dir: &std::path::Path) -> ExperimentSpec {
    ExperimentSpec {
        mode: Mode::Both,
        config: ScenarioConfig {
            runs: 10,
            n_counterparties: 3,
            xi_r: 3e-4,
            ..live_market_config()
        },
        output_path: dir.join("summary.csv"),
        output_format: OutputFormat::Csv,
        emit_trace: false,
    }
}

#[test]
fn load_config_round_trips_through_dump() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("exp.conf");
    fs::write(
        &path,
        "# experiment\nmode = both\nseed = 9\nruns = 3\ncache_hit = 0.4\n",
    )
    .unwrap();
    let spec = load_config(&path).unwrap();
    assert_eq!(spec.config.seed, 9);
    let dumped_path = dir.path().join("dumped.conf");
    fs::write(&dumped_path, dump_config(&spec)).unwrap();
    assert_eq!(load_config(&dumped_path).unwrap(), spec);
}

#[test]
fn summary_csv_has_the_documented_shape() {
    let dir = tempfile::tempdir().unwrap();
    let spec = live_spec(dir.path());
    run_experiment(&spec).unwrap();

    let text = fs::read_to_string(&spec.output_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "n,metric,mean,stddev,runs");
    let mut rows = 0;
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 5, "bad row {line:?}");
        let _: u32 = fields[0].parse().unwrap();
        let _: f64 = fields[2].parse().unwrap();
        let _: f64 = fields[3].parse().unwrap();
        let runs: u32 = fields[4].parse().unwrap();
        assert_eq!(runs, 10);
        rows += 1;
    }
    // 3 counterparty counts x 6 metrics in mode=both.
    assert_eq!(rows, 18);
}

#[test]
fn json_summary_parses_and_matches_the_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = live_spec(dir.path());
    spec.output_format = OutputFormat::Json;
    spec.output_path = dir.path().join("summary.json");
    run_experiment(&spec).unwrap();

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&spec.output_path).unwrap()).unwrap();
    assert_eq!(doc["schema_version"], 1);
    assert_eq!(doc["rows"].as_array().unwrap().len(), 18);
}

#[test]
fn stackelberg_mode_omits_auction_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = live_spec(dir.path());
    spec.mode = Mode::Stackelberg;
    run_experiment(&spec).unwrap();
    let text = fs::read_to_string(&spec.output_path).unwrap();
    assert!(!text.contains("auction_"));
    assert!(text.contains("avg_seller_price"));
}

#[test]
fn traces_have_increasing_clocks_and_prices() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = live_spec(dir.path());
    spec.emit_trace = true;
    spec.config.runs = 4;
    run_experiment(&spec).unwrap();

    let mut trace_files = 0;
    for n in 1..=spec.config.n_counterparties {
        for run in 0..spec.config.runs {
            let path = trace_path(&spec.output_path, n, run);
            let text = fs::read_to_string(&path).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next().unwrap(), "clock,price,buyer_id,bid,clinch");
            let mut last: Option<(u64, f64)> = None;
            for line in lines {
                let fields: Vec<&str> = line.split(',').collect();
                let clock: u64 = fields[0].parse().unwrap();
                let price: f64 = fields[1].parse().unwrap();
                if let Some((prev_clock, prev_price)) = last {
                    assert!(clock >= prev_clock);
                    if clock > prev_clock {
                        assert!(clock == prev_clock + 1);
                        assert!(price > prev_price);
                    }
                }
                last = Some((clock, price));
            }
            trace_files += 1;
        }
    }
    assert_eq!(trace_files, 12);
}

#[test]
fn failed_runs_leave_no_output_behind() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = live_spec(dir.path());
    // A step too small to clear within the clock bound.
    spec.config.auction = Some(
        d2d_market::auction::AuctionConfig::new(10.0, 0.01, 1e-9, 3).unwrap(),
    );
    spec.config.xi_r = 3e-3;
    assert!(run_experiment(&spec).is_err());
    assert!(!spec.output_path.exists());
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_d2d-market"))
}

#[test]
fn cli_runs_an_experiment_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    fs::write(
        &conf,
        "runs = 5\nn_counterparties = 2\nn_clusters = 1\ncost_low = 0.05\ncost_high = 0.2\n",
    )
    .unwrap();
    let out = dir.path().join("res.csv");
    let status = bin()
        .args(["run", "--config"])
        .arg(&conf)
        .args(["--seed", "7", "--runs", "5", "--format", "csv"])
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(out.exists());
}

#[test]
fn cli_rejects_bad_mode_with_status_2() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    fs::write(&conf, "mode = dutch\n").unwrap();
    let output = bin().args(["run", "--config"]).arg(&conf).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("mode"), "{stderr}");
}

#[test]
fn cli_rejects_unknown_flags_with_status_2() {
    let output = bin().args(["run", "--bogus"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn cli_reports_runtime_failures_with_status_1() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("exp.conf");
    // Valid config whose auction cannot clear within its clock bound.
    fs::write(
        &conf,
        "runs = 2\nn_counterparties = 2\nn_clusters = 1\nxi_r = 3e-3\n\
         auction_initial_price = 0.01\nauction_step = 1e-9\nauction_max_clocks = 3\n",
    )
    .unwrap();
    let out = dir.path().join("res.csv");
    let output = bin()
        .args(["run", "--config"])
        .arg(&conf)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(1));
    assert!(!out.exists());
}
