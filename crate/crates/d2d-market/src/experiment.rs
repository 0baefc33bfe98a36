//! Experiment dispatch and result serialization.
//!
//! A summary file holds one row per (counterparty count, metric) with mean,
//! sample standard deviation and sample count; auction traces can optionally
//! be written as one CSV per (count, run). All floats are serialized with 12
//! significant digits and files are written atomically (rendered in memory,
//! then temp-file + rename), so a failed run never leaves partial output.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::json;

use crate::auction::AuctionOutcome;
use crate::config::{ExperimentSpec, Mode, OutputFormat};
use crate::error::{Error, Result};
use crate::numeric::{format_sig12, round_sig12};
use crate::scenario::{self, SummaryStats};

/// Run the experiment described by `spec` and write its output files.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<()> {
    spec.config.validate()?;

    // The sweep only runs the auction when the mode asks for it.
    let mut config = spec.config.clone();
    if !spec.mode.runs_auction() {
        config.auction = None;
    } else if config.auction.is_none() {
        return Err(Error::Config {
            line: None,
            message: "auction mode requires the auction_* keys".into(),
        });
    }

    let mut files: Vec<(PathBuf, String)> = Vec::new();
    let emit_trace = spec.emit_trace && spec.mode.runs_auction();
    let trace_base = spec.output_path.clone();
    let stats = scenario::run_monte_carlo_observed(&config, |n, run, outcome| {
        if emit_trace {
            if let Some(auction) = &outcome.auction {
                files.push((
                    trace_path(&trace_base, n, run),
                    render_trace_csv(auction),
                ));
            }
        }
        Ok(())
    })?;

    let summary = match spec.output_format {
        OutputFormat::Csv => render_summary_csv(&stats, spec.mode),
        OutputFormat::Json => render_summary_json(&stats, spec.mode),
    };
    files.push((spec.output_path.clone(), summary));

    write_all_or_clean_up(&files)
}

/// Trace file path for one (count, run) cell, derived from the summary path:
/// `out/summary.csv` becomes `out/summary.trace.n3.run17.csv`.
pub fn trace_path(output_path: &Path, n: u32, run: u32) -> PathBuf {
    let stem = output_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "summary".to_string());
    let file = format!("{stem}.trace.n{n}.run{run}.csv");
    output_path.with_file_name(file)
}

/// Summary CSV: `n,metric,mean,stddev,runs`, counterparty count ascending,
/// metrics in declaration order, filtered to the mode's solver families.
pub fn render_summary_csv(stats: &SummaryStats, mode: Mode) -> String {
    let mut out = String::from("n,metric,mean,stddev,runs\n");
    for row in stats.rows.iter().filter(|r| mode_keeps(mode, r.metric)) {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n,
            row.metric.name(),
            format_sig12(row.mean),
            format_sig12(row.stddev),
            row.runs
        ));
    }
    out
}

/// Summary JSON: the same rows as the CSV under a versioned envelope.
pub fn render_summary_json(stats: &SummaryStats, mode: Mode) -> String {
    let rows: Vec<_> = stats
        .rows
        .iter()
        .filter(|r| mode_keeps(mode, r.metric))
        .map(|row| {
            json!({
                "n": row.n,
                "metric": row.metric.name(),
                "mean": round_sig12(row.mean),
                "stddev": round_sig12(row.stddev),
                "runs": row.runs,
            })
        })
        .collect();
    let doc = json!({ "schema_version": 1, "rows": rows });
    let mut text = serde_json::to_string_pretty(&doc).expect("summary serializes");
    text.push('\n');
    text
}

fn mode_keeps(mode: Mode, metric: crate::scenario::Metric) -> bool {
    if metric.is_auction() {
        mode.runs_auction()
    } else {
        mode.runs_stackelberg()
    }
}

/// Trace CSV: `clock,price,buyer_id,bid,clinch`, one row per clock per buyer.
pub fn render_trace_csv(outcome: &AuctionOutcome) -> String {
    let mut out = String::from("clock,price,buyer_id,bid,clinch\n");
    for record in &outcome.trace {
        for (buyer, (bid, clinch)) in record
            .bids_mw
            .iter()
            .zip(&record.clinches_mw)
            .enumerate()
        {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                record.clock,
                format_sig12(record.price),
                buyer,
                format_sig12(*bid),
                format_sig12(*clinch)
            ));
        }
    }
    out
}

/// Write every file atomically; on any failure remove whatever this call
/// already created.
fn write_all_or_clean_up(files: &[(PathBuf, String)]) -> Result<()> {
    let mut written: Vec<PathBuf> = Vec::with_capacity(files.len());
    for (path, contents) in files {
        if let Err(e) = write_atomic(path, contents) {
            for done in &written {
                let _ = fs::remove_file(done);
            }
            return Err(e);
        }
        written.push(path.clone());
    }
    Ok(())
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp.{}", std::process::id()));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path).map_err(|e| {
        let _ = fs::remove_file(&tmp);
        e.into()
    })
}
