//! Report files.
//!
//! Two tables are written, either as CSV (UTF-8, header row) or JSON arrays
//! of records with the same field names:
//!
//! - `summary`: one row per DGP with the analytic reference values, the
//!   bootstrap summaries of both estimators and their square-root ratios to
//!   the analytic variance;
//! - `raw`: one row per replication with columns
//!   `dgp, rep, elpd_hat, naive_var, unbiased_var, negative_flag`.
//!
//! Floats are written in the shortest form that parses back to the same
//! value. Missing square-root ratios (negative inputs) are empty CSV cells
//! and JSON `null`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::harness::run::SimulationReport;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Csv,
    Json,
}

impl ReportFormat {
    fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidArgument(format!("unknown format '{other}' (csv|json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dgp: String,
    pub seed: u64,
    pub n: usize,
    pub replications: usize,
    pub bb_draws: usize,
    pub analytic_var: f64,
    pub analytic_expected_naive: f64,
    pub naive_bb_mean: f64,
    pub naive_bb_lo: f64,
    pub naive_bb_hi: f64,
    pub unbiased_bb_mean: f64,
    pub unbiased_bb_lo: f64,
    pub unbiased_bb_hi: f64,
    pub sqrt_ratio_analytic_var: Option<f64>,
    pub sqrt_ratio_analytic_expected_naive: Option<f64>,
    pub sqrt_ratio_naive_bb_mean: Option<f64>,
    pub sqrt_ratio_naive_bb_lo: Option<f64>,
    pub sqrt_ratio_naive_bb_hi: Option<f64>,
    pub sqrt_ratio_unbiased_bb_mean: Option<f64>,
    pub sqrt_ratio_unbiased_bb_lo: Option<f64>,
    pub sqrt_ratio_unbiased_bb_hi: Option<f64>,
    pub negative_unbiased_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawRow {
    pub dgp: String,
    pub rep: usize,
    pub elpd_hat: f64,
    pub naive_var: f64,
    pub unbiased_var: f64,
    pub negative_flag: bool,
}

pub const SUMMARY_HEADER: &[&str] = &[
    "dgp",
    "seed",
    "n",
    "replications",
    "bb_draws",
    "analytic_var",
    "analytic_expected_naive",
    "naive_bb_mean",
    "naive_bb_lo",
    "naive_bb_hi",
    "unbiased_bb_mean",
    "unbiased_bb_lo",
    "unbiased_bb_hi",
    "sqrt_ratio_analytic_var",
    "sqrt_ratio_analytic_expected_naive",
    "sqrt_ratio_naive_bb_mean",
    "sqrt_ratio_naive_bb_lo",
    "sqrt_ratio_naive_bb_hi",
    "sqrt_ratio_unbiased_bb_mean",
    "sqrt_ratio_unbiased_bb_lo",
    "sqrt_ratio_unbiased_bb_hi",
    "negative_unbiased_count",
];

pub const RAW_HEADER: &[&str] = &["dgp", "rep", "elpd_hat", "naive_var", "unbiased_var", "negative_flag"];

pub fn summary_rows(report: &SimulationReport) -> Vec<SummaryRow> {
    report
        .dgps
        .iter()
        .map(|d| SummaryRow {
            dgp: d.name.clone(),
            seed: d.seed,
            n: report.n,
            replications: report.replications,
            bb_draws: report.bb_draws,
            analytic_var: d.analytic_total_var,
            analytic_expected_naive: d.analytic_expected_naive,
            naive_bb_mean: d.naive_bb.mean,
            naive_bb_lo: d.naive_bb.ci_low,
            naive_bb_hi: d.naive_bb.ci_high,
            unbiased_bb_mean: d.unbiased_bb.mean,
            unbiased_bb_lo: d.unbiased_bb.ci_low,
            unbiased_bb_hi: d.unbiased_bb.ci_high,
            sqrt_ratio_analytic_var: (d.analytic_total_var > 0.0).then_some(1.0),
            sqrt_ratio_analytic_expected_naive: d.sqrt_ratio_expected_naive,
            sqrt_ratio_naive_bb_mean: d.sqrt_ratio_naive.mean,
            sqrt_ratio_naive_bb_lo: d.sqrt_ratio_naive.ci_low,
            sqrt_ratio_naive_bb_hi: d.sqrt_ratio_naive.ci_high,
            sqrt_ratio_unbiased_bb_mean: d.sqrt_ratio_unbiased.mean,
            sqrt_ratio_unbiased_bb_lo: d.sqrt_ratio_unbiased.ci_low,
            sqrt_ratio_unbiased_bb_hi: d.sqrt_ratio_unbiased.ci_high,
            negative_unbiased_count: d.negative_unbiased_count,
        })
        .collect()
}

pub fn raw_rows(report: &SimulationReport) -> Vec<RawRow> {
    report
        .dgps
        .iter()
        .flat_map(|d| {
            d.replications.iter().map(move |r| RawRow {
                dgp: d.name.clone(),
                rep: r.rep,
                elpd_hat: r.elpd_hat,
                naive_var: r.naive_var,
                unbiased_var: r.unbiased_var,
                negative_flag: r.negative_flag,
            })
        })
        .collect()
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn write_csv<T: Serialize, W: Write>(out: W, header: &[&str], rows: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header).map_err(|e| Error::Serialize(e.to_string()))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::Serialize(e.to_string()))?;
    }
    w.flush().map_err(|e| Error::Serialize(e.to_string()))?;
    Ok(())
}

/// Write `rows` as CSV (always with a header, even when empty) or as a JSON array.
pub fn write_table<T: Serialize, W: Write>(out: W, format: ReportFormat, header: &[&str], rows: &[T]) -> Result<()> {
    match format {
        ReportFormat::Csv => write_csv(out, header, rows),
        ReportFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows).map_err(|e| Error::Serialize(e.to_string()))?;
            out.write_all(b"\n").map_err(|e| Error::Serialize(e.to_string()))
        }
    }
}

fn write_file<T: Serialize>(path: &Path, format: ReportFormat, header: &[&str], rows: &[T]) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut out = BufWriter::new(file);
    write_table(&mut out, format, header, rows).map_err(|e| match e {
        Error::Serialize(msg) => Error::Io {
            path: path.to_path_buf(),
            source: std::io::Error::other(msg),
        },
        other => other,
    })?;
    out.flush().map_err(io_err(path))
}

/// Write `summary.<ext>` and `raw.<ext>` into `dir` (created if missing).
/// Returns the written paths.
pub fn emit_report(report: &SimulationReport, dir: &Path, format: ReportFormat) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    let ext = format.extension();
    let summary_path = dir.join(format!("summary.{ext}"));
    let raw_path = dir.join(format!("raw.{ext}"));
    write_file(&summary_path, format, SUMMARY_HEADER, &summary_rows(report))?;
    write_file(&raw_path, format, RAW_HEADER, &raw_rows(report))?;
    Ok(vec![summary_path, raw_path])
}

/// Read a table written by [`emit_report`].
pub fn read_table<T: for<'de> Deserialize<'de>>(path: &Path, format: ReportFormat) -> Result<Vec<T>> {
    let file = File::open(path).map_err(io_err(path))?;
    match format {
        ReportFormat::Csv => csv::Reader::from_reader(file)
            .deserialize()
            .collect::<std::result::Result<Vec<T>, _>>()
            .map_err(|e| Error::Serialize(e.to_string())),
        ReportFormat::Json => serde_json::from_reader(file).map_err(|e| Error::Serialize(e.to_string())),
    }
}
