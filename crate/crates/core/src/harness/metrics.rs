//! Per-run CSV logs and the JSON suite summary.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optim::MetricsRow;

pub const CSV_HEADER: [&str; 5] = ["iteration", "local_regret", "grad_norm", "snp_residual", "elapsed_ms"];

/// 17 significant digits; parses back to the same `f64`.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn field(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Format {
            path: path.into(),
            reason: format!("{other:?}"),
        },
    }
}

/// Writes one row per iteration; skipped diagnostics are empty fields.
pub fn write_metrics_csv(rows: &[MetricsRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::invalid("metrics", "no rows to write"));
    }
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    w.write_record(CSV_HEADER).map_err(|e| csv_err(path, e))?;
    for r in rows {
        w.write_record([
            r.iteration.to_string(),
            field(r.local_regret),
            field(r.grad_norm),
            field(r.snp_residual),
            field(r.elapsed_ms),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn read_metrics_csv(path: &Path) -> Result<Vec<MetricsRow>> {
    let mut rd = csv::Reader::from_path(path).map_err(|e| csv_err(path, e))?;
    let header = rd.headers().map_err(|e| csv_err(path, e))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Format {
            path: path.into(),
            reason: format!("unexpected header {header:?}"),
        });
    }
    let bad = |reason: String| Error::Format {
        path: path.into(),
        reason,
    };
    let opt = |s: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            s.parse().map(Some).map_err(|_| bad(format!("bad number `{s}`")))
        }
    };
    let mut rows = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        rows.push(MetricsRow {
            iteration: rec[0].parse().map_err(|_| bad(format!("bad iteration `{}`", &rec[0])))?,
            local_regret: opt(&rec[1])?,
            grad_norm: opt(&rec[2])?,
            snp_residual: opt(&rec[3])?,
            elapsed_ms: opt(&rec[4])?,
        });
    }
    Ok(rows)
}

/// One (size, method) entry of a suite summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryCell {
    pub family: String,
    pub size: usize,
    pub method: String,
    /// Mean of the final local regret; `None` if some run never produced a
    /// finite value.
    pub mean: Option<f64>,
    /// Sample standard deviation (0 for a single instance).
    pub std: Option<f64>,
    pub diverged: usize,
    pub n: usize,
    /// Final local regret per instance, in instance order.
    pub final_regrets: Vec<Option<f64>>,
}

/// Suite description echoed into the summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteInfo {
    pub family: String,
    pub sizes: Vec<usize>,
    pub instances: usize,
    pub seed: u64,
    pub methods: Vec<String>,
    pub players: Option<usize>,
    pub dist: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryTable {
    pub suite: SuiteInfo,
    pub cells: Vec<SummaryCell>,
}

impl SummaryTable {
    pub fn cell(&self, size: usize, method: &str) -> Option<&SummaryCell> {
        self.cells.iter().find(|c| c.size == size && c.method == method)
    }
}

/// `(mean, sample std)`; std is 0 for one value.
pub fn mean_std(values: &[f64]) -> Option<(f64, f64)> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std = if values.len() == 1 {
        0.0
    } else {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    };
    Some((mean, std))
}

pub fn write_summary_json(table: &SummaryTable, path: &Path) -> Result<()> {
    if table.suite.methods.is_empty() || table.cells.is_empty() {
        return Err(Error::invalid("methods", "summary has no methods"));
    }
    let mut text = serde_json::to_string_pretty(table)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn read_summary_json(path: &Path) -> Result<SummaryTable> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
