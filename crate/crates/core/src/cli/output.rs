//! Table, CSV and JSON rendering of a [`ReportBundle`].

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hhf::{CheckConfig, CheckReport, CheckStatus};

pub const CSV_COLUMNS: [&str; 10] =
    ["instance_id", "check", "lhs", "rhs", "residual", "slack", "tol", "pass", "evals", "seconds"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub graded_points: usize,
    pub graded_ratio: f64,
    pub graded_near_layers: usize,
    pub graded_far_layers: usize,
    pub oracle_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub timestamp_unix: u64,
    pub seed: u64,
    pub quadrature: QuadratureSettings,
    pub tolerances: CheckConfig,
    pub passed: usize,
    pub total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportBundle {
    pub meta: Meta,
    pub reports: Vec<CheckReport>,
}

impl ReportBundle {
    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Table => Ok(table(&self.reports)),
            Format::Csv => csv(&self.reports),
            Format::Json => serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| e.to_string()),
        }
    }

    pub fn summary(&self) -> String {
        format!("{}/{} passed", self.meta.passed, self.meta.total)
    }
}

/// Shortest round-tripping text, switching to exponent form for very small or large values.
pub fn number(x: f64) -> String {
    let m = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&m) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(number).unwrap_or_default()
}

fn csv(reports: &[CheckReport]) -> Result<String, String> {
    let mut w = ::csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_COLUMNS).map_err(|e| e.to_string())?;
    for r in reports {
        w.write_record([
            r.instance_id.clone(),
            r.check.to_string(),
            opt(r.lhs),
            opt(r.rhs),
            opt(r.residual),
            opt(r.slack),
            number(r.tol),
            r.pass.to_string(),
            r.evals.to_string(),
            format!("{:.6}", r.seconds),
        ])
        .map_err(|e| e.to_string())?;
    }
    let bytes = w.into_inner().map_err(|e| e.to_string())?;
    String::from_utf8(bytes).map_err(|e| e.to_string())
}

fn status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Skipped => "skipped",
        CheckStatus::Error => "ERROR",
    }
}

fn table(reports: &[CheckReport]) -> String {
    let header = ["instance", "check", "status", "lhs", "middle", "rhs", "residual", "slack", "tol", "evals"];
    let short = |x: Option<f64>| x.map(|v| format!("{v:.10e}")).unwrap_or_else(|| "-".into());
    let rows: Vec<[String; 10]> = reports
        .iter()
        .map(|r| {
            [
                r.instance_id.clone(),
                r.check.to_string(),
                status(r.status).to_owned(),
                short(r.lhs),
                short(r.middle),
                short(r.rhs),
                short(r.residual),
                short(r.slack),
                format!("{:.1e}", r.tol),
                r.evals.to_string(),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let line = |out: &mut String, cells: &[String]| {
        let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        let _ = writeln!(out, "{}", parts.join("  ").trim_end());
    };
    line(&mut out, &header.map(String::from));
    for row in &rows {
        line(&mut out, row);
    }
    for r in reports.iter().filter(|r| r.message.is_some()) {
        let _ = writeln!(out, "{} {}: {}", r.instance_id, r.check, r.message.as_deref().unwrap_or_default());
    }
    out
}
