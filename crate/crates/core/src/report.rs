//! Deterministic report rendering: comma-delimited tables or JSON lines.

use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::corpus::Lang;
use crate::error::{Error, Result};
use crate::stats::CorrelationResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    /// Comma-delimited table with a header row.
    #[default]
    Table,
    /// One JSON object per line.
    Structured,
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "table" | "csv" => Ok(ReportFormat::Table),
            "structured" | "jsonl" | "json" => Ok(ReportFormat::Structured),
            other => Err(format!("unknown report format `{other}`")),
        }
    }
}

pub trait Report {
    fn table(&self) -> String;
    fn structured(&self) -> String;

    fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Table => self.table(),
            ReportFormat::Structured => self.structured(),
        }
    }
}

pub fn write_report(report: &dyn Report, path: impl AsRef<Path>, format: ReportFormat) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, report.render(format)).map_err(|e| Error::io(path, e))
}

fn fixed(value: Option<f64>, places: usize) -> String {
    match value {
        // Normalize -0.0 so it never prints with a sign.
        Some(0.0) => format!("{:.*}", places, 0.0),
        Some(v) if v.is_finite() => format!("{v:.places$}"),
        _ => "NA".to_string(),
    }
}

/// Correlations and per-pair scores: 4 decimals, `NA` when undefined.
pub fn fmt_score(value: Option<f64>) -> String {
    fixed(value, 4)
}

/// Percentages: 2 decimals, `NA` when undefined.
pub fn fmt_percent(value: Option<f64>) -> String {
    fixed(value, 2)
}

/// Rounds to the printed precision so structured output matches the table.
pub(crate) fn rounded(value: Option<f64>, places: i32) -> Option<f64> {
    let scale = 10f64.powi(places);
    value
        .filter(|v| v.is_finite())
        .map(|v| (v * scale).round() / scale + 0.0)
}

pub(crate) fn jsonl<T: Serialize>(rows: impl IntoIterator<Item = T>) -> String {
    rows.into_iter()
        .map(|r| serde_json::to_string(&r).expect("report rows serialize") + "\n")
        .collect()
}

/// Mean metric percentage per programming language for each model.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LanguageReport {
    pub metric: String,
    pub rows: Vec<LanguageRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LanguageRow {
    pub model: String,
    /// Percentages in [`Lang::REPORTED`] order; `None` when a language has no test records.
    pub per_lang: [Option<f64>; 5],
    /// Mean over the languages that have a value.
    pub average: Option<f64>,
}

impl LanguageRow {
    pub fn new(model: impl Into<String>, per_lang: [Option<f64>; 5]) -> Self {
        let present: Vec<f64> = per_lang.iter().flatten().copied().collect();
        let average = (!present.is_empty()).then(|| present.iter().sum::<f64>() / present.len() as f64);
        LanguageRow {
            model: model.into(),
            per_lang,
            average,
        }
    }
}

impl Report for LanguageReport {
    fn table(&self) -> String {
        let mut out = String::from("model");
        for lang in Lang::REPORTED {
            out.push(',');
            out.push_str(lang.label());
        }
        out.push_str(",Avg\n");
        for row in &self.rows {
            out.push_str(&row.model);
            for v in row.per_lang {
                out.push(',');
                out.push_str(&fmt_percent(v));
            }
            out.push(',');
            out.push_str(&fmt_percent(row.average));
            out.push('\n');
        }
        out
    }

    fn structured(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            model: &'a str,
            metric: &'a str,
            scores: Vec<(&'static str, Option<f64>)>,
            avg: Option<f64>,
        }
        jsonl(self.rows.iter().map(|r| Row {
            model: &r.model,
            metric: &self.metric,
            scores: Lang::REPORTED
                .iter()
                .zip(r.per_lang)
                .map(|(l, v)| (l.label(), rounded(v, 2)))
                .collect(),
            avg: rounded(r.average, 2),
        }))
    }
}

/// Spearman correlation of each metric column against human scores.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CorrelationReport {
    pub rows: Vec<(String, Option<CorrelationResult>)>,
}

impl Report for CorrelationReport {
    fn table(&self) -> String {
        let mut out = String::from("metric,rho,n,ties\n");
        for (metric, result) in &self.rows {
            match result {
                Some(r) => out.push_str(&format!("{metric},{},{},{}\n", fmt_score(Some(r.rho)), r.n, r.ties_present)),
                None => out.push_str(&format!("{metric},NA,NA,NA\n")),
            }
        }
        out
    }

    fn structured(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            metric: &'a str,
            rho: Option<f64>,
            n: Option<usize>,
            ties: Option<bool>,
        }
        jsonl(self.rows.iter().map(|(metric, r)| Row {
            metric,
            rho: rounded(r.map(|r| r.rho), 4),
            n: r.map(|r| r.n),
            ties: r.map(|r| r.ties_present),
        }))
    }
}
