use qwalk_core::{Error, Result};
use serde::Serialize;

use crate::tables::{
    EmbeddingRow, GroupedEmbeddingRow, GroupedShuntRow, HitReport, MixReport, ShuntRow,
    SzegedyReport,
};

/// Table views print six decimals with ties rounded to even, matching the
/// survey convention; raw listings carry 17 significant digits.
pub fn fixed6(x: f64) -> String {
    let r = (x * 1e6).round_ties_even() / 1e6;
    format!("{:.6}", if r == 0.0 { 0.0 } else { r })
}

pub fn raw17(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_from_records(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    let io_err = |e: csv::Error| Error::Internal(format!("csv rendering failed: {e}"));
    w.write_record(header).map_err(io_err)?;
    for row in rows {
        w.write_record(&row).map_err(io_err)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv rendering failed: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(format!("csv is not utf-8: {e}")))
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Internal(format!("json rendering failed: {e}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

pub fn render_embeddings(rows: &[EmbeddingRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv_from_records(
            &["index", "rotation", "genus", "trace", "total_entropy"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.rotation.clone(),
                        r.genus.to_string(),
                        raw17(r.trace),
                        raw17(r.total_entropy),
                    ]
                })
                .collect(),
        ),
    }
}

pub fn render_grouped_embeddings(
    rows: &[GroupedEmbeddingRow],
    format: OutputFormat,
) -> Result<String> {
    match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv_from_records(
            &["genus", "trace", "count"],
            rows.iter()
                .map(|r| vec![r.genus.to_string(), fixed6(r.trace), r.count.to_string()])
                .collect(),
        ),
    }
}

pub fn render_shunts(rows: &[ShuntRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv_from_records(
            &["index", "cycles", "signature", "symmetric", "trace", "total_entropy"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.index.to_string(),
                        r.cycles.clone(),
                        r.signature.clone(),
                        r.symmetric.to_string(),
                        raw17(r.trace),
                        raw17(r.total_entropy),
                    ]
                })
                .collect(),
        ),
    }
}

pub fn render_grouped_shunts(rows: &[GroupedShuntRow], format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(&rows),
        OutputFormat::Csv => csv_from_records(
            &["signature", "symmetric", "count", "trace_min", "trace_max"],
            rows.iter()
                .map(|r| {
                    vec![
                        r.signature.clone(),
                        r.symmetric.to_string(),
                        r.count.to_string(),
                        fixed6(r.trace_min),
                        fixed6(r.trace_max),
                    ]
                })
                .collect(),
        ),
    }
}

fn optional(v: Option<usize>) -> String {
    v.map_or_else(|| "none".into(), |k| k.to_string())
}

pub fn render_szegedy(report: &SzegedyReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_from_records(
            &[
                "model", "graph6", "vertices", "dim", "support", "x", "y", "eps", "trace",
                "total_entropy", "walk_regular", "uniform", "one_shot", "concurrent",
                "expected_value", "unaccounted_mass", "converged",
            ],
            vec![vec![
                report.model.clone(),
                report.graph6.clone(),
                report.vertices.to_string(),
                report.dim.to_string(),
                report.support.to_string(),
                report.x.clone(),
                report.y.clone(),
                raw17(report.eps),
                raw17(report.trace),
                raw17(report.total_entropy),
                report.walk_regular.to_string(),
                report.uniform.to_string(),
                optional(report.one_shot),
                optional(report.concurrent),
                raw17(report.expected_value),
                raw17(report.unaccounted_mass),
                report.converged.to_string(),
            ]],
        ),
    }
}

pub fn render_mix(report: &MixReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_from_records(
            &[
                "model", "graph6", "structure", "dim", "eigenvalue_groups", "trace",
                "trace_lower_bound", "total_entropy", "walk_regular", "uniform", "horizon",
                "time_average_deviation",
            ],
            vec![vec![
                report.model.clone(),
                report.graph6.clone(),
                report.structure.clone(),
                report.dim.to_string(),
                report.eigenvalue_groups.to_string(),
                raw17(report.trace),
                raw17(report.trace_lower_bound),
                raw17(report.total_entropy),
                report.walk_regular.to_string(),
                report.uniform.to_string(),
                report.horizon.map_or_else(|| "none".into(), |h| h.to_string()),
                report
                    .time_average_deviation
                    .map_or_else(|| "none".into(), raw17),
            ]],
        ),
    }
}

pub fn render_hit(report: &HitReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Json => json(report),
        OutputFormat::Csv => csv_from_records(
            &[
                "model", "graph6", "structure", "x", "y", "eps", "k_max", "one_shot",
                "concurrent", "expected_value", "unaccounted_mass", "converged",
            ],
            vec![vec![
                report.model.clone(),
                report.graph6.clone(),
                report.structure.clone(),
                report.x.clone(),
                report.y.clone(),
                raw17(report.eps),
                report.k_max.to_string(),
                optional(report.one_shot),
                optional(report.concurrent),
                raw17(report.expected_value),
                raw17(report.unaccounted_mass),
                report.converged.to_string(),
            ]],
        ),
    }
}
