//! CSV and JSON emission.
//!
//! Both formats are byte-deterministic: rows are already in grid order,
//! struct field order fixes JSON layout, and floats use Rust's shortest
//! round-trip formatting. Every data row passes the first/second-law re-check
//! before anything is written.
//!
//! CSV carries the six-column plotting contract (plus a leading `g` column
//! for multi-line tables); rows skipped during the sweep are omitted from
//! CSV but kept — with reasons — in JSON, which carries every field.

use std::fs;
use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;
use crate::sweep::{check_row_laws, SweepRow, SweepTable};

/// Output format selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Shortest round-trip decimal representation.
fn fmt(x: f64) -> String {
    format!("{x}")
}

/// RFC-4180-style field: quote only when the content demands it. Numeric
/// fields never do; this keeps the writer honest if headings ever change.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders the plotting CSV. Header for single-line tables:
/// `T_H[K],Qdot_H[J/s],Qdot_R[J/s],Qdot_C[J/s],eta,sigma`.
pub fn render_csv(table: &SweepTable) -> Result<String, CliError> {
    let mut out = String::new();
    let mut cols: Vec<&str> = Vec::new();
    if table.multi_line {
        cols.push("g");
    }
    cols.extend([
        table.variable.csv_heading(),
        "Qdot_H[J/s]",
        "Qdot_R[J/s]",
        "Qdot_C[J/s]",
        "eta",
        "sigma",
    ]);
    out.push_str(
        &cols
            .iter()
            .map(|c| csv_field(c))
            .collect::<Vec<_>>()
            .join(","),
    );
    out.push('\n');

    for row in &table.rows {
        check_row_laws(row)?;
        let Some(d) = &row.data else { continue };
        let mut fields: Vec<String> = Vec::new();
        if table.multi_line {
            fields.push(fmt(row.g));
        }
        fields.extend([
            fmt(row.value),
            fmt(d.q_hot),
            fmt(d.q_room),
            fmt(d.q_cold),
            d.eta.map(fmt).unwrap_or_default(),
            fmt(d.sigma),
        ]);
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    variable: &'static str,
    rows: &'a [SweepRow],
}

/// Renders the full-fidelity JSON document (all diagnostic fields, skipped
/// rows with reasons; non-finite numbers become null).
pub fn render_json(table: &SweepTable) -> Result<String, CliError> {
    for row in &table.rows {
        check_row_laws(row)?;
    }
    let doc = JsonDoc {
        variable: table.variable.label(),
        rows: &table.rows,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::Config(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

pub fn render(table: &SweepTable, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    }
}

/// Writes to the path, or to stdout when no path is given.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
