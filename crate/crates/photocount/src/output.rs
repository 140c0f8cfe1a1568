//! Machine-readable result tables.
//!
//! Two formats, both byte-deterministic for fixed inputs:
//!
//! * CSV: UTF-8, comma-separated, `#`-prefixed `key=value` metadata
//!   lines before the header row.  Data floats carry 12 significant
//!   digits; metadata floats use the shortest decimal that round-trips,
//!   so inputs can be reproduced exactly.
//! * JSON: one top-level object `{"meta": {...}, "rows": [...]}` with
//!   shortest-round-trip numbers throughout.

use std::fmt::Write as _;

/// Serialization target for a [`Table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    /// Comma-separated values with `#` metadata lines.
    #[default]
    Csv,
    /// A single JSON object.
    Json,
}

/// One table value.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    /// Nonnegative integer (counts, seeds, trials).
    Int(u64),
    /// Real value.
    Float(f64),
    /// Short label (distribution names, modes).
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// 12 significant digits, fixed scientific notation.
fn format_data(value: f64) -> String {
    format!("{value:.11e}")
}

/// Shortest decimal that parses back to the same `f64`.
fn format_exact(value: f64) -> String {
    format!("{value}")
}

fn json_value(cell: &Cell) -> String {
    match cell {
        Cell::Int(v) => v.to_string(),
        Cell::Float(v) => serde_json::to_string(v).expect("finite float"),
        Cell::Text(v) => serde_json::to_string(v).expect("string"),
    }
}

/// An ordered metadata block plus homogeneous rows.
#[derive(Debug, Clone, Default)]
pub struct Table {
    meta: Vec<(String, Cell)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    /// A table with the given column names.
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Self {
            meta: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a metadata entry; emitted in insertion order.
    pub fn add_meta(&mut self, key: impl Into<String>, value: impl Into<Cell>) {
        self.meta.push((key.into(), value.into()));
    }

    /// Appends a data row; must match the column count.
    pub fn add_row(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    /// Renders to the requested format; the result ends with a newline.
    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => self.render_csv(),
            OutputFormat::Json => self.render_json(),
        }
    }

    fn render_csv(&self) -> String {
        let mut out = String::new();
        for (key, value) in &self.meta {
            let rendered = match value {
                Cell::Int(v) => v.to_string(),
                Cell::Float(v) => format_exact(*v),
                Cell::Text(v) => v.clone(),
            };
            let _ = writeln!(out, "# {key}={rendered}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Int(v) => v.to_string(),
                    Cell::Float(v) => format_data(*v),
                    Cell::Text(v) => v.clone(),
                })
                .collect();
            let _ = writeln!(out, "{}", line.join(","));
        }
        out
    }

    fn render_json(&self) -> String {
        let mut out = String::from("{\"meta\":{");
        for (i, (key, value)) in self.meta.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&serde_json::to_string(key).expect("string"));
            out.push(':');
            out.push_str(&json_value(value));
        }
        out.push_str("},\"rows\":[");
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, (column, cell)) in self.columns.iter().zip(row).enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(column).expect("string"));
                out.push(':');
                out.push_str(&json_value(cell));
            }
            out.push('}');
        }
        out.push_str("]}\n");
        out
    }
}
