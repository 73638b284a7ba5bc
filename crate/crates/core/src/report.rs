//! Tabular report rendering.
//!
//! Every experiment result is flattened into a [`Report`]: an ordered
//! list of config entries (provenance: seeds, thresholds, input
//! paths) plus named columns and typed rows. A report renders as CSV
//! with the config in leading `# key=value` comment lines, or as a
//! single JSON object `{"config", "columns", "results"}`. Both
//! renderings are deterministic: rows keep insertion order and JSON
//! object keys are sorted.

use std::io::Write;

use serde_json::{Map, Number, Value};

use crate::error::Result;
use crate::Rational;

/// One typed table cell.
#[derive(Clone, Debug)]
pub enum Cell {
    Text(String),
    Int(i64),
    UInt(u64),
    Float(f64),
    /// Exact preference value; prints as a fixed-precision decimal by
    /// default and as `numerator/denominator` in exact mode.
    Rational(Rational),
    Bool(bool),
    /// Undefined value: empty in CSV, null in JSON.
    Empty,
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    /// Float cell that renders absent values as undefined.
    pub fn opt_float(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Float)
    }
}

/// How to render report output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

/// A finished result table with its provenance.
#[derive(Clone, Debug, Default)]
pub struct Report {
    config: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Report {
    pub fn new<I, S>(columns: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        Report {
            config: Vec::new(),
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// Appends a provenance entry; entries render in insertion order.
    pub fn config_entry(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.config.push((key.into(), value.to_string()));
        self
    }

    pub fn push_row(&mut self, cells: Vec<Cell>) {
        assert_eq!(
            cells.len(),
            self.columns.len(),
            "row width must match the declared columns"
        );
        self.rows.push(cells);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn render_csv(&self, precision: usize, exact: bool) -> String {
        let mut out = String::new();
        for (key, value) in &self.config {
            out.push_str("# ");
            out.push_str(key);
            out.push('=');
            out.push_str(value);
            out.push('\n');
        }
        let header: Vec<String> = self.columns.iter().map(|c| csv_field(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let fields: Vec<String> = row
                .iter()
                .map(|cell| match cell {
                    Cell::Text(s) => csv_field(s),
                    Cell::Int(v) => v.to_string(),
                    Cell::UInt(v) => v.to_string(),
                    Cell::Float(v) => fmt_float(*v, precision),
                    Cell::Rational(v) => {
                        if exact {
                            format!("{}/{}", v.numer(), v.denom())
                        } else {
                            fmt_float(*v.numer() as f64 / *v.denom() as f64, precision)
                        }
                    }
                    Cell::Bool(v) => v.to_string(),
                    Cell::Empty => String::new(),
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render_json(&self, precision: usize, exact: bool) -> Value {
        let mut config = Map::new();
        for (key, value) in &self.config {
            config.insert(key.clone(), Value::String(value.clone()));
        }
        let columns: Vec<Value> = self
            .columns
            .iter()
            .map(|c| Value::String(c.clone()))
            .collect();
        let results: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut object = Map::new();
                for (column, cell) in self.columns.iter().zip(row) {
                    let value = match cell {
                        Cell::Text(s) => Value::String(s.clone()),
                        Cell::Int(v) => Value::Number((*v).into()),
                        Cell::UInt(v) => Value::Number((*v).into()),
                        Cell::Float(v) => json_float(*v, precision),
                        Cell::Rational(v) => {
                            if exact {
                                Value::String(format!("{}/{}", v.numer(), v.denom()))
                            } else {
                                json_float(*v.numer() as f64 / *v.denom() as f64, precision)
                            }
                        }
                        Cell::Bool(v) => Value::Bool(*v),
                        Cell::Empty => Value::Null,
                    };
                    object.insert(column.clone(), value);
                }
                Value::Object(object)
            })
            .collect();
        let mut root = Map::new();
        root.insert("config".into(), Value::Object(config));
        root.insert("columns".into(), Value::Array(columns));
        root.insert("results".into(), Value::Array(results));
        Value::Object(root)
    }

    /// Writes the rendered report followed by a trailing newline.
    pub fn write(
        &self,
        out: &mut dyn Write,
        format: ReportFormat,
        precision: usize,
        exact: bool,
    ) -> Result<()> {
        match format {
            ReportFormat::Csv => out.write_all(self.render_csv(precision, exact).as_bytes())?,
            ReportFormat::Json => {
                let value = self.render_json(precision, exact);
                serde_json::to_writer_pretty(&mut *out, &value)
                    .map_err(std::io::Error::from)?;
                out.write_all(b"\n")?;
            }
        }
        Ok(())
    }
}

fn fmt_float(v: f64, precision: usize) -> String {
    if v.is_nan() {
        String::new()
    } else {
        format!("{v:.precision$}")
    }
}

fn json_float(v: f64, precision: usize) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let scale = 10f64.powi(precision as i32);
    Number::from_f64((v * scale).round() / scale).map_or(Value::Null, Value::Number)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
