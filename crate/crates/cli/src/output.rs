//! Long-form tables serialized as CSV or JSON.
//!
//! Reals are written with 17 significant digits (`{:.16e}`), which round-trips
//! every `f64`. The JSON document is
//! `{"metadata": {...}, "records": [{column: value, ...}, ...]}` with record
//! keys in column order.

use std::fmt::Write as _;

use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Real(f64),
    Text(&'static str),
    Bool(bool),
}

pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

impl Cell {
    fn csv(&self) -> String {
        match *self {
            Cell::Int(i) => i.to_string(),
            Cell::Real(v) => format_real(v),
            Cell::Text(s) => s.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

pub fn json_number(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    Value::Number(
        format_real(v)
            .parse::<Number>()
            .expect("formatted float is a JSON number"),
    )
}

fn json_cell(c: Cell) -> Value {
    match c {
        Cell::Int(i) => Value::Number(Number::from(i as u64)),
        Cell::Real(v) => json_number(v),
        Cell::Text(s) => Value::String(s.to_string()),
        Cell::Bool(b) => Value::Bool(b),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
    /// Extra key/values: trailing `# k=v` line in CSV, `metadata.summary` in JSON.
    summary: Vec<(&'static str, f64)>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            summary: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn add_summary(&mut self, key: &'static str, value: f64) {
        self.summary.push((key, value));
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        if !self.summary.is_empty() {
            out.push('#');
            for (k, v) in &self.summary {
                let _ = write!(out, " {k}={}", format_real(*v));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, mut metadata: Map<String, Value>) -> String {
        if !self.summary.is_empty() {
            let summary: Map<String, Value> = self
                .summary
                .iter()
                .map(|(k, v)| (k.to_string(), json_number(*v)))
                .collect();
            metadata.insert("summary".into(), Value::Object(summary));
        }
        let records: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                Value::Object(
                    self.columns
                        .iter()
                        .zip(row)
                        .map(|(c, v)| (c.to_string(), json_cell(*v)))
                        .collect(),
                )
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(metadata));
        doc.insert("records".into(), Value::Array(records));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("serializable");
        s.push('\n');
        s
    }
}
