//! The output envelope and its JSON and CSV renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::ser::{Serialize, Serializer};
use serde_json::Value;

use crate::error::CliError;

pub const FORMAT_VERSION: &str = "1.0.0";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One table cell. Infinite values are written as the string `"inf"`,
/// missing ones as JSON `null` or an empty CSV field.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
    Text(String),
    Missing,
}

impl Cell {
    fn render_csv(&self) -> String {
        match self {
            Cell::Int(i) => i.to_string(),
            Cell::Num(x) if x.is_finite() => serde_json::to_string(x).expect("finite float"),
            Cell::Num(x) => non_finite(*x).to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }
}

fn non_finite(x: f64) -> &'static str {
    if x.is_nan() {
        "nan"
    } else if x > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Int(i) => s.serialize_u64(*i as u64),
            Cell::Num(x) if x.is_finite() => s.serialize_f64(*x),
            Cell::Num(x) => s.serialize_str(non_finite(*x)),
            Cell::Text(t) => s.serialize_str(t),
            Cell::Missing => s.serialize_none(),
        }
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Table {
    /// Matrix dimension, for payloads listing `(row, col, value)` entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            dim: None,
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    /// `(row, col, value)` entries, row-major.
    pub fn entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let mut t = Self::new(["row", "col", "value"]);
        t.dim = Some(dim);
        t.rows = entries
            .into_iter()
            .map(|(i, j, v)| vec![Cell::Int(i), Cell::Int(j), Cell::Num(v)])
            .collect();
        t
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct Envelope {
    pub command: &'static str,
    pub params: BTreeMap<&'static str, Value>,
    pub format_version: &'static str,
    pub index_base: usize,
    pub payload: Table,
    pub provenance: BTreeMap<&'static str, &'static str>,
}

impl Envelope {
    pub fn new(command: &'static str, payload: Table, reproduces: &'static str) -> Self {
        Self {
            command,
            params: BTreeMap::new(),
            format_version: FORMAT_VERSION,
            index_base: 0,
            payload,
            provenance: BTreeMap::from([("payload", reproduces)]),
        }
    }

    pub fn param(mut self, key: &'static str, value: impl Into<Value>) -> Self {
        self.params.insert(key, value.into());
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.payload.columns)?;
                for row in &self.payload.rows {
                    w.write_record(row.iter().map(Cell::render_csv))?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}
