//! Result tables and their CSV/JSON serializations.
//!
//! CSV grammar: `#`-prefixed `# key: value` metadata lines (sorted by key),
//! one header row, then data rows. Numbers are written with 17 significant
//! digits (`{:.16e}`), divergent values as `divergent:<law>` tags, text cells
//! verbatim. JSON mirrors [`ResultTable`].

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::extended::{DivergenceLaw, ExtendedReal};

/// A table cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cell {
    /// Finite number.
    Number(f64),
    /// Divergent quantity with its growth law.
    Divergent(DivergenceLaw),
    /// Text (regime tags, `n/a`).
    Text(String),
}

impl Cell {
    /// Text cell.
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    /// The number, if the cell holds one.
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }

    /// CSV representation.
    pub fn to_csv(&self) -> String {
        match self {
            Cell::Number(v) => format_float(*v),
            Cell::Divergent(law) => ExtendedReal::Divergent(law.clone()).tag(),
            Cell::Text(s) => s.clone(),
        }
    }

    /// Parses a CSV field: numbers become [`Cell::Number`], everything else text.
    pub fn from_csv(field: &str) -> Self {
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => Cell::Number(v),
            _ => Cell::Text(field.to_string()),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        if v.is_finite() {
            Cell::Number(v)
        } else {
            Cell::Text("n/a".into())
        }
    }
}

impl From<ExtendedReal> for Cell {
    fn from(v: ExtendedReal) -> Self {
        match v {
            ExtendedReal::Finite(x) => x.into(),
            ExtendedReal::Divergent(l) => Cell::Divergent(l),
        }
    }
}

/// 17-significant-digit float formatting.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// Rectangular table of results with a metadata block.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    /// Column names.
    pub columns: Vec<String>,
    /// Row-major data.
    pub rows: Vec<Vec<Cell>>,
    /// Metadata (input echo, version, units, regime and divergence tags).
    pub metadata: BTreeMap<String, String>,
}

impl ResultTable {
    /// Empty table with the given columns.
    pub fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    /// Appends a row, checking its width.
    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Config(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds a metadata entry.
    pub fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.metadata.insert(key.to_string(), value.into());
    }

    /// Index of a column.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of a column (non-numeric cells skipped).
    pub fn numbers(&self, name: &str) -> Vec<f64> {
        match self.column(name) {
            Some(j) => self.rows.iter().filter_map(|r| r[j].as_f64()).collect(),
            None => Vec::new(),
        }
    }

    /// Writes the CSV form.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(w, "# {k}: {v}")?;
        }
        let mut wr = csv::WriterBuilder::new().from_writer(w);
        wr.write_record(&self.columns).map_err(csv_err)?;
        for row in &self.rows {
            wr.write_record(row.iter().map(Cell::to_csv)).map_err(csv_err)?;
        }
        wr.flush()?;
        Ok(())
    }

    /// CSV form as a string.
    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        String::from_utf8(buf).map_err(|e| Error::Io(e.to_string()))
    }

    /// Parses the CSV form.
    pub fn from_csv_str(text: &str) -> Result<Self> {
        let mut metadata = BTreeMap::new();
        for line in text.lines().take_while(|l| l.starts_with('#')) {
            let body = line.trim_start_matches('#').trim_start();
            let (k, v) = body
                .split_once(": ")
                .ok_or_else(|| Error::Config(format!("malformed metadata line: {line}")))?;
            metadata.insert(k.to_string(), v.to_string());
        }
        let mut rd = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_reader(text.as_bytes());
        let columns: Vec<String> = rd.headers().map_err(csv_err)?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(csv_err)?;
            rows.push(rec.iter().map(Cell::from_csv).collect());
        }
        Ok(ResultTable {
            columns,
            rows,
            metadata,
        })
    }

    /// JSON form (pretty-printed, stable key order).
    pub fn to_json_string(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    /// Parses the JSON form.
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
