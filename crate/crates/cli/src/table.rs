//! Ordered result tables and their CSV / JSON encodings.
//!
//! CSV files open with `# key: <json>` comment lines carrying the metadata,
//! followed by a header row. Floats are written with 17 significant digits in
//! exponent form, so `f64` values survive a round trip bit for bit; integer
//! cells are written plainly and text cells as-is. Empty cells mark values
//! that do not exist at that row (out-of-band points, failed solves).
//!
//! JSON files are a single object `{metadata, columns, rows}` with `null` for
//! empty cells.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};
use thiserror::Error;

pub const TOOL_NAME: &str = "atomic-mirror";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    /// Non-finite values become empty cells.
    pub fn num(x: f64) -> Self {
        if x.is_finite() {
            Cell::Num(x)
        } else {
            Cell::Empty
        }
    }

    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::num)
    }

    pub fn int(x: usize) -> Self {
        Cell::Int(x as i64)
    }

    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(x) => Some(*x as f64),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Cell::Text(s) => Some(s),
            _ => None,
        }
    }

    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn from_csv_field(s: &str) -> Self {
        if s.is_empty() {
            return Cell::Empty;
        }
        if let Ok(i) = s.parse::<i64>() {
            return Cell::Int(i);
        }
        match s.parse::<f64>() {
            Ok(x) => Cell::Num(x),
            Err(_) => Cell::Text(s.to_string()),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) => Value::from(*x),
            Cell::Int(x) => Value::from(*x),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Empty => Value::Null,
        }
    }

    fn from_json(v: &Value) -> Result<Self, TableError> {
        Ok(match v {
            Value::Null => Cell::Empty,
            Value::String(s) => Cell::Text(s.clone()),
            Value::Number(n) => match n.as_i64() {
                Some(i) if !n.is_f64() => Cell::Int(i),
                _ => Cell::Num(
                    n.as_f64()
                        .ok_or_else(|| TableError::Malformed(n.to_string()))?,
                ),
            },
            other => return Err(TableError::Malformed(other.to_string())),
        })
    }
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed table: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub metadata: Map<String, Value>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    /// Empty table whose metadata starts with tool, version and command.
    pub fn new(command: &str, columns: &[&str]) -> Self {
        let mut metadata = Map::new();
        metadata.insert("tool".into(), TOOL_NAME.into());
        metadata.insert("version".into(), TOOL_VERSION.into());
        metadata.insert("command".into(), command.into());
        Self {
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn set_meta(&mut self, key: &str, value: impl Serialize) {
        let value = serde_json::to_value(value).expect("metadata is plain data");
        self.metadata.insert(key.to_string(), value);
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width must match the header"
        );
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// All cells of one column, in row order.
    pub fn column_values(&self, name: &str) -> Option<Vec<&Cell>> {
        let i = self.column(name)?;
        Some(self.rows.iter().map(|r| &r[i]).collect())
    }

    pub fn render(&self, format: Format) -> Result<String, TableError> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_csv(&self) -> Result<String, TableError> {
        let mut out = Vec::new();
        for (key, value) in &self.metadata {
            writeln!(out, "# {key}: {}", serde_json::to_string(value)?)?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        let bytes = w.into_inner().map_err(|e| TableError::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| TableError::Malformed(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String, TableError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::to_json).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("metadata".into(), Value::Object(self.metadata.clone()));
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = serde_json::to_string_pretty(&Value::Object(doc))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_csv(text: &str) -> Result<Self, TableError> {
        let mut metadata = Map::new();
        let mut body_start = 0;
        for line in text.split_inclusive('\n') {
            let Some(rest) = line.strip_prefix('#') else {
                break;
            };
            body_start += line.len();
            let rest = rest.trim();
            let (key, value) = rest
                .split_once(": ")
                .ok_or_else(|| TableError::Malformed(format!("metadata line {rest:?}")))?;
            metadata.insert(key.to_string(), serde_json::from_str(value)?);
        }
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(&text.as_bytes()[body_start..]);
        let columns: Vec<String> = reader.headers()?.iter().map(String::from).collect();
        let mut rows = Vec::new();
        for record in reader.records() {
            rows.push(record?.iter().map(Cell::from_csv_field).collect());
        }
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, TableError> {
        let doc: Value = serde_json::from_str(text)?;
        let missing = |what: &str| TableError::Malformed(format!("missing {what}"));
        let metadata = doc
            .get("metadata")
            .and_then(Value::as_object)
            .ok_or_else(|| missing("metadata"))?
            .clone();
        let columns = doc
            .get("columns")
            .and_then(Value::as_array)
            .ok_or_else(|| missing("columns"))?
            .iter()
            .map(|c| {
                c.as_str()
                    .map(String::from)
                    .ok_or_else(|| missing("column name"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let rows = doc
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| missing("rows"))?
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| missing("row array"))?
                    .iter()
                    .map(Cell::from_json)
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            metadata,
            columns,
            rows,
        })
    }

    /// Parses either encoding, deciding on the first non-blank character.
    pub fn parse(text: &str) -> Result<Self, TableError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_csv(text)
        }
    }
}
