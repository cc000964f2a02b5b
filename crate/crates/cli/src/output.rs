//! Machine-readable report emission: CSV with a config-echo header line,
//! or a {config, rows} JSON envelope. Every byte is a deterministic
//! function of the flags and seed.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputSpec {
    pub format: Format,
    /// File path, or `-` for stdout.
    pub destination: String,
    /// Significant digits, 6..=17.
    pub precision: usize,
}

impl OutputSpec {
    pub fn validate(&self) -> anyhow::Result<()> {
        if !(6..=17).contains(&self.precision) {
            anyhow::bail!("precision must be within 6..=17, got {}", self.precision);
        }
        Ok(())
    }

    fn writer(&self) -> io::Result<Box<dyn Write>> {
        if self.destination == "-" {
            Ok(Box::new(io::stdout().lock()))
        } else {
            Ok(Box::new(File::create(PathBuf::from(&self.destination))?))
        }
    }
}

/// One table cell. Floats render with fixed significant digits so output
/// bytes do not depend on platform formatting quirks.
#[derive(Debug, Clone)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    Empty,
}

impl Cell {
    fn to_csv(&self, precision: usize) -> String {
        match self {
            Cell::Float(v) => fmt_float(*v, precision),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self, precision: usize) -> Value {
        match self {
            // serialized as a string to keep digits stable across readers
            Cell::Float(v) => Value::String(fmt_float(*v, precision)),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn fmt_float(v: f64, precision: usize) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{:.*e}", precision.saturating_sub(1), v)
    }
}

/// A finished report: column names, rows, and optional named extras
/// (summary scalars, diagnostics).
pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub extras: Vec<(String, Value)>,
}

impl Report {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new(), extras: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extra(&mut self, key: &str, value: Value) {
        self.extras.push((key.to_string(), value));
    }

    pub fn emit(&self, spec: &OutputSpec, config: &Value) -> anyhow::Result<()> {
        let mut w = spec.writer()?;
        match spec.format {
            Format::Csv => {
                let envelope = json!({
                    "artifact": "suparea",
                    "version": suparea::VERSION,
                    "config": config,
                });
                writeln!(w, "# {envelope}")?;
                for (key, value) in &self.extras {
                    writeln!(w, "# {key}: {value}")?;
                }
                writeln!(w, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> =
                        row.iter().map(|c| c.to_csv(spec.precision)).collect();
                    writeln!(w, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (name, cell) in self.columns.iter().zip(row) {
                            obj.insert(name.to_string(), cell.to_json(spec.precision));
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut root = Map::new();
                root.insert("artifact".into(), json!("suparea"));
                root.insert("version".into(), json!(suparea::VERSION));
                root.insert("config".into(), config.clone());
                for (key, value) in &self.extras {
                    root.insert(key.clone(), value.clone());
                }
                root.insert("rows".into(), Value::Array(rows));
                writeln!(w, "{}", serde_json::to_string_pretty(&Value::Object(root))?)?;
            }
        }
        Ok(())
    }
}
