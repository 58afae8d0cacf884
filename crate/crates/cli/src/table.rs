//! Result tables and their CSV / JSON encodings.

use std::io::Write;

use crate::config::Config;
use crate::error::CliResult;

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    /// Exact values too large for a machine word, and free text.
    Text(String),
}

impl Value {
    /// Floats use the shortest digits that round-trip, in exponent form when tiny or huge.
    pub fn render(&self) -> String {
        match self {
            Value::Int(v) => v.to_string(),
            Value::Float(v) => {
                let a = v.abs();
                if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
                    v.to_string()
                } else {
                    format!("{v:e}")
                }
            }
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Int(v) => (*v).into(),
            Value::Float(v) => serde_json::Number::from_f64(*v)
                .map(serde_json::Value::Number)
                .unwrap_or_else(|| serde_json::Value::String(v.to_string())),
            Value::Bool(v) => (*v).into(),
            Value::Text(s) => s.clone().into(),
        }
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<u32> for Value {
    fn from(v: u32) -> Self {
        Value::Int(v as i64)
    }
}

impl From<u64> for Value {
    fn from(v: u64) -> Self {
        i64::try_from(v).map(Value::Int).unwrap_or_else(|_| Value::Text(v.to_string()))
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::from(v as u64)
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Float(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?}, expected csv or json")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// `# key=value` lines carrying the full config, then the header and rows.
    pub fn write_csv(&self, experiment: &str, config: &Config, out: impl Write) -> CliResult<()> {
        let mut out = out;
        writeln!(out, "# experiment={experiment}")?;
        for (k, v) in config.entries() {
            writeln!(out, "# {k}={v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Value::render))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self, experiment: &str, config: &Config) -> serde_json::Value {
        let mut cfg = serde_json::Map::new();
        cfg.insert("experiment".into(), experiment.into());
        for (k, v) in config.entries() {
            cfg.insert(k.into(), v.into());
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let obj: serde_json::Map<String, serde_json::Value> = self
                    .columns
                    .iter()
                    .zip(r)
                    .map(|(c, v)| (c.to_string(), v.to_json()))
                    .collect();
                serde_json::Value::Object(obj)
            })
            .collect();
        serde_json::json!({ "config": cfg, "rows": serde_json::Value::Array(rows) })
    }

    pub fn write(&self, format: Format, experiment: &str, config: &Config, mut out: impl Write) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(experiment, config, out),
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json(experiment, config))?;
                writeln!(out)?;
                Ok(())
            }
        }
    }
}
