//! Tables, run manifests and the CSV / JSON writers.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Float(f64),
    Text(String),
    /// No value (reference not available for this row).
    Missing,
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn to_csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            // non-finite floats have no JSON form
            Cell::Float(v) => serde_json::Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Missing => Value::Null,
        }
    }
}

/// Rounding leaves probabilities a few ulps below zero; show them as zero.
pub fn clamp_probability(p: f64) -> f64 {
    if p < 0.0 && p > -1e-12 {
        0.0
    } else {
        p
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    /// Headline numbers copied into the manifest.
    pub results: Map<String, Value>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.results.insert(key.to_owned(), value.into());
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub params: Value,
    pub seed: Option<u64>,
    pub version: &'static str,
    pub started: String,
    pub finished: String,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub results: Map<String, Value>,
}

pub fn write_csv<W: Write>(out: W, manifest: &RunManifest, table: &Table) -> Result<(), csv::Error> {
    let mut out = out;
    writeln!(out, "# manifest: {}", serde_json::to_string(manifest).expect("manifest serializes"))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::to_csv))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, manifest: &RunManifest, table: &Table) -> std::io::Result<()> {
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Value> = table
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| ((*k).to_owned(), v.to_json()))
                .collect();
            Value::Object(obj)
        })
        .collect();
    let doc = serde_json::json!({ "manifest": manifest, "rows": rows });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn manifest() -> RunManifest {
        RunManifest {
            subcommand: "test",
            params: serde_json::json!({"a": 1}),
            seed: None,
            version: "0",
            started: "t0".into(),
            finished: "t1".into(),
            results: Map::new(),
        }
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["n", "value", "ref"]);
        t.push(vec![0usize.into(), 0.5.into(), Cell::Missing]);
        let mut buf = Vec::new();
        write_csv(&mut buf, &manifest(), &t).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# manifest: {\"subcommand\":\"test\""));
        assert_eq!(&lines[1..], ["n,value,ref", "0,0.5,"]);
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["n", "value"]);
        t.push(vec![1usize.into(), f64::NAN.into()]);
        let mut buf = Vec::new();
        write_json(&mut buf, &manifest(), &t).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0]["n"], 1);
        assert!(v["rows"][0]["value"].is_null());
        assert_eq!(v["manifest"]["params"]["a"], 1);
    }

    #[test]
    fn clamping() {
        assert_eq!(clamp_probability(-1e-17), 0.0);
        assert_eq!(clamp_probability(-0.1), -0.1);
        assert_eq!(clamp_probability(0.3), 0.3);
    }
}
