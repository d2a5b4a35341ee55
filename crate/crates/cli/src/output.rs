use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{Map, Value};

use crate::config::{Format, RunConfig};

/// Rounds to 15 significant digits so every emitted number has one fixed
/// textual form.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(usize),
    Empty,
}

impl Cell {
    pub fn opt(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }

    fn text(&self) -> String {
        match self {
            Cell::Num(x) => round15(*x).to_string(),
            Cell::Int(n) => n.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(n) => Value::from(*n),
            Cell::Empty => Value::Null,
        }
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round15(x)).map_or(Value::Null, Value::Number)
}

/// Rows with a fixed header; rendered as CSV directly and as a list of
/// objects inside the JSON document.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .header
                        .iter()
                        .cloned()
                        .zip(row.iter().map(Cell::json))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn to_csv(&self) -> io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.into_inner().map_err(|e| io::Error::other(e.to_string()))
    }
}

/// What a subcommand produces. `results` overrides the JSON rendering of
/// `table` when the JSON form carries more structure than the flat rows.
pub struct Report {
    pub table: Table,
    pub results: Option<Value>,
    pub diagnostics: Value,
}

pub fn config_json(cfg: &RunConfig) -> Value {
    let mut obj = Map::new();
    obj.insert("q".into(), num(cfg.q));
    obj.insert("g_t".into(), num(cfg.g_t));
    obj.insert("order".into(), Value::from(cfg.order));
    obj.insert("mu_nodes".into(), Value::from(cfg.mu_nodes));
    obj.insert("k_nodes".into(), Value::from(cfg.k_nodes));
    obj.insert("map_scale".into(), num(cfg.map_scale));
    obj.insert("tol".into(), num(cfg.tol));
    obj.insert("oracle".into(), Value::from(cfg.oracle));
    Value::Object(obj)
}

pub fn render(cfg: &RunConfig, report: &Report, extra_config: Value) -> io::Result<Vec<u8>> {
    match cfg.format {
        Format::Csv => report.table.to_csv(),
        Format::Json => {
            let mut config = config_json(cfg);
            if let (Value::Object(base), Value::Object(extra)) = (&mut config, extra_config) {
                base.extend(extra);
            }
            let mut doc = Map::new();
            doc.insert("config".into(), config);
            doc.insert(
                "results".into(),
                report
                    .results
                    .clone()
                    .unwrap_or_else(|| report.table.to_json()),
            );
            doc.insert("diagnostics".into(), report.diagnostics.clone());
            let mut bytes = serde_json::to_vec_pretty(&Value::Object(doc))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(path) => File::create(path)?.write_all(bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_fifteen_digits() {
        assert_eq!(round15(0.1 + 0.2), 0.3);
        assert_eq!(round15(1.321561234567891), 1.32156123456789);
        assert_eq!(round15(-2.5e-300), -2.5e-300);
        assert_eq!(round15(0.0), 0.0);
    }

    #[test]
    fn csv_and_json_agree() {
        let mut t = Table::new(["q", "value", "reference"]);
        t.push(vec![Cell::Num(0.5), Cell::Num(1.0 / 3.0), Cell::Empty]);
        let csv = String::from_utf8(t.to_csv().unwrap()).unwrap();
        assert_eq!(csv, "q,value,reference\n0.5,0.333333333333333,\n");
        let json = t.to_json();
        assert_eq!(json[0]["value"].as_f64(), Some(0.333333333333333));
        assert!(json[0]["reference"].is_null());
    }
}
