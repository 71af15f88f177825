//! Tabular output as CSV or as JSON `{"meta": {...}, "data": [...]}`.
//!
//! Reals are printed with 17 significant digits in scientific notation so
//! that every value round-trips exactly.

use std::io::Write;

use anyhow::Result;
use clap::ValueEnum;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
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

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
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

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

pub fn real(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_owned()
    } else if v > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(v) => real(*v),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(v) if v.is_finite() => Value::Number(real(*v).parse::<Number>().expect("formatted real is valid JSON")),
            Cell::Num(_) | Cell::Empty => Value::Null,
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

/// Result of a command: column names, rows and the parameters that produced them.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub command: String,
    pub parameters: Vec<(String, Cell)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &str, columns: &[&'static str]) -> Self {
        Table { command: command.to_owned(), columns: columns.to_vec(), ..Default::default() }
    }

    pub fn param(mut self, name: &str, value: impl Into<Cell>) -> Self {
        self.parameters.push((name.to_owned(), value.into()));
        self
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(Cell::csv))?;
                }
                Ok(w.into_inner()?)
            }
            Format::Json => {
                let params: Map<String, Value> = self.parameters.iter().map(|(k, v)| (k.clone(), v.json())).collect();
                let mut meta = Map::new();
                meta.insert("command".into(), Value::String(self.command.clone()));
                meta.insert("parameters".into(), Value::Object(params));
                meta.insert("version".into(), Value::String(env!("CARGO_PKG_VERSION").into()));
                let data = self
                    .rows
                    .iter()
                    .map(|row| {
                        Value::Object(self.columns.iter().map(|c| c.to_string()).zip(row.iter().map(Cell::json)).collect())
                    })
                    .collect();
                let mut root = Map::new();
                root.insert("meta".into(), Value::Object(meta));
                root.insert("data".into(), Value::Array(data));
                let mut out = serde_json::to_vec(&Value::Object(root))?;
                out.push(b'\n');
                Ok(out)
            }
        }
    }

    pub fn write(&self, format: Format, out: Option<&std::path::Path>) -> Result<()> {
        let bytes = self.render(format)?;
        match out {
            Some(path) => std::fs::write(path, bytes)?,
            None => std::io::stdout().lock().write_all(&bytes)?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo", &["a", "b", "c"]).param("r", 0.1).param("mode", "x");
        t.push(vec![Cell::Num(1.0), Cell::Text("p,q".into()), Cell::Empty]);
        t.push(vec![Cell::Num(-2.5e-300), Cell::Int(3), Cell::Num(f64::NAN)]);
        t
    }

    #[test]
    fn csv_layout() {
        let s = String::from_utf8(sample().render(Format::Csv).unwrap()).unwrap();
        assert_eq!(s, "a,b,c\n1.0000000000000000e0,\"p,q\",\n-2.5000000000000000e-300,3,NaN\n");
    }

    #[test]
    fn json_round_trips_bytewise() {
        let bytes = sample().render(Format::Json).unwrap();
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        let mut again = serde_json::to_vec(&v).unwrap();
        again.push(b'\n');
        assert_eq!(bytes, again);
        assert_eq!(v["meta"]["command"], "demo");
        assert_eq!(v["data"][0]["a"].as_f64(), Some(1.0));
    }

    #[test]
    fn reals_round_trip() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt() * 1e-200, f64::MAX, 5e-324] {
            assert_eq!(real(v).parse::<f64>().unwrap(), v);
        }
    }
}
