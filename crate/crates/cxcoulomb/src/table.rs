//! Tabular output shared by all commands.
//!
//! Floating-point values are rounded to nine significant digits and printed
//! in their shortest round-trip form, so output is byte-stable for fixed
//! inputs.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::RunError;

/// Significant digits of every printed float.
pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds `x` to nine significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Nine-significant-digit text for `x`; empty for NaN.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        let r = round_sig(x);
        if r == 0.0 {
            "0".to_owned()
        } else if r.abs() < 1e-4 || r.abs() >= 1e15 {
            format!("{r:e}")
        } else {
            r.to_string()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Float(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Float(x) => serde_json::Number::from_f64(round_sig(*x)).map_or(Value::Null, Value::Number),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<i32> for Cell {
    fn from(x: i32) -> Self {
        Cell::Int(i64::from(x))
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Rows under fixed column names plus free-form diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub diagnostics: Vec<String>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
            diagnostics: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// CSV with a header row. Diagnostics are not part of the CSV body.
    pub fn write_csv(&self, out: impl Write) -> Result<(), RunError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::text))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"config": .., "rows": [{column: value}], "diagnostics": [..]}`.
    pub fn write_json(&self, config: &impl Serialize, mut out: impl Write) -> Result<(), RunError> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let map: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(c, v)| ((*c).to_owned(), v.json()))
                    .collect();
                Value::Object(map)
            })
            .collect();
        let doc = serde_json::json!({
            "config": config,
            "rows": rows,
            "diagnostics": self.diagnostics,
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        writeln!(out)?;
        Ok(())
    }

    /// Writes in `format`; for CSV the diagnostics go to `diag`.
    pub fn write(
        &self,
        format: Format,
        config: &impl Serialize,
        out: impl Write,
        mut diag: impl Write,
    ) -> Result<(), RunError> {
        match format {
            Format::Csv => {
                self.write_csv(out)?;
                for d in &self.diagnostics {
                    writeln!(diag, "{d}")?;
                }
                Ok(())
            }
            Format::Json => self.write_json(config, out),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nine_significant_digits() {
        assert_eq!(format_float(5.0 / 3.0), "1.66666667");
        assert_eq!(format_float(2f64.sqrt()), "1.41421356");
        assert_eq!(format_float(-101.0 / 99.0), "-1.02020202");
        assert_eq!(format_float(1.25), "1.25");
        assert_eq!(format_float(0.0), "0");
        assert_eq!(format_float(f64::NAN), "");
        assert_eq!(format_float(123456789012.0), "123456789000");
        assert_eq!(format_float(1.0506762126e-9), "1.05067621e-9");
        assert_eq!(format_float(-2.5e20), "-2.5e20");
    }

    #[test]
    fn csv_and_json_shapes() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec![Cell::from(1.0 / 3.0), Cell::from("x")]);
        t.diagnostics.push("note".into());
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        assert_eq!(String::from_utf8(csv).unwrap(), "a,b\n0.333333333,x\n");
        let mut json = Vec::new();
        t.write_json(&serde_json::json!({"k": 1}), &mut json).unwrap();
        let v: Value = serde_json::from_slice(&json).unwrap();
        assert_eq!(v["rows"][0]["a"], Value::from(0.333333333));
        assert_eq!(v["diagnostics"][0], "note");
        assert_eq!(v["config"]["k"], 1);
    }
}
