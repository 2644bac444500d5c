//! Tabular and JSON rendering.

use std::io::Write;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;
use crate::Result;

/// One CSV field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Empty,
    Int(i128),
    Real(f64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Real)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

/// Real number with 17 significant digits and a `.` decimal point.
pub fn format_real(v: f64) -> String {
    if v.is_nan() {
        "NaN".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format_real(*v),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of column `name`.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Output of a subcommand in both renderings.
#[derive(Debug, Clone)]
pub struct Report {
    pub table: Table,
    pub json: Value,
}

/// Metadata carried by every JSON report.
#[derive(Debug, Serialize)]
pub struct Meta<'a, C: Serialize> {
    pub version: &'static str,
    pub config: &'a C,
    pub seed_scheme: &'static str,
}

pub const SEED_SCHEME: &str = "ChaCha8 keyed by seed_from_u64(seed) with stream ids; \
replication i uses seed = first u64 of stream 2^32 + i of the master seed; \
within a replication, samples use stream 0, probes stream 1, family draws stream 2";

pub fn meta<C: Serialize>(config: &C) -> Meta<'_, C> {
    Meta {
        version: env!("CARGO_PKG_VERSION"),
        config,
        seed_scheme: SEED_SCHEME,
    }
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.table.to_csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                Ok(s)
            }
        }
    }

    /// Write to `out`, or stdout when `None`.
    pub fn emit(&self, format: Format, out: Option<&Path>) -> Result<()> {
        let text = self.render(format)?;
        match out {
            Some(p) => std::fs::write(p, text)?,
            None => std::io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_have_seventeen_digits() {
        assert_eq!(format_real(0.25), "2.5000000000000000e-1");
        assert_eq!(format_real(108.0), "1.0800000000000000e2");
        let x = 0.1 + 0.2;
        assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
        assert_eq!(format_real(f64::NAN), "NaN");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(vec!["a", "b", "c"]);
        t.push(vec![Cell::Int(1), 0.5.into(), Cell::Empty]);
        t.push(vec!["x,y".into(), true.into(), Cell::Real(-2.0)]);
        assert_eq!(
            t.to_csv().unwrap(),
            "a,b,c\n1,5.0000000000000000e-1,\n\"x,y\",true,-2.0000000000000000e0\n"
        );
    }
}
