//! Machine-readable output: JSON documents and CSV tables.

use serde::Serialize;
use serde_json::Value;

use crate::config::Format;

/// A floating-point quantity with the bound it is held to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Field {
    pub value: f64,
    pub tolerance: f64,
    /// `upper`: pass iff `value <= tolerance`; `lower`: pass iff `value >= tolerance`.
    pub bound: Bound,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    Upper,
    Lower,
}

impl Field {
    pub fn at_most(value: f64, tolerance: f64) -> Self {
        Self { value, tolerance, bound: Bound::Upper, pass: value <= tolerance }
    }

    pub fn at_least(value: f64, tolerance: f64) -> Self {
        Self { value, tolerance, bound: Bound::Lower, pass: value >= tolerance }
    }

    /// A computed value with its claimed relative accuracy; passes when finite.
    pub fn computed(value: f64, tolerance: f64) -> Self {
        Self { value, tolerance, bound: Bound::Upper, pass: value.is_finite() }
    }
}

/// Formats with 12 significant digits, `.` as decimal separator.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() { "nan".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exponent) {
        format!("{:.*}", (11 - exponent) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Num(f64),
    Bool(bool),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Text(s) => {
                if s.contains([',', '"', '\n']) {
                    format!("\"{}\"", s.replace('"', "\"\""))
                } else {
                    s.clone()
                }
            }
            Cell::Int(n) => n.to_string(),
            Cell::Num(x) => sig12(*x),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n as i128)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(n as i128)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
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

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Output of one command; `passed` is `Some` only for verification runs.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub table: Table,
    pub passed: Option<bool>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("report is valid JSON");
                s.push('\n');
                s
            }
            Format::Csv => self.table.to_csv(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(1.0), "1.00000000000");
        assert_eq!(sig12(1.0 / 3.0), "0.333333333333");
        assert_eq!(sig12(-2.5e-7), "-2.50000000000e-7");
        assert_eq!(sig12(123456.0), "123456.000000");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn csv_quotes_text_with_commas() {
        let mut t = Table::new(vec!["a", "b"]);
        t.push(vec!["x,y".into(), 0.5.into()]);
        assert_eq!(t.to_csv(), "a,b\n\"x,y\",0.500000000000\n");
    }

    #[test]
    fn field_bounds() {
        assert!(Field::at_most(1e-9, 1e-8).pass);
        assert!(!Field::at_most(f64::NAN, 1e-8).pass);
        assert!(Field::at_least(4.0, 2.0).pass);
        assert!(!Field::at_least(1.5, 2.0).pass);
    }
}
