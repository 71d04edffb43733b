//! CSV tables: a header row, rationals as `p/q`, reals as shortest round-trip decimals.

use std::fmt::Display;

use laakso_core::Rational;

pub fn rat(r: Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_opt(r: Option<Rational>) -> String {
    r.map(rat).unwrap_or_default()
}

/// Shortest string that parses back to the same `f64`, with an exponent for very small or large magnitudes.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Clone, Debug)]
pub struct Table {
    name: String,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        Self { name: name.into(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width in {}", self.name);
        self.rows.push(row);
    }

    pub fn row(&mut self, cells: &[&dyn Display]) {
        self.push(cells.iter().map(|c| c.to_string()).collect());
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out.into_bytes()
    }
}
