//! Deterministic CSV and JSON emission.

use std::fmt::Write as _;

use serde_json::Value;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self, out: &mut String) {
        match self {
            // 17 significant digits round-trip every f64
            Cell::Num(v) if v.is_finite() => write!(out, "{v:.16e}").unwrap(),
            Cell::Num(v) if v.is_nan() => out.push_str("NaN"),
            Cell::Num(v) => out.push_str(if *v > 0.0 { "inf" } else { "-inf" }),
            Cell::Int(v) => write!(out, "{v}").unwrap(),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// CSV with the provenance block as a leading `#` comment line.
    pub fn to_csv(&self, provenance: &Value) -> String {
        let mut out = String::new();
        out.push_str("# ");
        out.push_str(&serde_json::to_string(provenance).unwrap());
        out.push('\n');
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            for (k, cell) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}

/// Pretty JSON with a trailing newline; non-finite numbers become `null`.
pub fn to_json(mut body: Value, provenance: Value) -> String {
    if let Value::Object(map) = &mut body {
        map.insert("provenance".into(), provenance);
    }
    let mut s = serde_json::to_string_pretty(&body).unwrap();
    s.push('\n');
    s
}
