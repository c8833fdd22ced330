use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::args::Format;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(u64),
    Flag(bool),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Flag(v)
    }
}

impl Cell {
    fn csv(&self, out: &mut String) {
        match *self {
            // 17 significant digits round-trip every f64.
            Cell::Float(v) => write!(out, "{v:.16e}").unwrap(),
            Cell::Int(v) => write!(out, "{v}").unwrap(),
            Cell::Flag(v) => out.push(if v { '1' } else { '0' }),
        }
    }

    fn json(&self) -> Value {
        match *self {
            Cell::Float(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Flag(v) => json!(v),
        }
    }
}

/// Rows under a fixed header. Every table carries a `converged` column.
#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&'static str]) -> Self {
        debug_assert!(columns.contains(&"converged"));
        Self {
            name: name.into(),
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width for {}", self.name);
        self.rows.push(row);
    }

    pub fn all_converged(&self) -> bool {
        let k = self.columns.iter().position(|c| *c == "converged").unwrap();
        self.rows.iter().all(|r| r[k] == Cell::Flag(true))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut s = String::new();
                s.push_str("# ");
                s.push_str(&self.columns.join(","));
                s.push('\n');
                for row in &self.rows {
                    for (i, cell) in row.iter().enumerate() {
                        if i > 0 {
                            s.push(',');
                        }
                        cell.csv(&mut s);
                    }
                    s.push('\n');
                }
                s
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
                    .collect();
                let doc = json!({
                    "table": self.name,
                    "columns": self.columns,
                    "rows": rows,
                });
                let mut s = serde_json::to_string_pretty(&doc).unwrap();
                s.push('\n');
                s
            }
        }
    }

    pub fn write(&self, format: Format, path: Option<&Path>) -> Result<()> {
        let text = self.render(format);
        match path {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }
}
