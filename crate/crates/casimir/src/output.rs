//! Table assembly and deterministic CSV / JSON serialization.

use std::io::Write;

use serde_json::json;

use crate::config::ScenarioConfig;
use crate::error::{CasimirError, Result};

/// One table cell: numeric data or a label (used by the comparison
/// report's quantity column).
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl Cell {
    fn to_csv_field(&self) -> String {
        match self {
            // 17 significant digits: enough to reproduce any f64 exactly
            Cell::Num(v) => format!("{v:.16e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(v) => json!(v),
            Cell::Int(v) => json!(v),
            Cell::Text(s) => json!(s),
        }
    }
}

/// A named-column table of results, kept in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: Vec<S>) -> Self {
        Table {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(CasimirError::InvalidArgument(format!(
                "row has {} cells, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Comma-separated, header row, LF line endings.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        let io = |e: std::io::Error| CasimirError::InvalidArgument(format!("write failed: {e}"));
        writeln!(w, "{}", self.columns.join(",")).map_err(io)?;
        for row in &self.rows {
            let fields: Vec<String> = row.iter().map(Cell::to_csv_field).collect();
            writeln!(w, "{}", fields.join(",")).map_err(io)?;
        }
        Ok(())
    }

    fn to_json(&self) -> serde_json::Value {
        json!({
            "columns": self.columns,
            "rows": self.rows
                .iter()
                .map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        })
    }

    /// One top-level object carrying the echoed config alongside the data.
    pub fn write_json<W: Write>(&self, config: &ScenarioConfig, w: &mut W) -> Result<()> {
        let doc = json!({
            "config": config,
            "columns": self.to_json()["columns"],
            "rows": self.to_json()["rows"],
        });
        serde_json::to_writer_pretty(&mut *w, &doc)
            .map_err(|e| CasimirError::InvalidArgument(format!("write failed: {e}")))?;
        writeln!(w).map_err(|e| CasimirError::InvalidArgument(format!("write failed: {e}")))?;
        Ok(())
    }
}
