use std::io::Write;

use serde::Serialize;
use serde_json::Value;

/// Flat view of a result for `--emit csv`.
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write_to<W: Write>(&self, w: W) -> csv::Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(&self.header)?;
        for r in &self.rows {
            wr.write_record(r)?;
        }
        wr.flush()?;
        Ok(())
    }
}

pub struct Output {
    pub json: Value,
    pub table: Table,
    /// Nonzero when the command ran but its checks failed.
    pub status: i32,
}

impl Output {
    pub fn new<T: Serialize>(report: &T, table: Table) -> Self {
        Output { json: serde_json::to_value(report).expect("report serializes"), table, status: 0 }
    }
}

pub fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": { "kind": kind, "message": message } }).to_string()
}
