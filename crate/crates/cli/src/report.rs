//! Report assembly and emission. Reports carry exact values as strings and
//! never include timing, so identical inputs give identical bytes.

use serde_json::{json, Map, Value};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

/// A table of rows plus summary fields. `csv_header` fixes the CSV column
/// order; each row is kept both as JSON and as CSV cells.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub job: Vec<String>,
    pub provenance: Map<String, Value>,
    pub csv_header: Vec<&'static str>,
    pub csv_rows: Vec<Vec<String>>,
    pub rows: Vec<Value>,
    pub summary: Map<String, Value>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str, job: Vec<String>, csv_header: Vec<&'static str>) -> Self {
        Report {
            command: command.to_string(),
            job,
            provenance: Map::new(),
            csv_header,
            csv_rows: Vec::new(),
            rows: Vec::new(),
            summary: Map::new(),
            warnings: Vec::new(),
        }
    }

    pub fn push(&mut self, json_row: Value, csv_row: Vec<String>) {
        debug_assert_eq!(csv_row.len(), self.csv_header.len());
        self.rows.push(json_row);
        self.csv_rows.push(csv_row);
    }

    pub fn provenance(&mut self, key: &str, v: impl Into<Value>) {
        self.provenance.insert(key.to_string(), v.into());
    }

    pub fn summary(&mut self, key: &str, v: impl Into<Value>) {
        self.summary.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "job": self.job,
            "provenance": self.provenance,
            "rows": self.rows,
            "summary": self.summary,
            "warnings": self.warnings,
        });
        serde_json::to_string_pretty(&v).expect("serializable") + "\n"
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.csv_header).expect("in-memory write");
        for r in &self.csv_rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn render(&self, format: OutFormat) -> String {
        match format {
            OutFormat::Csv => self.to_csv(),
            OutFormat::Json => self.to_json(),
        }
    }
}

/// Formats a value with `Display` as a CSV cell.
pub fn cell(v: impl std::fmt::Display) -> String {
    v.to_string()
}
