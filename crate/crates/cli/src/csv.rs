//! CSV emission. All numbers are SI, written with 17 significant
//! digits so identical runs produce byte-identical files.

use crate::config::SCHEMA_VERSION;
use std::fmt::Write;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub struct CsvBuilder {
    out: String,
}

impl CsvBuilder {
    pub fn new(columns: &[&str], notes: &[String]) -> Self {
        let mut out = String::new();
        writeln!(out, "# decoherence-kit v{VERSION} schema={SCHEMA_VERSION}").unwrap();
        for note in notes {
            writeln!(out, "# {note}").unwrap();
        }
        writeln!(out, "{}", columns.join(",")).unwrap();
        CsvBuilder { out }
    }

    pub fn row(&mut self, values: &[f64]) {
        let line: Vec<String> = values.iter().map(|v| format_value(*v)).collect();
        writeln!(self.out, "{}", line.join(",")).unwrap();
    }

    pub fn footer(&mut self, note: &str) {
        writeln!(self.out, "# {note}").unwrap();
    }

    pub fn finish(self) -> String {
        self.out
    }
}
