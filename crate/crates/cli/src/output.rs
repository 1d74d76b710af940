use std::io::Write;

use serde::Serialize;
use serde_json::Value;

use crate::cli::Format;
use crate::error::CliError;

/// A command's result: JSON objects, one per line, and optionally a CSV table.
#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<Value>,
    pub table: Option<Table>,
}

#[derive(Debug)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn single(v: &impl Serialize) -> Result<Self, CliError> {
        Ok(Report { lines: vec![serde_json::to_value(v)?], table: None })
    }

    pub fn with_table(mut self, header: Vec<&'static str>, rows: Vec<Vec<String>>) -> Self {
        self.table = Some(Table { header, rows });
        self
    }

    pub fn write(&self, format: Format, command: &str, out: &mut impl Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                for line in &self.lines {
                    serde_json::to_writer(&mut *out, line)?;
                    writeln!(out)?;
                }
            }
            Format::Csv => {
                let Some(t) = &self.table else {
                    return Err(CliError::Usage(format!("{command} has no CSV output")));
                };
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&t.header)?;
                for row in &t.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Joins list values inside one CSV cell.
pub fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

pub fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(ToString::to_string).unwrap_or_default()
}
