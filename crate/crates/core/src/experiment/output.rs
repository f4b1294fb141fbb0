//! CSV and JSON serialization of sweep rows.
//!
//! The CSV schema is versioned by a leading comment line; columns follow the
//! `SweepRow` field order. Files are written to a temporary sibling and
//! renamed into place so a crashed run never leaves a truncated file.

use std::fs;
use std::io;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

use super::SweepRow;

/// First line of every CSV file this crate writes.
pub const CSV_SCHEMA_TAG: &str = "# cayley-perc v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::domain(format!(
                "unknown output format {other:?}; expected csv or json"
            ))),
        }
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> Result<String> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::domain(format!("csv serialization failed: {e}")))?;
    }
    let body = writer
        .into_inner()
        .map_err(|e| Error::domain(format!("csv flush failed: {e}")))?;
    let body = String::from_utf8(body).expect("csv output is utf-8");
    Ok(format!("{CSV_SCHEMA_TAG}\n{body}"))
}

pub fn rows_to_json(rows: &[SweepRow]) -> Result<String> {
    serde_json::to_string_pretty(rows)
        .map_err(|e| Error::domain(format!("json serialization failed: {e}")))
}

/// Serializes and writes rows atomically (write to `<path>.tmp`, rename).
pub fn write_rows(path: &Path, rows: &[SweepRow], format: OutputFormat) -> Result<()> {
    let payload = match format {
        OutputFormat::Csv => rows_to_csv(rows)?,
        OutputFormat::Json => rows_to_json(rows)?,
    };
    write_atomically(path, payload.as_bytes())
}

pub(super) fn write_atomically(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| io_with_path(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| io_with_path(path, e))
}

fn io_with_path(path: &Path, e: io::Error) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// Reads rows back from a CSV file written by [`write_rows`]; comment lines
/// are skipped.
pub fn read_rows_csv(path: &Path) -> Result<Vec<SweepRow>> {
    let raw = fs::read_to_string(path).map_err(|e| io_with_path(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(raw.as_bytes());
    reader
        .deserialize()
        .map(|r| r.map_err(|e| Error::domain(format!("{}: bad csv row: {e}", path.display()))))
        .collect()
}
