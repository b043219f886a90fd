//! CSV and JSON encodings for paths and sample arrays. Floats are written
//! with Rust's shortest round-trip formatting, so every value reads back
//! bit-identically.

use std::io::{Read, Write};

use serde::Serialize;

use crate::tar_model::Path;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Format(String),
}

/// Columns `t,Y_t,eps_t`; the `t = 0` row has an empty innovation.
pub fn write_path_csv<W: Write>(path: &Path, out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "Y_t", "eps_t"])?;
    for (t, y) in path.values().iter().enumerate() {
        let eps = if t == 0 {
            String::new()
        } else {
            path.innovations()[t - 1].to_string()
        };
        w.write_record([t.to_string(), y.to_string(), eps])?;
    }
    w.flush()?;
    Ok(())
}

/// Path with parameters and seed provenance embedded.
pub fn write_path_json<W: Write>(path: &Path, out: W) -> Result<(), IoError> {
    serde_json::to_writer_pretty(out, path)?;
    Ok(())
}

pub fn read_path_json<R: Read>(input: R) -> Result<Path, IoError> {
    Ok(serde_json::from_reader(input)?)
}

/// Reads a numeric series from CSV. A header row is detected when its first
/// field is not a number; the column named `Y_t` (or `y`, `value`) is used
/// if present, otherwise the first column.
pub fn read_series_csv<R: Read>(input: R) -> Result<Vec<f64>, IoError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut records = rdr.records();
    let mut column = 0;
    let mut series = Vec::new();
    if let Some(first) = records.next() {
        let first = first?;
        let cell = first.get(0).unwrap_or("");
        if cell.parse::<f64>().is_ok() {
            series.push(parse_cell(&first, 0, 1)?);
        } else {
            column = first
                .iter()
                .position(|h| matches!(h, "Y_t" | "y" | "Y" | "value"))
                .unwrap_or(0);
        }
    }
    for (i, rec) in records.enumerate() {
        series.push(parse_cell(&rec?, column, i + 2)?);
    }
    Ok(series)
}

fn parse_cell(rec: &csv::StringRecord, column: usize, line: usize) -> Result<f64, IoError> {
    let cell = rec
        .get(column)
        .ok_or_else(|| IoError::Format(format!("line {line}: missing column {column}")))?;
    cell.parse::<f64>()
        .map_err(|_| IoError::Format(format!("line {line}: `{cell}` is not a number")))
}

/// One sample per line under a single header.
pub fn write_samples_csv<W: Write>(header: &str, samples: &[f64], out: W) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([header])?;
    for s in samples {
        w.write_record([s.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize, W: Write>(value: &T, out: W) -> Result<(), IoError> {
    serde_json::to_writer_pretty(out, value)?;
    Ok(())
}
