// SPDX-License-Identifier: Apache-2.0

//! Validated emission. Nothing is written until the whole document has
//! passed its checks; files are replaced atomically.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Text(&'static str),
    Empty,
}

/// Floats carry 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug)]
pub struct Table {
    pub header: &'static [&'static str],
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &'static [&'static str]) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        self.rows.push(row);
    }

    /// Fixed column count, finite floats, and a strictly increasing
    /// leading time column.
    pub fn validate(&self) -> Result<(), CliError> {
        let mut last = f64::NEG_INFINITY;
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.header.len() {
                return Err(CliError::internal(format!(
                    "row {i} has {} fields, expected {}",
                    row.len(),
                    self.header.len()
                )));
            }
            for (cell, name) in row.iter().zip(self.header) {
                if let Cell::Float(x) = cell {
                    if !x.is_finite() {
                        return Err(CliError::internal(format!("row {i}: column `{name}` is {x}")));
                    }
                }
            }
            match row.first() {
                Some(Cell::Float(t)) if *t > last => last = *t,
                other => {
                    return Err(CliError::internal(format!(
                        "row {i}: time column not increasing ({other:?})"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        self.validate()?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::internal(e);
        w.write_record(self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Float(x) => fmt_float(*x),
                Cell::Text(s) => (*s).to_owned(),
                Cell::Empty => String::new(),
            }))
            .map_err(io)?;
        }
        w.into_inner().map_err(|e| CliError::internal(e.error()))
    }
}

/// Rejects non-finite values before JSON serialization (which would
/// silently turn them into `null`).
pub fn check_finite<'a>(values: impl IntoIterator<Item = (&'a str, f64)>) -> Result<(), CliError> {
    for (name, v) in values {
        if !v.is_finite() {
            return Err(CliError::internal(format!("`{name}` is {v}")));
        }
    }
    Ok(())
}

pub fn write(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| CliError::config("output", e));
    };
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    fs::write(&tmp, bytes)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| {
            let _ = fs::remove_file(&tmp);
            CliError::config("output.path", format!("{}: {e}", path.display()))
        })
}
