use std::fmt::Write as _;
use std::io;
use std::path::PathBuf;

use hurwitz_core::tuple::TupleFileError;
use serde::Serialize;
use thiserror::Error;

use crate::args::Format;

/// Exit code 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Positive,
    Negative,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Positive
        } else {
            Status::Negative
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Positive => 0,
            Status::Negative => 1,
        }
    }
}

/// A finished command: one machine rendering and one human rendering of the
/// same record.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub status: Status,
    pub json: String,
    pub table: String,
}

/// Human rendering of a report record.
pub trait Table {
    fn table(&self) -> String;
}

impl Report {
    pub fn from_record<T: Serialize + Table>(record: &T, status: Status) -> Self {
        let mut json = serde_json::to_string(record).expect("report records serialize");
        json.push('\n');
        Report {
            status,
            json,
            table: record.table(),
        }
    }

    pub fn render(&self, format: Format) -> &str {
        match format {
            Format::Json => &self.json,
            Format::Table => &self.table,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    TupleFile {
        path: PathBuf,
        source: TupleFileError,
    },
    /// The input was well formed but the requested operation does not apply.
    #[error("{0}")]
    Rejected(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Rejected(_) => 1,
            _ => 2,
        }
    }
}

/// Left-aligned two-column key/value block.
pub fn key_values(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in rows {
        let _ = writeln!(out, "{k:<width$}  {v}");
    }
    out
}

/// Column table with a header row; every row must have the header's width.
pub fn columns(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string()
    };
    let mut out = String::new();
    let _ = writeln!(out, "{}", line(header.to_vec()));
    let _ = writeln!(
        out,
        "{}",
        line(widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>().iter().map(String::as_str).collect())
    );
    for row in rows {
        let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
    }
    out
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}
