//! CSV input and output. The results format is one header row
//! `dataset,d1,...,dn` followed by one row per data set: a string id and
//! n = runs*folds fold accuracy differences in run-major order.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use hiertest::data::{CrossValMatrix, DataError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("bad header: {0}")]
    Header(String),
    #[error("row {line}, column {col}: cannot parse `{value}` as a number")]
    Cell {
        line: u64,
        col: usize,
        value: String,
    },
    #[error("row {line}, column {col}: value {value} is outside [{lo}, {hi}]")]
    Range {
        line: u64,
        col: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("score files do not match: {0}")]
    ScoreShape(String),
}

struct Table {
    names: Vec<String>,
    rows: Vec<Vec<f64>>,
}

/// Parse a rectangular named-row CSV, validating every cell against the
/// closed interval [lo, hi].
fn parse_table(path: &Path, lo: f64, hi: f64) -> Result<Table, IoError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.is_empty() || headers.get(0) != Some("dataset") {
        return Err(IoError::Header(
            "first header column must be `dataset`".into(),
        ));
    }
    if headers.len() < 2 {
        return Err(IoError::Header("no fold columns found".into()));
    }

    let mut names = Vec::new();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        let name = record.get(0).unwrap_or_default().to_string();
        let mut row = Vec::with_capacity(record.len().saturating_sub(1));
        for (i, cell) in record.iter().enumerate().skip(1) {
            let value: f64 = cell.parse().map_err(|_| IoError::Cell {
                line,
                col: i + 1,
                value: cell.to_string(),
            })?;
            if !value.is_finite() || value < lo || value > hi {
                return Err(IoError::Range {
                    line,
                    col: i + 1,
                    value,
                    lo,
                    hi,
                });
            }
            row.push(value);
        }
        names.push(name);
        rows.push(row);
    }
    Ok(Table { names, rows })
}

/// Parse a results file of fold accuracy differences.
pub fn parse_results(path: &Path, runs: usize, folds: usize) -> Result<CrossValMatrix, IoError> {
    let table = parse_table(path, -1.0, 1.0)?;
    Ok(CrossValMatrix::new(table.rows, runs, folds, table.names)?)
}

/// Convenience two-file mode: per-classifier fold scores in [0, 1] with
/// identical layouts; the matrix of differences a - b is built after
/// validating that the data set ids and shapes agree.
pub fn parse_score_pair(
    path_a: &Path,
    path_b: &Path,
    runs: usize,
    folds: usize,
) -> Result<CrossValMatrix, IoError> {
    let a = parse_table(path_a, 0.0, 1.0)?;
    let b = parse_table(path_b, 0.0, 1.0)?;
    if a.names != b.names {
        return Err(IoError::ScoreShape(
            "data set ids differ between the two files".into(),
        ));
    }
    if a.rows.len() != b.rows.len()
        || a.rows
            .iter()
            .zip(&b.rows)
            .any(|(ra, rb)| ra.len() != rb.len())
    {
        return Err(IoError::ScoreShape(
            "fold counts differ between the two files".into(),
        ));
    }
    let diffs = a
        .rows
        .iter()
        .zip(&b.rows)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect();
    Ok(CrossValMatrix::new(diffs, runs, folds, a.names)?)
}

/// Write a matrix in the standard results format.
pub fn write_matrix<W: Write>(mut w: W, matrix: &CrossValMatrix) -> Result<(), IoError> {
    write!(w, "dataset")?;
    for j in 1..=matrix.n() {
        write!(w, ",d{j}")?;
    }
    writeln!(w)?;
    for (name, row) in matrix.names().iter().zip(matrix.rows()) {
        write!(w, "{name}")?;
        for v in row {
            write!(w, ",{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

pub fn write_matrix_file(path: &Path, matrix: &CrossValMatrix) -> Result<(), IoError> {
    let file = File::create(path)?;
    write_matrix(file, matrix)
}

/// Write an (x, density) curve as CSV.
pub fn write_density_file(path: &Path, points: &[(f64, f64)]) -> Result<(), IoError> {
    let mut file = File::create(path)?;
    writeln!(file, "x,density")?;
    for (x, d) in points {
        writeln!(file, "{x},{d}")?;
    }
    Ok(())
}
