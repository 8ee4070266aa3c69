//! Matrix file reading and writing.
//!
//! CSV files hold one or more square matrices: one row per line of
//! comma-separated decimal numbers, matrices separated by a blank line.
//! JSON files hold an array of matrices, each an array of rows. Output
//! numbers use 17 significant digits so every value round-trips exactly.

use std::fmt::Write as _;
use std::path::Path;

use nalgebra::DMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum FileFormat {
    Csv,
    Json,
}

impl FileFormat {
    pub fn label(self) -> &'static str {
        match self {
            FileFormat::Csv => "csv",
            FileFormat::Json => "json",
        }
    }

    /// Picks the format from an explicit choice or the file extension,
    /// defaulting to CSV.
    pub fn infer(explicit: Option<FileFormat>, path: &Path) -> FileFormat {
        explicit.unwrap_or_else(|| {
            match path.extension().and_then(|e| e.to_str()) {
                Some(ext) if ext.eq_ignore_ascii_case("json") => FileFormat::Json,
                _ => FileFormat::Csv,
            }
        })
    }
}

/// Fixed-width scientific representation with 17 significant digits;
/// round-trips to the same double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_matrices(path: &Path, format: FileFormat) -> Result<Vec<DMatrix<f64>>, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    match format {
        FileFormat::Csv => parse_csv(&text).map_err(|e| format!("{}: {e}", path.display())),
        FileFormat::Json => parse_json(&text).map_err(|e| format!("{}: {e}", path.display())),
    }
}

/// Reads a file that must contain exactly one matrix.
pub fn read_single_matrix(path: &Path, format: FileFormat) -> Result<DMatrix<f64>, String> {
    let mut all = read_matrices(path, format)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        n => Err(format!("{}: expected exactly one matrix, found {n}", path.display())),
    }
}

fn parse_csv(text: &str) -> Result<Vec<DMatrix<f64>>, String> {
    let mut matrices = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut first_line = 0usize;

    let mut flush = |rows: &mut Vec<Vec<f64>>, first_line: usize| -> Result<(), String> {
        if rows.is_empty() {
            return Ok(());
        }
        let n = rows.len();
        for (k, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(format!(
                    "row {}: matrix starting at line {} must be square, row has {} of {} columns",
                    first_line + k + 1,
                    first_line + 1,
                    row.len(),
                    n
                ));
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        matrices.push(DMatrix::from_row_slice(n, n, &flat));
        rows.clear();
        Ok(())
    };

    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            flush(&mut rows, first_line)?;
            continue;
        }
        if rows.is_empty() {
            first_line = lineno;
        }
        let mut row = Vec::new();
        for (col, field) in trimmed.split(',').enumerate() {
            let field = field.trim();
            let value: f64 = field.parse().map_err(|_| {
                format!("row {}, column {}: invalid number '{field}'", lineno + 1, col + 1)
            })?;
            row.push(value);
        }
        rows.push(row);
    }
    flush(&mut rows, first_line)?;

    if matrices.is_empty() {
        return Err("no matrix data found".to_string());
    }
    Ok(matrices)
}

fn parse_json(text: &str) -> Result<Vec<DMatrix<f64>>, String> {
    let raw: Vec<Vec<Vec<f64>>> =
        serde_json::from_str(text).map_err(|e| format!("invalid JSON matrix list: {e}"))?;
    if raw.is_empty() {
        return Err("no matrix data found".to_string());
    }
    let mut out = Vec::with_capacity(raw.len());
    for (k, rows) in raw.iter().enumerate() {
        let n = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(format!(
                    "matrix {}: row {} has {} of {} columns, matrices must be square",
                    k + 1,
                    i + 1,
                    row.len(),
                    n
                ));
            }
        }
        let flat: Vec<f64> = rows.iter().flatten().copied().collect();
        out.push(DMatrix::from_row_slice(n, n, &flat));
    }
    Ok(out)
}

pub fn matrix_to_csv(m: &DMatrix<f64>) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols()).map(|j| fmt_f64(m[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn matrix_to_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}
