//! File formats: edge lists, CSV signals and matrices, PGM heatmaps.
//!
//! Everything is plain text with `#` comments, 1-based indices, and
//! shortest-round-trip float formatting, so identical inputs always produce
//! byte-identical artifacts and exported values re-import exactly.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::signal::GraphSignal;

// ---------------------------------------------------------------------------
// Edge lists and coordinates
// ---------------------------------------------------------------------------

/// Read a graph from an edge-list file (`u v w` lines, 1-based, `#`
/// comments).
pub fn read_edge_list(path: &Path) -> Result<Graph> {
    graph::from_edge_list(&fs::read_to_string(path)?)
}

/// Write a graph in the same edge-list format.
pub fn write_edge_list(path: &Path, g: &Graph) -> Result<()> {
    fs::write(path, graph::to_edge_list(g))?;
    Ok(())
}

/// Read point coordinates: CSV, one point per row, `#` comments allowed.
pub fn read_coordinates(path: &Path) -> Result<Vec<Vec<f64>>> {
    let text = fs::read_to_string(path)?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords: Result<Vec<f64>> = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad coordinate '{}'", f.trim()),
                })
            })
            .collect();
        points.push(coords?);
    }
    if points.is_empty() {
        return Err(Error::InvalidArgument("coordinate file is empty".into()));
    }
    Ok(points)
}

/// Write coordinates as CSV, one point per row.
pub fn write_coordinates(path: &Path, points: &[Vec<f64>]) -> Result<()> {
    let mut out = String::new();
    for p in points {
        let fields: Vec<String> = p.iter().map(|c| format!("{c}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(path, out)?;
    Ok(())
}

// ---------------------------------------------------------------------------
// Signals
// ---------------------------------------------------------------------------

/// Render a complex signal as a two-column CSV (`re,im` header, one row per
/// vertex in order).
pub fn render_signal_csv(x: &GraphSignal) -> String {
    let mut out = String::from("re,im\n");
    for v in x.iter() {
        out.push_str(&format!("{},{}\n", v.re, v.im));
    }
    out
}

pub fn write_signal_csv(path: &Path, x: &GraphSignal) -> Result<()> {
    fs::write(path, render_signal_csv(x))?;
    Ok(())
}

/// Parse a two-column signal CSV; a one-column file is read as a real
/// signal.
pub fn parse_signal_csv(text: &str) -> Result<GraphSignal> {
    let mut values = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("re") {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(|f| f.trim()).collect();
        let parse = |f: &str| -> Result<f64> {
            f.parse().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("bad number '{f}'"),
            })
        };
        match fields.len() {
            1 => values.push(Complex64::new(parse(fields[0])?, 0.0)),
            2 => values.push(Complex64::new(parse(fields[0])?, parse(fields[1])?)),
            n => {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected 1 or 2 columns, got {n}"),
                })
            }
        }
    }
    if values.is_empty() {
        return Err(Error::InvalidArgument("signal file is empty".into()));
    }
    Ok(DVector::from_vec(values))
}

pub fn read_signal_csv(path: &Path) -> Result<GraphSignal> {
    parse_signal_csv(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------------------
// Matrices
// ---------------------------------------------------------------------------

/// Render a complex matrix as one CSV: the real part as the first `N` rows
/// and the imaginary part as the next `N`, announced by a comment line.
pub fn render_complex_matrix_csv(m: &DMatrix<Complex64>) -> String {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut out = format!(
        "# complex {rows}x{cols}: rows 1..{rows} real part, rows {}..{} imaginary part\n",
        rows + 1,
        2 * rows
    );
    for part in 0..2 {
        for i in 0..rows {
            let fields: Vec<String> = (0..cols)
                .map(|j| {
                    let v = m[(i, j)];
                    format!("{}", if part == 0 { v.re } else { v.im })
                })
                .collect();
            out.push_str(&fields.join(","));
            out.push('\n');
        }
    }
    out
}

pub fn write_complex_matrix_csv(path: &Path, m: &DMatrix<Complex64>) -> Result<()> {
    fs::write(path, render_complex_matrix_csv(m))?;
    Ok(())
}

/// Parse the stacked real/imaginary CSV produced by
/// [`render_complex_matrix_csv`].
pub fn parse_complex_matrix_csv(text: &str) -> Result<DMatrix<Complex64>> {
    let rows = parse_real_matrix(text)?;
    let total = rows.len();
    if total == 0 || total % 2 != 0 {
        return Err(Error::InvalidArgument(format!(
            "expected an even number of data rows, got {total}"
        )));
    }
    let n = total / 2;
    let cols = rows[0].len();
    Ok(DMatrix::from_fn(n, cols, |i, j| {
        Complex64::new(rows[i][j], rows[n + i][j])
    }))
}

/// Render a real matrix (e.g. distribution magnitudes) as CSV.
pub fn render_real_matrix_csv(m: &DMatrix<f64>, comment: &str) -> String {
    let mut out = format!("# {comment}\n");
    for i in 0..m.nrows() {
        let fields: Vec<String> = (0..m.ncols()).map(|j| format!("{}", m[(i, j)])).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

pub fn write_real_matrix_csv(path: &Path, m: &DMatrix<f64>, comment: &str) -> Result<()> {
    fs::write(path, render_real_matrix_csv(m, comment))?;
    Ok(())
}

fn parse_real_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>> = line
            .split(',')
            .map(|f| {
                f.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: idx + 1,
                    message: format!("bad number '{}'", f.trim()),
                })
            })
            .collect();
        let row = row?;
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("ragged row: {} fields, expected {}", row.len(), first.len()),
                });
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Extract one 1-based column of a numeric CSV matrix as a real signal —
/// the ingestion path for externally supplied data matrices where each
/// column is a snapshot.
pub fn ingest_matrix_column(text: &str, column: usize) -> Result<DVector<f64>> {
    if column == 0 {
        return Err(Error::InvalidArgument("columns are 1-based".into()));
    }
    let rows = parse_real_matrix(text)?;
    if rows.is_empty() {
        return Err(Error::InvalidArgument("matrix file is empty".into()));
    }
    let cols = rows[0].len();
    if column > cols {
        return Err(Error::IndexOutOfRange {
            index: column,
            max: cols,
        });
    }
    Ok(DVector::from_iterator(
        rows.len(),
        rows.iter().map(|r| r[column - 1]),
    ))
}

pub fn read_matrix_column(path: &Path, column: usize) -> Result<DVector<f64>> {
    ingest_matrix_column(&fs::read_to_string(path)?, column)
}

// ---------------------------------------------------------------------------
// PGM heatmaps
// ---------------------------------------------------------------------------

/// Render a non-negative matrix as an 8-bit ASCII PGM, max-normalized.
/// Rows map to image rows (vertices), columns to spectral indices.
pub fn render_pgm(m: &DMatrix<f64>) -> String {
    let (rows, cols) = (m.nrows(), m.ncols());
    let max = m.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let mut out = format!("P2\n{cols} {rows}\n255\n");
    for i in 0..rows {
        let fields: Vec<String> = (0..cols)
            .map(|j| {
                let level = if max > 0.0 {
                    (m[(i, j)].abs() / max * 255.0).round() as u32
                } else {
                    0
                };
                format!("{}", level.min(255))
            })
            .collect();
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

pub fn write_pgm(path: &Path, m: &DMatrix<f64>) -> Result<()> {
    fs::write(path, render_pgm(m))?;
    Ok(())
}
