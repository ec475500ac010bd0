//! Dense matrix and vector file formats.
//!
//! MatrixMarket `array real general` files are read and written directly
//! (the format is a header line plus column-major values). CSV fixtures are
//! one matrix row per line.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{DenseMatrix, Vector};
use crate::error::{Error, Result};

const MM_HEADER: &str = "%%MatrixMarket matrix array real general";

fn parse_err(path: &Path, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        msg: msg.into(),
    }
}

fn parse_f64(path: &Path, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, format!("not a number: {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(path, format!("non-finite entry {tok:?}")));
    }
    Ok(v)
}

/// Parses MatrixMarket array text. `path` is only used in error messages.
pub fn parse_matrix_market(text: &str, path: &Path) -> Result<DenseMatrix> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| parse_err(path, "empty file"))?
        .to_ascii_lowercase();
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(parse_err(path, "missing %%MatrixMarket matrix header"));
    }
    if fields[2] != "array" || fields[3] != "real" || fields[4] != "general" {
        return Err(parse_err(
            path,
            format!("unsupported format {} {} {}", fields[2], fields[3], fields[4]),
        ));
    }
    let mut tokens = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'))
        .flat_map(str::split_whitespace);
    let mut dim = |what: &str| -> Result<usize> {
        let tok = tokens
            .next()
            .ok_or_else(|| parse_err(path, format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| parse_err(path, format!("bad {what}: {tok:?}")))
    };
    let rows = dim("row count")?;
    let cols = dim("column count")?;
    let values = tokens
        .map(|t| parse_f64(path, t))
        .collect::<Result<Vec<f64>>>()?;
    if values.len() != rows * cols {
        return Err(parse_err(
            path,
            format!("expected {} entries, found {}", rows * cols, values.len()),
        ));
    }
    Ok(DenseMatrix::from_column_slice(rows, cols, &values))
}

pub fn read_matrix_market(path: &Path) -> Result<DenseMatrix> {
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text, path)
}

pub fn write_matrix_market(path: &Path, m: &DenseMatrix) -> Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(f, "{MM_HEADER}")?;
    writeln!(f, "{} {}", m.nrows(), m.ncols())?;
    // column-major order; {:e} round-trips f64 exactly
    for v in m.iter() {
        writeln!(f, "{v:e}")?;
    }
    f.flush()?;
    Ok(())
}

/// Reads a CSV matrix, one row per line, no header.
pub fn read_csv_matrix(path: &Path) -> Result<DenseMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = record
            .iter()
            .filter(|t| !t.is_empty())
            .map(|t| parse_f64(path, t))
            .collect::<Result<Vec<f64>>>()?;
        if row.is_empty() {
            continue;
        }
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(path, "ragged rows"));
            }
        }
        rows.push(row);
    }
    let ncols = rows.first().map_or(0, Vec::len);
    Ok(DenseMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j]))
}

/// Reads a matrix, choosing the format from the extension (`.csv` or
/// MatrixMarket otherwise).
pub fn read_matrix(path: &Path) -> Result<DenseMatrix> {
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => read_csv_matrix(path),
        _ => read_matrix_market(path),
    }
}

/// Reads a vector stored as an n×1 or 1×n matrix in either format, or as
/// plain whitespace separated numbers.
pub fn read_vector(path: &Path) -> Result<Vector> {
    let text = fs::read_to_string(path)?;
    let m = if text.trim_start().starts_with("%%") {
        parse_matrix_market(&text, path)?
    } else if path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"))
    {
        read_csv_matrix(path)?
    } else {
        let values = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| parse_f64(path, t))
            .collect::<Result<Vec<f64>>>()?;
        DenseMatrix::from_column_slice(values.len(), 1, &values)
    };
    if m.ncols() != 1 && m.nrows() != 1 {
        return Err(parse_err(
            path,
            format!("expected a vector, found {}x{}", m.nrows(), m.ncols()),
        ));
    }
    Ok(Vector::from_iterator(m.len(), m.iter().copied()))
}

pub fn write_vector(path: &Path, v: &Vector) -> Result<()> {
    let m = DenseMatrix::from_column_slice(v.len(), 1, v.as_slice());
    write_matrix_market(path, &m)
}
