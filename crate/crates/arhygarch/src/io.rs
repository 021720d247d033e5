//! Series CSV files: header `t,r,x` with an optional `h` column.
//!
//! Values are written with 17 significant digits so a write/read cycle
//! reproduces every double exactly.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use arhygarch_core::inference::SeriesPair;
use arhygarch_core::simulate::SimulatedSeries;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed csv at line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("missing column `{0}` in header")]
    MissingColumn(&'static str),
    #[error("row {row}, column `{column}`: cannot parse {value:?} as a number")]
    Parse { row: usize, column: &'static str, value: String },
    #[error("row {row}, column `{column}`: {reason}")]
    Invalid { row: usize, column: &'static str, reason: &'static str },
    #[error("no data rows")]
    Empty,
}

/// Formats a double with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `t,r,x` (and `h` when given) rows with `t` counting from 1.
pub fn write_series<W: Write>(out: W, r: &[f64], x: &[f64], h: Option<&[f64]>) -> Result<(), IoError> {
    let mut out = BufWriter::new(out);
    match h {
        Some(_) => writeln!(out, "t,r,x,h")?,
        None => writeln!(out, "t,r,x")?,
    }
    for i in 0..r.len().min(x.len()) {
        write!(out, "{},{},{}", i + 1, fmt_f64(r[i]), fmt_f64(x[i]))?;
        if let Some(h) = h {
            write!(out, ",{}", fmt_f64(h[i]))?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_simulated<W: Write>(out: W, sim: &SimulatedSeries, with_h: bool) -> Result<(), IoError> {
    write_series(out, &sim.r, &sim.x, with_h.then_some(&sim.h[..]))
}

pub fn write_series_file(path: &Path, sim: &SimulatedSeries, with_h: bool) -> Result<(), IoError> {
    let file = File::create(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    write_simulated(file, sim, with_h)
}

fn csv_error(e: csv::Error) -> IoError {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(e) => IoError::Io(e),
        kind => IoError::Csv {
            line,
            message: format!("{kind:?}"),
        },
    }
}

/// Parses a series CSV. Rows are numbered from 1, not counting the header.
pub fn read_series<R: Read>(input: R) -> Result<SeriesPair, IoError> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = reader.headers().map_err(csv_error)?.clone();
    let col = |name: &'static str| headers.iter().position(|h| h == name).ok_or(IoError::MissingColumn(name));
    let (ct, cr, cx) = (col("t")?, col("r")?, col("x")?);

    let mut r = Vec::new();
    let mut x = Vec::new();
    let mut last_t: Option<i64> = None;
    for (i, rec) in reader.records().enumerate() {
        let row = i + 1;
        let rec = rec.map_err(csv_error)?;
        let field = |c: usize, column: &'static str| -> Result<&str, IoError> {
            rec.get(c).ok_or(IoError::Invalid {
                row,
                column,
                reason: "missing field",
            })
        };
        let raw_t = field(ct, "t")?;
        let t: i64 = raw_t.parse().map_err(|_| IoError::Parse {
            row,
            column: "t",
            value: raw_t.to_string(),
        })?;
        if last_t.is_some_and(|p| t <= p) {
            return Err(IoError::Invalid {
                row,
                column: "t",
                reason: "t must be strictly increasing",
            });
        }
        last_t = Some(t);
        let number = |c: usize, column: &'static str| -> Result<f64, IoError> {
            let raw = field(c, column)?;
            let v: f64 = raw.parse().map_err(|_| IoError::Parse {
                row,
                column,
                value: raw.to_string(),
            })?;
            if !v.is_finite() {
                return Err(IoError::Invalid {
                    row,
                    column,
                    reason: "value is not finite",
                });
            }
            Ok(v)
        };
        let rv = number(cr, "r")?;
        let xv = number(cx, "x")?;
        if xv <= 0.0 {
            return Err(IoError::Invalid {
                row,
                column: "x",
                reason: "realized measure must be positive",
            });
        }
        r.push(rv);
        x.push(xv);
    }
    if r.is_empty() {
        return Err(IoError::Empty);
    }
    // already validated row by row, so construction cannot fail
    SeriesPair::new(r, x).map_err(|_| IoError::Empty)
}

pub fn read_series_csv(path: &Path) -> Result<SeriesPair, IoError> {
    let file = File::open(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    read_series(file)
}
