//! Dataset file formats.
//!
//! `fvecs`: per record, a little-endian `u32` dimension count followed by
//! that many little-endian `f32` values; every record must share one
//! dimension. `csv`: comma-separated decimal values, one row per line, with
//! an optional header line (auto-detected and skipped when any cell of the
//! first line fails to parse as a number).

use std::fs::File;
use std::io::{BufReader, BufWriter, ErrorKind, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};

use crate::error::{Error, Result};
use crate::matrix::RowMatrix;

pub fn load_fvecs(path: impl AsRef<Path>) -> Result<RowMatrix> {
    let file = File::open(path.as_ref())?;
    let mut reader = BufReader::new(file);
    let mut data: Vec<f64> = Vec::new();
    let mut dim: Option<usize> = None;
    let mut record = 0usize;
    loop {
        let d = match reader.read_u32::<LittleEndian>() {
            Ok(v) => v as usize,
            Err(e) if e.kind() == ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        };
        match dim {
            None => {
                if d == 0 {
                    return Err(Error::MalformedFile("record 0 has zero dimension".into()));
                }
                dim = Some(d);
            }
            Some(expected) if d != expected => {
                return Err(Error::MalformedFile(format!(
                    "record {record} has dimension {d}, expected {expected}"
                )));
            }
            _ => {}
        }
        for i in 0..d {
            match reader.read_f32::<LittleEndian>() {
                Ok(v) => data.push(v as f64),
                Err(e) if e.kind() == ErrorKind::UnexpectedEof => {
                    return Err(Error::MalformedFile(format!(
                        "record {record} truncated at value {i} of {d}"
                    )));
                }
                Err(e) => return Err(e.into()),
            }
        }
        record += 1;
    }
    let dim = dim.ok_or_else(|| Error::MalformedFile("empty fvecs file".into()))?;
    RowMatrix::from_vec(data, record, dim)
}

/// Values are stored as `f32`; writing a matrix loaded from fvecs
/// round-trips byte-identically.
pub fn write_fvecs(path: impl AsRef<Path>, data: &RowMatrix) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut writer = BufWriter::new(file);
    for i in 0..data.nrows() {
        writer.write_u32::<LittleEndian>(data.ncols() as u32)?;
        for &v in data.row(i) {
            writer.write_f32::<LittleEndian>(v as f32)?;
        }
    }
    writer.flush()?;
    Ok(())
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<RowMatrix> {
    let text = std::fs::read_to_string(path.as_ref())?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let cells: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> =
            cells.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(values) => {
                if let Some(w) = width {
                    if values.len() != w {
                        return Err(Error::MalformedFile(format!(
                            "line {} has {} cells, expected {w}",
                            lineno + 1,
                            values.len()
                        )));
                    }
                } else {
                    width = Some(values.len());
                }
                rows.push(values);
            }
            Err(_) if rows.is_empty() && width.is_none() => {
                // Non-numeric first row: header, skip it.
                continue;
            }
            Err(e) => {
                return Err(Error::MalformedFile(format!(
                    "line {}: non-numeric cell ({e})",
                    lineno + 1
                )));
            }
        }
    }
    if rows.is_empty() {
        return Err(Error::MalformedFile("no data rows".into()));
    }
    RowMatrix::from_rows(&rows)
}

pub fn write_csv(path: impl AsRef<Path>, data: &RowMatrix) -> Result<()> {
    let file = File::create(path.as_ref())?;
    let mut writer = BufWriter::new(file);
    for i in 0..data.nrows() {
        let mut first = true;
        for v in data.row(i) {
            if !first {
                write!(writer, ",")?;
            }
            write!(writer, "{v}")?;
            first = false;
        }
        writeln!(writer)?;
    }
    writer.flush()?;
    Ok(())
}
