//! Stable on-disk container for fitted transforms.
//!
//! All integers and reals are little-endian; reals are 64-bit. Layout,
//! version 1 (frozen — any change bumps the version byte):
//!
//! ```text
//! offset  size  field
//! 0       7     magic "NSXFORM"
//! 7       1     format version (1)
//! 8       1     payload kind: 1 simplex, 2 linear, 3 landmark-mds
//! 9       1     metric tag: 0 euclidean, 1 cosine-l2, 2 jensen-shannon,
//!               3 triangular, 4 quadratic-form, 5 euclidean-coordinates
//! 10      ...   if metric tag 4: u32 m, then m*m f64 (row-major)
//! ...           payload (below)
//! ```
//!
//! Simplex payload: `u32 k`; `k` reference vectors, each a `u32` dimension
//! count followed by that many `f64`; base simplex as `u32 rows`, `u32
//! cols`, then `rows*cols` `f64` row-major.
//!
//! Linear payload (metric tag always 5): `u32 m`, `u32 k`, `m*k` `f64`
//! row-major matrix, `f64` scale, `u8` centering flag, and if set `m` `f64`.
//!
//! Landmark-MDS payload: `u32 l`, `u32 k`, `l` landmark vectors (dimension
//! count + values, as above), `l*k` `f64` embedding, `l` `f64` mean squared
//! landmark distances, `k*l` `f64` pseudo-inverse factor, `u8` degeneracy
//! flag.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use nalgebra::DMatrix;

use crate::baselines::{LinearTransform, LmdsTransform};
use crate::error::{Error, Result};
use crate::matrix::RowMatrix;
use crate::metrics::{Metric, MetricKind};
use crate::simplex::{BaseSimplex, NSimplexTransform};

const MAGIC: &[u8; 7] = b"NSXFORM";
const VERSION: u8 = 1;

const KIND_SIMPLEX: u8 = 1;
const KIND_LINEAR: u8 = 2;
const KIND_LMDS: u8 = 3;

/// Tag for linear transforms, whose inputs are plain Euclidean coordinates.
const METRIC_EUCLIDEAN_COORDINATES: u8 = 5;

#[derive(Debug, Clone)]
pub enum PersistedTransform {
    Simplex(NSimplexTransform),
    Linear(LinearTransform),
    Lmds(LmdsTransform),
}

impl PersistedTransform {
    pub fn kind_name(&self) -> &'static str {
        match self {
            PersistedTransform::Simplex(_) => "simplex",
            PersistedTransform::Linear(_) => "linear",
            PersistedTransform::Lmds(_) => "landmark-mds",
        }
    }
}

fn metric_tag(kind: MetricKind) -> u8 {
    match kind {
        MetricKind::Euclidean => 0,
        MetricKind::CosineL2Normed => 1,
        MetricKind::JensenShannon => 2,
        MetricKind::Triangular => 3,
        MetricKind::QuadraticForm => 4,
    }
}

pub fn save_transform(path: impl AsRef<Path>, transform: &PersistedTransform) -> Result<()> {
    let mut w = BufWriter::new(File::create(path.as_ref())?);
    w.write_all(MAGIC)?;
    w.write_u8(VERSION)?;
    match transform {
        PersistedTransform::Simplex(t) => {
            w.write_u8(KIND_SIMPLEX)?;
            write_metric(&mut w, t.metric())?;
            w.write_u32::<LittleEndian>(t.target_dim() as u32)?;
            write_vectors(&mut w, t.references())?;
            let base = t.base();
            w.write_u32::<LittleEndian>(base.ref_count() as u32)?;
            w.write_u32::<LittleEndian>((base.ref_count() - 1) as u32)?;
            for v in base.coords() {
                w.write_f64::<LittleEndian>(*v)?;
            }
        }
        PersistedTransform::Linear(t) => {
            w.write_u8(KIND_LINEAR)?;
            w.write_u8(METRIC_EUCLIDEAN_COORDINATES)?;
            w.write_u32::<LittleEndian>(t.input_dim() as u32)?;
            w.write_u32::<LittleEndian>(t.output_dim() as u32)?;
            for v in t.matrix_row_major() {
                w.write_f64::<LittleEndian>(v)?;
            }
            w.write_f64::<LittleEndian>(t.scale())?;
            match t.centering() {
                Some(c) => {
                    w.write_u8(1)?;
                    for v in c {
                        w.write_f64::<LittleEndian>(*v)?;
                    }
                }
                None => w.write_u8(0)?,
            }
        }
        PersistedTransform::Lmds(t) => {
            w.write_u8(KIND_LMDS)?;
            write_metric(&mut w, t.metric())?;
            w.write_u32::<LittleEndian>(t.landmark_count() as u32)?;
            w.write_u32::<LittleEndian>(t.target_dim() as u32)?;
            write_vectors(&mut w, t.landmarks())?;
            for v in t.landmark_embedding().as_slice() {
                w.write_f64::<LittleEndian>(*v)?;
            }
            for v in t.mean_sq_landmark_dists() {
                w.write_f64::<LittleEndian>(*v)?;
            }
            for v in t.pseudo_inverse_factor().as_slice() {
                w.write_f64::<LittleEndian>(*v)?;
            }
            w.write_u8(t.degenerate() as u8)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn load_transform(path: impl AsRef<Path>) -> Result<PersistedTransform> {
    let mut r = BufReader::new(File::open(path.as_ref())?);
    let mut magic = [0u8; 7];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::MalformedFile(
            "bad magic; not a transform container".into(),
        ));
    }
    let version = r.read_u8()?;
    if version != VERSION {
        return Err(Error::MalformedFile(format!(
            "unsupported container version {version}"
        )));
    }
    let kind = r.read_u8()?;
    match kind {
        KIND_SIMPLEX => {
            let metric = read_metric(&mut r)?;
            let k = r.read_u32::<LittleEndian>()? as usize;
            let references = read_vectors(&mut r, k)?;
            let rows = r.read_u32::<LittleEndian>()? as usize;
            let cols = r.read_u32::<LittleEndian>()? as usize;
            if rows != k || cols + 1 != k {
                return Err(Error::MalformedFile(format!(
                    "base simplex {rows}x{cols} does not match k = {k}"
                )));
            }
            let mut coords = vec![0.0; rows * cols];
            for v in coords.iter_mut() {
                *v = r.read_f64::<LittleEndian>()?;
            }
            let base = BaseSimplex::from_coords(coords, k)?;
            Ok(PersistedTransform::Simplex(NSimplexTransform::from_parts(
                metric, references, base,
            )))
        }
        KIND_LINEAR => {
            let tag = r.read_u8()?;
            if tag != METRIC_EUCLIDEAN_COORDINATES {
                return Err(Error::MalformedFile(format!(
                    "linear payload carries metric tag {tag}, expected euclidean-coordinates"
                )));
            }
            let m = r.read_u32::<LittleEndian>()? as usize;
            let k = r.read_u32::<LittleEndian>()? as usize;
            let mut matrix = vec![0.0; m * k];
            for v in matrix.iter_mut() {
                *v = r.read_f64::<LittleEndian>()?;
            }
            let scale = r.read_f64::<LittleEndian>()?;
            let centering = match r.read_u8()? {
                0 => None,
                1 => {
                    let mut c = vec![0.0; m];
                    for v in c.iter_mut() {
                        *v = r.read_f64::<LittleEndian>()?;
                    }
                    Some(c)
                }
                other => {
                    return Err(Error::MalformedFile(format!("bad centering flag {other}")));
                }
            };
            Ok(PersistedTransform::Linear(LinearTransform::new(
                &matrix, m, k, centering, scale,
            )?))
        }
        KIND_LMDS => {
            let metric = read_metric(&mut r)?;
            let l = r.read_u32::<LittleEndian>()? as usize;
            let k = r.read_u32::<LittleEndian>()? as usize;
            let landmarks = read_vectors(&mut r, l)?;
            let mut emb = vec![0.0; l * k];
            for v in emb.iter_mut() {
                *v = r.read_f64::<LittleEndian>()?;
            }
            let mut mean_sq = vec![0.0; l];
            for v in mean_sq.iter_mut() {
                *v = r.read_f64::<LittleEndian>()?;
            }
            let mut pinv = vec![0.0; k * l];
            for v in pinv.iter_mut() {
                *v = r.read_f64::<LittleEndian>()?;
            }
            let degenerate = r.read_u8()? != 0;
            Ok(PersistedTransform::Lmds(LmdsTransform::from_parts(
                landmarks,
                metric,
                RowMatrix::from_vec(emb, l, k)?,
                mean_sq,
                RowMatrix::from_vec(pinv, k, l)?,
                degenerate,
            )))
        }
        other => Err(Error::MalformedFile(format!(
            "unknown payload kind {other}"
        ))),
    }
}

fn write_metric<W: Write>(w: &mut W, metric: &Metric) -> Result<()> {
    w.write_u8(metric_tag(metric.kind()))?;
    if let Some(m) = metric.qf_matrix() {
        w.write_u32::<LittleEndian>(m.nrows() as u32)?;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                w.write_f64::<LittleEndian>(m[(i, j)])?;
            }
        }
    }
    Ok(())
}

fn read_metric<R: Read>(r: &mut R) -> Result<Metric> {
    match r.read_u8()? {
        0 => Ok(Metric::Euclidean),
        1 => Ok(Metric::CosineL2Normed),
        2 => Ok(Metric::JensenShannon),
        3 => Ok(Metric::Triangular),
        4 => {
            let m = r.read_u32::<LittleEndian>()? as usize;
            let mut mat = DMatrix::zeros(m, m);
            for i in 0..m {
                for j in 0..m {
                    mat[(i, j)] = r.read_f64::<LittleEndian>()?;
                }
            }
            Metric::quadratic_form(mat)
        }
        other => Err(Error::MalformedFile(format!("unknown metric tag {other}"))),
    }
}

fn write_vectors<W: Write>(w: &mut W, rows: &RowMatrix) -> Result<()> {
    for row in rows.rows_iter() {
        w.write_u32::<LittleEndian>(row.len() as u32)?;
        for v in row {
            w.write_f64::<LittleEndian>(*v)?;
        }
    }
    Ok(())
}

fn read_vectors<R: Read>(r: &mut R, count: usize) -> Result<RowMatrix> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(count);
    let mut dim: Option<usize> = None;
    for i in 0..count {
        let d = r.read_u32::<LittleEndian>()? as usize;
        match dim {
            None => dim = Some(d),
            Some(expected) if expected != d => {
                return Err(Error::MalformedFile(format!(
                    "vector {i} has dimension {d}, expected {expected}"
                )));
            }
            _ => {}
        }
        let mut row = vec![0.0; d];
        for v in row.iter_mut() {
            *v = r.read_f64::<LittleEndian>()?;
        }
        rows.push(row);
    }
    RowMatrix::from_rows(&rows)
}
