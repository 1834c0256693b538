//! The comparison transforms: sparse random projection, PCA, classical MDS
//! with a Procrustes out-of-sample extension, and Landmark MDS.

mod linear;
mod lmds;
mod mds;
mod pca;
mod rp;

pub use linear::LinearTransform;
pub use lmds::{lmds_fit, LmdsTransform};
pub use mds::{mds_extend, mds_fit, MdsEmbedding, MdsExtension, MdsSolution};
pub use pca::{pca_fit, PcaFit};
pub use rp::rp_fit;

use nalgebra::DMatrix;

use crate::matrix::RowMatrix;

pub(crate) fn to_dmatrix(m: &RowMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.nrows(), m.ncols(), m.as_slice())
}

/// Flips eigenvector columns so the entry of largest magnitude is positive;
/// removes the solver's arbitrary sign choice from fitted transforms.
pub(crate) fn canonicalize_column_sign(col: &mut [f64]) {
    let mut best = 0.0_f64;
    let mut sign = 1.0;
    for &v in col.iter() {
        if v.abs() > best {
            best = v.abs();
            sign = if v < 0.0 { -1.0 } else { 1.0 };
        }
    }
    if sign < 0.0 {
        col.iter_mut().for_each(|v| *v = -*v);
    }
}
