//! Principal component analysis over a witness sample.
//!
//! The projection columns are the eigenvectors of the covariance matrix of
//! the centred witness, ordered by descending eigenvalue. The eigenvalues
//! give per-component variances, and
//!
//! ```text
//! explained = (lambda_1 + ... + lambda_k) / (lambda_1 + ... + lambda_m)
//! ```
//!
//! is the fraction of total variance kept by the first `k` components.

use nalgebra::DMatrix;

use crate::baselines::{canonicalize_column_sign, to_dmatrix, LinearTransform};
use crate::error::{Error, Result};
use crate::matrix::RowMatrix;

/// Eigenvalues below `EIGENVALUE_TOLERANCE * lambda_max` count as zero when
/// ranking and when accumulating explained variance.
const EIGENVALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct PcaFit {
    pub transform: LinearTransform,
    /// Fraction of witness variance captured by the kept components.
    pub explained: f64,
    /// Number of nonzero-variance directions found. If below the requested
    /// dimension the trailing columns are arbitrary (but still orthonormal).
    pub rank: usize,
    /// Eigenvalues (variances) in descending order, zeros clamped.
    pub eigenvalues: Vec<f64>,
}

impl PcaFit {
    /// True when the witness had fewer nonzero-variance directions than the
    /// requested output dimension.
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.transform.output_dim()
    }

    /// Smallest dimension whose explained-variance ratio reaches `fraction`.
    pub fn dimension_for_explained(&self, fraction: f64) -> usize {
        let total: f64 = self.eigenvalues.iter().sum();
        if total <= 0.0 {
            return 0;
        }
        let mut acc = 0.0;
        for (i, l) in self.eigenvalues.iter().enumerate() {
            acc += l;
            if acc / total >= fraction {
                return i + 1;
            }
        }
        self.eigenvalues.len()
    }
}

/// Fits on an `n x m` witness with `n > k`. Columns come out orthonormal;
/// centering is the witness mean.
pub fn pca_fit(witness: &RowMatrix, k: usize) -> Result<PcaFit> {
    let (n, m) = (witness.nrows(), witness.ncols());
    if k == 0 || k > m {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range 1..={m}"
        )));
    }
    if n <= k {
        return Err(Error::InvalidArgument(format!(
            "witness size {n} must exceed k = {k}"
        )));
    }
    if !witness.is_finite() {
        return Err(Error::InvalidArgument(
            "witness has non-finite entries".into(),
        ));
    }

    let mut x = to_dmatrix(witness);
    let mean: Vec<f64> = (0..m).map(|j| x.column(j).sum() / n as f64).collect();
    for j in 0..m {
        let mut col = x.column_mut(j);
        col.add_scalar_mut(-mean[j]);
    }
    let cov = x.tr_mul(&x) / (n as f64 - 1.0);
    let eigen = cov.symmetric_eigen();

    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap()
    });
    let lambda_max = eigen.eigenvalues[order[0]].max(0.0);
    let floor = EIGENVALUE_TOLERANCE * lambda_max;
    let eigenvalues: Vec<f64> = order
        .iter()
        .map(|&i| {
            let l = eigen.eigenvalues[i];
            if l > floor {
                l
            } else {
                0.0
            }
        })
        .collect();
    let rank = eigenvalues.iter().filter(|&&l| l > 0.0).count();

    let mut matrix = DMatrix::zeros(m, k);
    for (j, &src) in order.iter().take(k).enumerate() {
        matrix
            .column_mut(j)
            .copy_from(&eigen.eigenvectors.column(src));
        canonicalize_column_sign(matrix.column_mut(j).as_mut_slice());
    }

    let total: f64 = eigenvalues.iter().sum();
    let explained = if total > 0.0 {
        eigenvalues.iter().take(k).sum::<f64>() / total
    } else {
        1.0
    };

    let row_major: Vec<f64> = {
        let mut v = vec![0.0; m * k];
        for l in 0..m {
            for j in 0..k {
                v[l * k + j] = matrix[(l, j)];
            }
        }
        v
    };
    let transform = LinearTransform::new(&row_major, m, k, Some(mean), 1.0)?;
    Ok(PcaFit {
        transform,
        explained,
        rank,
        eigenvalues,
    })
}
