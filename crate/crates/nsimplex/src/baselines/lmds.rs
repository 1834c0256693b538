//! Landmark MDS: classical MDS over a landmark set, then triangulation-based
//! insertion of arbitrary objects from their distances to the landmarks.
//!
//! With landmark embedding `E` (`l x k`, columns centred), mean squared
//! landmark distances `mu` and the pseudo-inverse factor `P = E^+` (`k x l`),
//! a new object with squared landmark distances `d2` lands at
//!
//! ```text
//! x = -1/2 * P * (d2 - mu)
//! ```
//!
//! Inserting a landmark itself reproduces its embedding row exactly whenever
//! the top-`k` Gram eigenvalues are positive. Unlike the coordinate-based
//! extension this needs no coordinate space, so it applies to any metric.

use rayon::prelude::*;

use crate::baselines::mds::{embedding_from_eigen, gram_eigen, MdsSolution};
use crate::error::{Error, Result};
use crate::matrix::RowMatrix;
use crate::metrics::Metric;

#[derive(Debug, Clone)]
pub struct LmdsTransform {
    landmarks: RowMatrix,
    metric: Metric,
    embedding: RowMatrix,    // l x k
    mean_sq_dists: Vec<f64>, // l
    pinv_factor: RowMatrix,  // k x l
    degenerate: bool,
}

/// Fits from `l > k` landmark objects under the given metric.
pub fn lmds_fit(landmarks: RowMatrix, metric: Metric, k: usize) -> Result<LmdsTransform> {
    let l = landmarks.nrows();
    if k == 0 || k >= l {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range 1..{l}"
        )));
    }
    let distances = metric.pairwise(&landmarks)?;
    LmdsTransform::from_distances(landmarks, metric, &distances, k)
}

impl LmdsTransform {
    /// Fit from a precomputed landmark distance matrix.
    pub fn from_distances(
        landmarks: RowMatrix,
        metric: Metric,
        distances: &RowMatrix,
        k: usize,
    ) -> Result<Self> {
        let l = landmarks.nrows();
        if distances.nrows() != l {
            return Err(Error::DimensionMismatch {
                left: distances.nrows(),
                right: l,
            });
        }
        let mut duplicate = false;
        for i in 0..l {
            for j in (i + 1)..l {
                if distances.row(i)[j] == 0.0 {
                    duplicate = true;
                }
            }
        }
        let (eigenvalues, vectors) = gram_eigen(distances)?;
        Ok(Self::from_eigen(
            landmarks,
            metric,
            distances,
            &eigenvalues,
            &vectors,
            k,
            duplicate,
        ))
    }

    /// Assembles one `k` from a shared [`MdsSolution`] of the landmark
    /// distance matrix; a sweep over dimensions pays for the
    /// eigendecomposition once.
    pub fn from_solution(
        landmarks: RowMatrix,
        metric: Metric,
        distances: &RowMatrix,
        solution: &MdsSolution,
        k: usize,
    ) -> Result<Self> {
        let l = landmarks.nrows();
        if k == 0 || k >= l {
            return Err(Error::InvalidArgument(format!(
                "k = {k} out of range 1..{l}"
            )));
        }
        if distances.nrows() != l {
            return Err(Error::DimensionMismatch {
                left: distances.nrows(),
                right: l,
            });
        }
        let mut duplicate = false;
        for i in 0..l {
            for j in (i + 1)..l {
                if distances.row(i)[j] == 0.0 {
                    duplicate = true;
                }
            }
        }
        Ok(Self::from_eigen(
            landmarks,
            metric,
            distances,
            solution.eigenvalues(),
            solution.vectors(),
            k,
            duplicate,
        ))
    }

    /// Assemble from an eigendecomposition of the landmark Gram matrix; lets
    /// a sweep over several `k` reuse one decomposition.
    pub(crate) fn from_eigen(
        landmarks: RowMatrix,
        metric: Metric,
        distances: &RowMatrix,
        eigenvalues: &[f64],
        vectors: &nalgebra::DMatrix<f64>,
        k: usize,
        duplicate: bool,
    ) -> Self {
        let l = landmarks.nrows();
        let (embedding, truncated) = embedding_from_eigen(eigenvalues, vectors, k);
        let lambda_max = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let floor = 1e-10 * lambda_max;
        let mut pinv_factor = RowMatrix::zeros(k, l);
        for j in 0..k {
            let lam = eigenvalues[j];
            if lam <= floor {
                continue; // row stays zero; flagged below
            }
            let inv_s = 1.0 / lam.sqrt();
            for i in 0..l {
                pinv_factor.row_mut(j)[i] = vectors[(i, j)] * inv_s;
            }
        }
        let mean_sq_dists: Vec<f64> = (0..l)
            .map(|i| distances.row(i).iter().map(|d| d * d).sum::<f64>() / l as f64)
            .collect();
        let degenerate = duplicate || truncated > 0;
        Self {
            landmarks,
            metric,
            embedding,
            mean_sq_dists,
            pinv_factor,
            degenerate,
        }
    }

    pub fn landmark_count(&self) -> usize {
        self.landmarks.nrows()
    }

    pub fn target_dim(&self) -> usize {
        self.embedding.ncols()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn landmarks(&self) -> &RowMatrix {
        &self.landmarks
    }

    /// Landmark coordinates in the reduced space; columns have zero mean.
    pub fn landmark_embedding(&self) -> &RowMatrix {
        &self.embedding
    }

    pub fn mean_sq_landmark_dists(&self) -> &[f64] {
        &self.mean_sq_dists
    }

    pub fn pseudo_inverse_factor(&self) -> &RowMatrix {
        &self.pinv_factor
    }

    /// Rank below `k` or coincident landmarks.
    pub fn degenerate(&self) -> bool {
        self.degenerate
    }

    pub(crate) fn from_parts(
        landmarks: RowMatrix,
        metric: Metric,
        embedding: RowMatrix,
        mean_sq_dists: Vec<f64>,
        pinv_factor: RowMatrix,
        degenerate: bool,
    ) -> Self {
        Self {
            landmarks,
            metric,
            embedding,
            mean_sq_dists,
            pinv_factor,
            degenerate,
        }
    }

    /// Inserts one object: exactly `l` metric evaluations.
    pub fn transform(&self, u: &[f64]) -> Result<Vec<f64>> {
        let l = self.landmark_count();
        let k = self.target_dim();
        let mut diff = Vec::with_capacity(l);
        for (i, r) in self.landmarks.rows_iter().enumerate() {
            let d = self.metric.distance(r, u)?;
            diff.push(d * d - self.mean_sq_dists[i]);
        }
        let mut out = vec![0.0; k];
        for j in 0..k {
            let row = self.pinv_factor.row(j);
            let mut acc = 0.0;
            for i in 0..l {
                acc += row[i] * diff[i];
            }
            out[j] = -0.5 * acc;
        }
        Ok(out)
    }

    pub fn transform_rows(&self, data: &RowMatrix) -> Result<RowMatrix> {
        let rows: Vec<Vec<f64>> = (0..data.nrows())
            .into_par_iter()
            .map(|i| self.transform(data.row(i)))
            .collect::<Result<_>>()?;
        RowMatrix::from_rows(&rows)
    }
}
