//! Classical (double-centering) multidimensional scaling, plus an
//! out-of-sample extension built from Procrustes analysis and a
//! pseudo-inverse.
//!
//! Given squared distances `D2`, the Gram matrix `B = -1/2 J D2 J` (with `J`
//! the centering projector) is eigendecomposed; the embedding takes the top
//! `k` eigenpairs as `V_k sqrt(L_k)`. Negative eigenvalues (non-Euclidean
//! input) are truncated to zero. For Euclidean-realizable input of intrinsic
//! dimension at most `k` the reconstruction is exact.

use nalgebra::DMatrix;

use crate::baselines::{canonicalize_column_sign, to_dmatrix, LinearTransform};
use crate::error::{Error, Result};
use crate::matrix::RowMatrix;

/// Relative floor below which eigenvalues are treated as zero.
const EIGENVALUE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct MdsEmbedding {
    /// `n x k` coordinates; columns have zero mean.
    pub coords: RowMatrix,
    /// All `n` Gram eigenvalues, descending, negatives kept for diagnostics.
    pub eigenvalues: Vec<f64>,
    /// How many of the top-`k` eigenvalues were non-positive (their
    /// coordinates are zero).
    pub truncated: usize,
}

/// The eigendecomposition of the double-centred Gram matrix of one distance
/// matrix. Embeddings for any `k` slice out of a single solve, since
/// classical MDS embeddings nest by construction.
#[derive(Debug, Clone)]
pub struct MdsSolution {
    eigenvalues: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl MdsSolution {
    pub fn solve(distances: &RowMatrix) -> Result<Self> {
        let (eigenvalues, vectors) = gram_eigen(distances)?;
        Ok(Self {
            eigenvalues,
            vectors,
        })
    }

    /// Gram eigenvalues in descending order (negatives preserved).
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// The `k`-dimensional embedding and the number of truncated
    /// (non-positive) components among the top `k`.
    pub fn embedding(&self, k: usize) -> (RowMatrix, usize) {
        embedding_from_eigen(&self.eigenvalues, &self.vectors, k)
    }

    pub(crate) fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }
}

/// Shared guts: double-center the squared distances and eigendecompose.
/// Returns eigenvalues (descending) and matching eigenvectors.
pub(crate) fn gram_eigen(distances: &RowMatrix) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = distances.nrows();
    if n < 2 || distances.ncols() != n {
        return Err(Error::InvalidArgument(
            "need a square distance matrix with n >= 2".into(),
        ));
    }
    let scale = distances
        .as_slice()
        .iter()
        .fold(0.0_f64, |a, v| a.max(v.abs()));
    for i in 0..n {
        if distances.row(i)[i].abs() > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
        }
        for j in (i + 1)..n {
            if (distances.row(i)[j] - distances.row(j)[i]).abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::InvalidArgument(format!("asymmetric at ({i},{j})")));
            }
        }
    }

    let mut d2 = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = distances.row(i)[j];
            d2[(i, j)] = d * d;
        }
    }
    let row_means: Vec<f64> = (0..n).map(|i| d2.row(i).sum() / n as f64).collect();
    let col_means: Vec<f64> = (0..n).map(|j| d2.column(j).sum() / n as f64).collect();
    let grand = row_means.iter().sum::<f64>() / n as f64;
    let mut b = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            b[(i, j)] = -0.5 * (d2[(i, j)] - row_means[i] - col_means[j] + grand);
        }
    }
    // Symmetrize rounding noise before the eigensolver.
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (b[(i, j)] + b[(j, i)]);
            b[(i, j)] = v;
            b[(j, i)] = v;
        }
    }
    let eigen = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| {
        eigen.eigenvalues[c]
            .partial_cmp(&eigen.eigenvalues[a])
            .unwrap()
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eigen.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (j, &src) in order.iter().enumerate() {
        vectors
            .column_mut(j)
            .copy_from(&eigen.eigenvectors.column(src));
        canonicalize_column_sign(vectors.column_mut(j).as_mut_slice());
    }
    Ok((eigenvalues, vectors))
}

/// Embedding from eigenpairs: column `j` is `sqrt(lambda_j) v_j`, zero when
/// the eigenvalue is non-positive (relative to the largest).
pub(crate) fn embedding_from_eigen(
    eigenvalues: &[f64],
    vectors: &DMatrix<f64>,
    k: usize,
) -> (RowMatrix, usize) {
    let n = vectors.nrows();
    let lambda_max = eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let floor = EIGENVALUE_TOLERANCE * lambda_max;
    let mut coords = RowMatrix::zeros(n, k);
    let mut truncated = 0;
    for j in 0..k {
        let l = eigenvalues[j];
        if l <= floor {
            truncated += 1;
            continue;
        }
        let s = l.sqrt();
        for i in 0..n {
            coords.row_mut(i)[j] = s * vectors[(i, j)];
        }
    }
    (coords, truncated)
}

/// Classical MDS of a symmetric zero-diagonal distance matrix into `k`
/// dimensions.
pub fn mds_fit(distances: &RowMatrix, k: usize) -> Result<MdsEmbedding> {
    let n = distances.nrows();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!(
            "k = {k} out of range 1..{n}"
        )));
    }
    let solution = MdsSolution::solve(distances)?;
    let (coords, truncated) = solution.embedding(k);
    Ok(MdsEmbedding {
        coords,
        eigenvalues: solution.eigenvalues,
        truncated,
    })
}

#[derive(Debug, Clone)]
pub struct MdsExtension {
    pub transform: LinearTransform,
    /// Witness coordinates did not span a full-rank Procrustes fit.
    pub rank_deficient: bool,
}

/// Builds a linear map from the original coordinate space into the MDS
/// space: orthogonal Procrustes (with uniform scaling) maps the embedding
/// back onto the centred witness, and the pseudo-inverse of that best-fit
/// map sends arbitrary vectors forward.
pub fn mds_extend(witness: &RowMatrix, embedding: &RowMatrix) -> Result<MdsExtension> {
    let (n, m) = (witness.nrows(), witness.ncols());
    let k = embedding.ncols();
    if embedding.nrows() != n {
        return Err(Error::DimensionMismatch {
            left: embedding.nrows(),
            right: n,
        });
    }
    if k > m || k == 0 || n < 2 {
        return Err(Error::InvalidArgument(format!(
            "cannot extend an {n}x{k} embedding of an {n}x{m} witness"
        )));
    }

    let mut y = to_dmatrix(witness);
    let y_mean: Vec<f64> = (0..m).map(|j| y.column(j).sum() / n as f64).collect();
    for j in 0..m {
        y.column_mut(j).add_scalar_mut(-y_mean[j]);
    }
    let mut x = to_dmatrix(embedding);
    let x_mean: Vec<f64> = (0..k).map(|j| x.column(j).sum() / n as f64).collect();
    for j in 0..k {
        x.column_mut(j).add_scalar_mut(-x_mean[j]);
    }

    let x_norm_sq: f64 = x.iter().map(|v| v * v).sum();
    if x_norm_sq <= 0.0 {
        return Err(Error::InvalidArgument(
            "embedding is a single point; cannot extend".into(),
        ));
    }

    // Best A = s R (R with orthonormal rows) minimizing |X A - Y|_F:
    // R = U V^T from the SVD of X^T Y, s = trace(S) / |X|_F^2.
    let cross = x.tr_mul(&y); // k x m
    let svd = cross.svd(true, true);
    let u = svd.u.as_ref().expect("svd requested u");
    let v_t = svd.v_t.as_ref().expect("svd requested v_t");
    let r = u * v_t; // k x m, orthonormal rows
    let s: f64 = svd.singular_values.iter().sum::<f64>() / x_norm_sq;
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "degenerate Procrustes scale {s}"
        )));
    }
    let sv_max = svd.singular_values.max();
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&v| v > 1e-12 * sv_max)
        .count();
    let rank_deficient = rank < k;

    // (sR)^+ = R^T / s since R R^T = I.
    let pinv = r.transpose() / s; // m x k
                                  // Fold the output offset into the centering: (u - c) pinv must equal
                                  // (u - y_mean) pinv + x_mean, and c = y_mean - x_mean (s R) satisfies it.
    let x_mean_m = DMatrix::from_row_slice(1, k, &x_mean);
    let offset = &x_mean_m * (&r * s); // 1 x m
    let centering: Vec<f64> = (0..m).map(|j| y_mean[j] - offset[(0, j)]).collect();

    let mut row_major = vec![0.0; m * k];
    for l in 0..m {
        for j in 0..k {
            row_major[l * k + j] = pinv[(l, j)];
        }
    }
    let transform = LinearTransform::new(&row_major, m, k, Some(centering), 1.0)?;
    Ok(MdsExtension {
        transform,
        rank_deficient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::Metric;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> RowMatrix {
        RowMatrix::from_rows(
            &(0..n)
                .map(|_| (0..m).map(|_| rng.gen::<f64>()).collect())
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    #[test]
    fn exact_recovery_in_three_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let pts = uniform_rows(&mut rng, 10, 3);
        let d = Metric::Euclidean.pairwise(&pts).unwrap();
        let emb = mds_fit(&d, 3).unwrap();
        for i in 0..10 {
            for j in (i + 1)..10 {
                let got = crate::metrics::euclidean(emb.coords.row(i), emb.coords.row(j));
                let want = d.row(i)[j];
                assert!((got - want).abs() < 1e-8, "({i},{j}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn square_corners_reconstruct_diagonal_ratio() {
        let pts = RowMatrix::from_rows(&[
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ])
        .unwrap();
        let d = Metric::Euclidean.pairwise(&pts).unwrap();
        let emb = mds_fit(&d, 2).unwrap();
        let edge = crate::metrics::euclidean(emb.coords.row(0), emb.coords.row(1));
        let diag = crate::metrics::euclidean(emb.coords.row(0), emb.coords.row(2));
        assert!((diag / edge - 2.0_f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn lossy_embedding_stress_matches_quality_module() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let pts = uniform_rows(&mut rng, 10, 3);
        let d = Metric::Euclidean.pairwise(&pts).unwrap();
        let emb = mds_fit(&d, 2).unwrap();
        let mut delta = Vec::new();
        let mut zeta = Vec::new();
        for i in 0..10 {
            for j in (i + 1)..10 {
                delta.push(d.row(i)[j]);
                zeta.push(crate::metrics::euclidean(
                    emb.coords.row(i),
                    emb.coords.row(j),
                ));
            }
        }
        let sample = crate::quality::DistancePairSample::new(delta, zeta).unwrap();
        let stress = crate::quality::kruskal_stress(&sample).unwrap();
        assert!(
            stress > 0.0,
            "2-d embedding of 3-d points must carry stress"
        );
        // Same value the PAVA route computes by hand here.
        let dstar = crate::quality::isotonic_fit(sample.zeta(), sample.delta()).unwrap();
        let num: f64 = sample
            .delta()
            .iter()
            .zip(&dstar)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        let den: f64 = sample.delta().iter().map(|a| a * a).sum();
        assert!((stress - (num / den).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn non_euclidean_input_truncates_negative_eigenvalues() {
        // A star metric: three leaves at distance 1 from a hub and 2 from
        // each other. Any Euclidean realization forces all leaves onto the
        // line through the hub, so the matrix is not realizable and the
        // Gram matrix goes indefinite; the negative directions must be
        // dropped, not propagated.
        let d = RowMatrix::from_rows(&[
            vec![0.0, 1.0, 1.0, 1.0],
            vec![1.0, 0.0, 2.0, 2.0],
            vec![1.0, 2.0, 0.0, 2.0],
            vec![1.0, 2.0, 2.0, 0.0],
        ])
        .unwrap();
        let emb = mds_fit(&d, 3).unwrap();
        assert!(
            emb.eigenvalues.iter().any(|&l| l < 0.0),
            "expected an indefinite Gram matrix"
        );
        assert!(emb.truncated > 0);
        assert!(emb.coords.is_finite());
    }

    #[test]
    fn extension_is_identity_for_self_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        let witness = uniform_rows(&mut rng, 50, 4);
        let ext = mds_extend(&witness, &witness).unwrap();
        assert!(!ext.rank_deficient);
        for i in 0..50 {
            let out = ext.transform.apply_row(witness.row(i)).unwrap();
            for (a, b) in out.iter().zip(witness.row(i)) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn extension_recovers_orthogonal_embedding() {
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let witness = uniform_rows(&mut rng, 80, 6);
        // Random rotation via QR of a square matrix.
        let g = DMatrix::from_fn(6, 6, |_, _| rng.gen::<f64>() - 0.5);
        let q = g.qr().q();
        let w = to_dmatrix(&witness);
        let emb_m = &w * &q;
        let mut emb = RowMatrix::zeros(80, 6);
        for i in 0..80 {
            for j in 0..6 {
                emb.row_mut(i)[j] = emb_m[(i, j)];
            }
        }
        let ext = mds_extend(&witness, &emb).unwrap();
        for i in 0..80 {
            let out = ext.transform.apply_row(witness.row(i)).unwrap();
            for (a, b) in out.iter().zip(emb.row(i)) {
                assert!((a - b).abs() < 1e-8, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn planar_witness_extends_to_held_out_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(54);
        // Points on a 2-d plane in R^3.
        let plane = |a: f64, b: f64| vec![a + b, a - 2.0 * b, 0.5 * a + b];
        let witness = RowMatrix::from_rows(
            &(0..60)
                .map(|_| plane(rng.gen(), rng.gen()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let held = RowMatrix::from_rows(
            &(0..40)
                .map(|_| plane(rng.gen(), rng.gen()))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let d = Metric::Euclidean.pairwise(&witness).unwrap();
        let emb = mds_fit(&d, 2).unwrap();
        let ext = mds_extend(&witness, &emb.coords).unwrap();
        let held_emb = ext.transform.apply(&held).unwrap();
        for i in 0..40 {
            for j in (i + 1)..40 {
                let want = crate::metrics::euclidean(held.row(i), held.row(j));
                let got = crate::metrics::euclidean(held_emb.row(i), held_emb.row(j));
                assert!(
                    (got - want).abs() <= 1e-6 * want.max(1e-9),
                    "{got} vs {want}"
                );
            }
        }
    }
}
