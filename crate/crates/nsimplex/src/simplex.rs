//! Base-simplex construction, apex addition, the reference-based transform
//! into `R^k`, and the three distance estimators over transformed points.
//!
//! Any `k+1` objects of a Hilbert-embeddable metric space can be realized as
//! a simplex in `R^k` whose edge lengths equal the object distances. The
//! builder produces vertex coordinates as a lower-triangular matrix (vertex
//! `i` occupies the first `i` coordinates; the entry at column `i-1` is its
//! nonnegative altitude above the face spanned by the previous vertices).
//! Apex addition places one more point given only its distances to the
//! existing vertices, inductively:
//!
//! ```text
//! out = [d_1, 0, ..., 0]
//! for i in 2..=n:
//!     l = l2(base[i], out)
//!     out[i-1] = y - (d_i^2 - l^2) / (2x)    x = base[i][i-1], y = out[i-1]
//!     out[i]   = sqrt(y^2 - out[i-1]^2)
//! ```
//!
//! For transformed points `x`, `y` with final (altitude) components `x_k`,
//! `y_k`:
//!
//! ```text
//! base = sum_{i<k} (x_i - y_i)^2
//! Lwb  = sqrt(base + (x_k - y_k)^2)      <= d(u, v)
//! Zen  = sqrt(base + x_k^2 + y_k^2)
//! Upb  = sqrt(base + (x_k + y_k)^2)      >= d(u, v)
//! ```
//!
//! linked by `Lwb^2 + 2 x_k y_k = Zen^2 = Upb^2 - 2 x_k y_k`. Lwb is plain
//! `l2` and a proper metric; Zen and Upb lack the identity property but keep
//! the triangle inequality. Zen evaluates the hypothetical apex pair at a
//! right angle over the base hyperplane, the likely configuration when the
//! original space is high-dimensional, which is what makes it a good
//! estimator of the true distance.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::RowMatrix;
use crate::metrics::Metric;

/// Altitudes at or below this are treated as a degenerate simplex. The
/// pathological case has vanishing probability under random reference
/// selection but must still be detected.
pub const DEGENERACY_TOLERANCE: f64 = 1e-10;

/// Relative tolerance for apex radicands: values in
/// `[-EMBED_TOLERANCE * scale, 0)` are rounding noise and clamp to zero;
/// more negative values mean the distances violate the n-point property.
pub const EMBED_TOLERANCE: f64 = 1e-7;

/// Max re-draws when fitting from a candidate pool hits a degenerate
/// reference selection.
const MAX_REFERENCE_RETRIES: usize = 10;

/// Vertex coordinates of a simplex over `k` reference objects: `k` rows by
/// `k-1` columns, row `i` zero from column `i` on, `coords[i][i-1] >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSimplex {
    coords: Vec<f64>,
    k: usize,
}

impl BaseSimplex {
    /// Builds the simplex realizing a symmetric zero-diagonal distance
    /// matrix (`k >= 2`). Row-pairwise `l2` distances of the result
    /// reproduce the input to rounding error.
    pub fn from_distances(distances: &RowMatrix) -> Result<Self> {
        let k = distances.nrows();
        if k < 2 {
            return Err(Error::InvalidArgument(
                "need at least 2 reference objects".into(),
            ));
        }
        if distances.ncols() != k {
            return Err(Error::InvalidArgument(format!(
                "distance matrix is {}x{}, not square",
                k,
                distances.ncols()
            )));
        }
        let scale = distances
            .as_slice()
            .iter()
            .fold(0.0_f64, |a, v| a.max(v.abs()));
        for i in 0..k {
            if distances.row(i)[i].abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::InvalidArgument(format!("nonzero diagonal at {i}")));
            }
            for j in 0..k {
                let d = distances.row(i)[j];
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "bad distance {d} at ({i},{j})"
                    )));
                }
                if (d - distances.row(j)[i]).abs() > 1e-12 * scale.max(1.0) {
                    return Err(Error::InvalidArgument(format!("asymmetric at ({i},{j})")));
                }
            }
        }

        let cols = k - 1;
        let mut coords = vec![0.0; k * cols];
        coords[cols] = distances.row(0)[1]; // row 1, column 0
        Self::check_altitude(coords[cols], 1)?;
        let mut dists = Vec::with_capacity(k);
        for i in 2..k {
            dists.clear();
            dists.extend((0..i).map(|j| distances.row(j)[i]));
            let (base_rows, out_region) = coords.split_at_mut(i * cols);
            let out = &mut out_region[..cols];
            apex_into(base_rows, cols, i, &dists, out)?;
            Self::check_altitude(out[i - 1], i)?;
        }
        Ok(Self { coords, k })
    }

    fn check_altitude(altitude: f64, vertex: usize) -> Result<()> {
        if altitude <= DEGENERACY_TOLERANCE {
            Err(Error::DegenerateSimplex { vertex, altitude })
        } else {
            Ok(())
        }
    }

    pub fn ref_count(&self) -> usize {
        self.k
    }

    /// Vertex `i` as a `k-1`-wide zero-padded row.
    pub fn row(&self, i: usize) -> &[f64] {
        let cols = self.k - 1;
        &self.coords[i * cols..(i + 1) * cols]
    }

    /// The altitude of vertex `i` above the face of vertices `0..i`.
    pub fn altitude(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.row(i)[i - 1]
        }
    }

    /// `l2` distance between vertex rows (both zero-padded to width `k-1`).
    pub fn row_distance(&self, i: usize, j: usize) -> f64 {
        crate::metrics::euclidean(self.row(i), self.row(j))
    }

    /// Places a new apex given its distances to all `k` vertices; the output
    /// has `k` coordinates, the last one the nonnegative altitude.
    pub fn apex_addition(&self, distances: &[f64]) -> Result<Vec<f64>> {
        if distances.len() != self.k {
            return Err(Error::DimensionMismatch {
                left: distances.len(),
                right: self.k,
            });
        }
        if distances.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::InvalidArgument(
                "apex distances must be finite and >= 0".into(),
            ));
        }
        let mut out = vec![0.0; self.k];
        apex_into(&self.coords, self.k - 1, self.k, distances, &mut out)?;
        Ok(out)
    }

    /// Raw coordinates, row-major `k x (k-1)`.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn from_coords(coords: Vec<f64>, k: usize) -> Result<Self> {
        if k < 2 || coords.len() != k * (k - 1) {
            return Err(Error::InvalidArgument(
                "coordinate buffer does not match k".into(),
            ));
        }
        Ok(Self { coords, k })
    }
}

/// Core apex step over the first `n` rows of a row-major base with the given
/// column stride. `out` must hold at least `n` zeros-initialized slots except
/// `out[0]` which is overwritten.
fn apex_into(
    base: &[f64],
    stride: usize,
    n: usize,
    distances: &[f64],
    out: &mut [f64],
) -> Result<()> {
    out[..n].fill(0.0);
    out[0] = distances[0];
    for i in 1..n {
        let row = &base[i * stride..i * stride + i];
        let mut l_sq = 0.0;
        for j in 0..i {
            let d = row[j] - out[j];
            l_sq += d * d;
        }
        let delta = distances[i];
        let x = row[i - 1];
        if x <= DEGENERACY_TOLERANCE {
            return Err(Error::DegenerateSimplex {
                vertex: i,
                altitude: x,
            });
        }
        let y = out[i - 1];
        out[i - 1] = y - (delta * delta - l_sq) / (2.0 * x);
        let radicand = y * y - out[i - 1] * out[i - 1];
        // Rounding noise is absolute at the scale of the squared quantities
        // in this step, so the clamp window is relative to the largest.
        let scale = (y * y)
            .max(out[i - 1] * out[i - 1])
            .max(delta * delta)
            .max(l_sq);
        if radicand >= 0.0 {
            out[i] = radicand.sqrt();
        } else if radicand >= -EMBED_TOLERANCE * scale {
            out[i] = 0.0;
        } else {
            return Err(Error::NotEmbeddable { index: i, radicand });
        }
    }
    Ok(())
}

/// A point in the transform's co-domain; the last coordinate is the apex
/// altitude and is nonnegative by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPoint {
    coords: Vec<f64>,
}

impl ReducedPoint {
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn altitude(&self) -> f64 {
        *self.coords.last().unwrap()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.coords
    }
}

/// A fitted transform: `k` reference objects, their metric, and the base
/// simplex built from their pairwise distances. Immutable after `fit`;
/// `transform` is pure and safe to call from any number of threads.
#[derive(Debug, Clone)]
pub struct NSimplexTransform {
    metric: Metric,
    references: RowMatrix,
    base: BaseSimplex,
}

impl NSimplexTransform {
    /// Fits from an explicit reference set (`k >= 2` rows). Costs
    /// `k(k-1)/2` metric evaluations plus `O(k^3)` arithmetic.
    pub fn fit(references: RowMatrix, metric: Metric) -> Result<Self> {
        let distances = metric.pairwise(&references)?;
        let base = BaseSimplex::from_distances(&distances)?;
        Ok(Self {
            metric,
            references,
            base,
        })
    }

    /// Draws `k` references uniformly without replacement from the pool and
    /// fits; re-draws (up to 10 times) if the selection is degenerate.
    pub fn fit_from_pool<R: Rng>(
        pool: &RowMatrix,
        k: usize,
        metric: Metric,
        rng: &mut R,
    ) -> Result<Self> {
        if k > pool.nrows() {
            return Err(Error::InvalidArgument(format!(
                "cannot draw {k} references from a pool of {}",
                pool.nrows()
            )));
        }
        let mut indices: Vec<usize> = (0..pool.nrows()).collect();
        let mut last_err = None;
        for _ in 0..MAX_REFERENCE_RETRIES {
            let (chosen, _) = indices.partial_shuffle(rng, k);
            let refs = pool.select_rows(chosen);
            match Self::fit(refs, metric.clone()) {
                Ok(t) => return Ok(t),
                Err(e @ Error::DegenerateSimplex { .. }) => last_err = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last_err.unwrap())
    }

    pub fn target_dim(&self) -> usize {
        self.base.ref_count()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn references(&self) -> &RowMatrix {
        &self.references
    }

    pub fn base(&self) -> &BaseSimplex {
        &self.base
    }

    pub(crate) fn from_parts(metric: Metric, references: RowMatrix, base: BaseSimplex) -> Self {
        Self {
            metric,
            references,
            base,
        }
    }

    /// Maps one object to its apex point: exactly `k` metric evaluations
    /// plus one apex addition.
    pub fn transform(&self, u: &[f64]) -> Result<ReducedPoint> {
        let mut distances = Vec::with_capacity(self.target_dim());
        for r in self.references.rows_iter() {
            distances.push(self.metric.distance(r, u)?);
        }
        let coords = self.base.apex_addition(&distances)?;
        Ok(ReducedPoint { coords })
    }

    /// Transforms every row; rows are independent, so the result does not
    /// depend on thread count.
    pub fn transform_rows(&self, data: &RowMatrix) -> Result<RowMatrix> {
        use rayon::prelude::*;
        let rows: Vec<Vec<f64>> = (0..data.nrows())
            .into_par_iter()
            .map(|i| self.transform(data.row(i)).map(ReducedPoint::into_vec))
            .collect::<Result<_>>()?;
        RowMatrix::from_rows(&rows)
    }
}

/// Lower bound, zenith estimate and upper bound of the original distance for
/// one transformed pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEstimates {
    pub lwb: f64,
    pub zen: f64,
    pub upb: f64,
}

/// Evaluates all three estimators as a triple; they share the squared base
/// distance over the first `k-1` coordinates.
pub fn reduced_distances(x: &[f64], y: &[f64]) -> Result<BoundEstimates> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.is_empty() {
        return Err(Error::InvalidArgument("empty reduced points".into()));
    }
    let k = x.len();
    let mut base_sq = 0.0;
    for i in 0..k - 1 {
        let d = x[i] - y[i];
        base_sq += d * d;
    }
    let (xk, yk) = (x[k - 1], y[k - 1]);
    let lwb = (base_sq + (xk - yk) * (xk - yk)).sqrt();
    let zen = (base_sq + xk * xk + yk * yk).sqrt();
    let upb = (base_sq + (xk + yk) * (xk + yk)).sqrt();
    Ok(BoundEstimates { lwb, zen, upb })
}

/// The angle implied by a known true distance:
/// `cos(theta) = (zen^2 - d^2) / (2 x_k y_k)`. For genuine distances from a
/// Hilbert-embeddable space the value lies in `[-1, 1]` up to rounding.
pub fn implied_cos_theta(x: &[f64], y: &[f64], true_d: f64) -> Result<f64> {
    let b = reduced_distances(x, y)?;
    let (xk, yk) = (x[x.len() - 1], y[y.len() - 1]);
    if xk <= 0.0 || yk <= 0.0 {
        return Err(Error::InvalidArgument(
            "implied angle is undefined for zero altitudes".into(),
        ));
    }
    Ok((b.zen * b.zen - true_d * true_d) / (2.0 * xk * yk))
}

/// Which of the three reduced-space distances to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    Lwb,
    Zen,
    Upb,
}

impl Estimator {
    pub fn eval(self, x: &[f64], y: &[f64]) -> Result<f64> {
        let b = reduced_distances(x, y)?;
        Ok(match self {
            Estimator::Lwb => b.lwb,
            Estimator::Zen => b.zen,
            Estimator::Upb => b.upb,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Estimator::Lwb => "lwb",
            Estimator::Zen => "zen",
            Estimator::Upb => "upb",
        }
    }
}
