//! The five Hilbert-embeddable distance functions.
//!
//! All of these embed isometrically in Hilbert space, so any `n` objects under
//! any of them can be realized as a simplex in `(n-1)`-dimensional Euclidean
//! space — the property the apex transform relies on.
//!
//! - Euclidean: `sqrt(sum (v_i - w_i)^2)`
//! - Cosine: Euclidean distance between the l2-normalised vectors (a proper
//!   metric with the same ordering as the cosine of the vector angle)
//! - Jensen-Shannon: `sqrt(1 - 1/2 sum (h(v_i) + h(w_i) - h(v_i + w_i)))`
//!   with `h(x) = -x log2 x`, over L1-normalised nonnegative vectors
//! - Triangular: `sqrt(1/2 sum (v_i - w_i)^2 / (v_i + w_i))`, same domain;
//!   a cheap estimator of Jensen-Shannon in high dimensions
//! - Quadratic form: `sqrt((v-w)^T M (v-w))` for a symmetric PSD `M`
//!
//! The conventions `0 log 0 = 0` and `0/0 = 0` apply term-wise. Checked entry
//! points validate dimensions and domain constraints; the `_unchecked`
//! variants skip validation for bulk work over pre-validated datasets.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Inputs for the L1-constrained metrics may deviate from row sum 1 by at
/// most this much; inside the tolerance they are renormalized, outside it
/// they are rejected.
pub const L1_TOLERANCE: f64 = 1e-9;

/// Radicands at least this negative are treated as cancellation noise and
/// clamped to zero; anything more negative is an internal error.
const RADICAND_GUARD: f64 = 1e-12;

const QF_SYMMETRY_TOLERANCE: f64 = 1e-12;
const QF_EIGENVALUE_FLOOR: f64 = -1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    Euclidean,
    CosineL2Normed,
    JensenShannon,
    Triangular,
    QuadraticForm,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Euclidean => "euclidean",
            MetricKind::CosineL2Normed => "cosine-l2",
            MetricKind::JensenShannon => "jensen-shannon",
            MetricKind::Triangular => "triangular",
            MetricKind::QuadraticForm => "quadratic-form",
        }
    }

    /// True for metrics whose domain is L1-normalised nonnegative vectors.
    pub fn requires_probability_input(self) -> bool {
        matches!(self, MetricKind::JensenShannon | MetricKind::Triangular)
    }
}

/// A distance function over real vectors. Immutable and shareable across
/// threads; all evaluations are pure.
#[derive(Debug, Clone)]
pub enum Metric {
    Euclidean,
    CosineL2Normed,
    JensenShannon,
    Triangular,
    /// Holds the validated symmetric PSD matrix.
    QuadraticForm(Arc<DMatrix<f64>>),
}

impl Metric {
    /// Validates that `m` is symmetric (within 1e-12 of its largest entry)
    /// and positive semidefinite (eigenvalues above -1e-10).
    pub fn quadratic_form(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotPsd(format!(
                "{}x{} is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::NotPsd("matrix has non-finite entries".into()));
        }
        let scale = m.iter().fold(1.0_f64, |a, v| a.max(v.abs()));
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                if (m[(i, j)] - m[(j, i)]).abs() > QF_SYMMETRY_TOLERANCE * scale {
                    return Err(Error::NotPsd(format!(
                        "asymmetric at ({i},{j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        let eigen = m.clone().symmetric_eigen();
        if let Some(min) = eigen.eigenvalues.iter().cloned().reduce(f64::min) {
            if min < QF_EIGENVALUE_FLOOR {
                return Err(Error::NotPsd(format!("smallest eigenvalue {min:e}")));
            }
        }
        Ok(Metric::QuadraticForm(Arc::new(m)))
    }

    pub fn kind(&self) -> MetricKind {
        match self {
            Metric::Euclidean => MetricKind::Euclidean,
            Metric::CosineL2Normed => MetricKind::CosineL2Normed,
            Metric::JensenShannon => MetricKind::JensenShannon,
            Metric::Triangular => MetricKind::Triangular,
            Metric::QuadraticForm(_) => MetricKind::QuadraticForm,
        }
    }

    pub fn qf_matrix(&self) -> Option<&DMatrix<f64>> {
        match self {
            Metric::QuadraticForm(m) => Some(m),
            _ => None,
        }
    }

    /// Distance with full domain validation.
    pub fn distance(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                left: u.len(),
                right: v.len(),
            });
        }
        if u.is_empty() {
            return Err(Error::InvalidArgument("empty vectors".into()));
        }
        check_finite(u)?;
        check_finite(v)?;
        match self {
            Metric::Euclidean => Ok(euclidean(u, v)),
            Metric::CosineL2Normed => {
                let (nu, nv) = (l2_norm(u), l2_norm(v));
                if nu == 0.0 || nv == 0.0 {
                    return Err(Error::ZeroVector);
                }
                Ok(cosine_core(u, v, nu, nv))
            }
            Metric::JensenShannon => {
                let (su, sv) = (probability_sum(u)?, probability_sum(v)?);
                jsd_core(u, v, 1.0 / su, 1.0 / sv)
            }
            Metric::Triangular => {
                let (su, sv) = (probability_sum(u)?, probability_sum(v)?);
                Ok(triangular_core(u, v, 1.0 / su, 1.0 / sv))
            }
            Metric::QuadraticForm(m) => {
                if u.len() != m.nrows() {
                    return Err(Error::DimensionMismatch {
                        left: u.len(),
                        right: m.nrows(),
                    });
                }
                qf_core(u, v, m)
            }
        }
    }

    /// Distance without domain validation. Callers must have validated inputs
    /// (e.g. via [`crate::data::Dataset::new`]); L1 metrics assume rows
    /// already sum to 1.
    pub fn distance_unchecked(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), v.len());
        match self {
            Metric::Euclidean => euclidean(u, v),
            Metric::CosineL2Normed => cosine_core(u, v, l2_norm(u), l2_norm(v)),
            Metric::JensenShannon => jsd_core(u, v, 1.0, 1.0).unwrap_or(0.0),
            Metric::Triangular => triangular_core(u, v, 1.0, 1.0),
            Metric::QuadraticForm(m) => qf_core(u, v, m).unwrap_or(0.0),
        }
    }

    /// All pairwise distances of `rows`, validated once.
    pub fn pairwise(&self, rows: &crate::matrix::RowMatrix) -> Result<crate::matrix::RowMatrix> {
        let n = rows.nrows();
        let mut d = crate::matrix::RowMatrix::zeros(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let v = self.distance(rows.row(i), rows.row(j))?;
                d.row_mut(i)[j] = v;
                d.row_mut(j)[i] = v;
            }
        }
        Ok(d)
    }
}

fn check_finite(u: &[f64]) -> Result<()> {
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("non-finite component".into()));
    }
    Ok(())
}

/// Validates nonnegativity and L1 normalization within [`L1_TOLERANCE`];
/// returns the actual sum so the caller can renormalize.
fn probability_sum(u: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for &x in u {
        if x < 0.0 {
            return Err(Error::Domain(format!("negative component {x}")));
        }
        sum += x;
    }
    if (sum - 1.0).abs() > L1_TOLERANCE {
        return Err(Error::Domain(format!(
            "row sums to {sum}, not 1 within {L1_TOLERANCE:e}"
        )));
    }
    Ok(sum)
}

fn guarded_sqrt(radicand: f64) -> Result<f64> {
    if radicand >= 0.0 {
        Ok(radicand.sqrt())
    } else if radicand >= -RADICAND_GUARD {
        Ok(0.0)
    } else {
        Err(Error::Numeric(format!(
            "radicand {radicand:e} below clamp guard"
        )))
    }
}

pub fn euclidean(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

fn l2_norm(u: &[f64]) -> f64 {
    u.iter().map(|a| a * a).sum::<f64>().sqrt()
}

fn cosine_core(u: &[f64], v: &[f64], nu: f64, nv: f64) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| {
            let d = a / nu - b / nv;
            d * d
        })
        .sum::<f64>()
        .sqrt()
}

/// `-x log2 x` with the `0 log 0 = 0` convention. log2 is computed as
/// ln(x)/ln(2).
fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.ln() / std::f64::consts::LN_2
    }
}

fn jsd_core(u: &[f64], v: &[f64], scale_u: f64, scale_v: f64) -> Result<f64> {
    // The radicand cancels to rounding noise on identical inputs, which the
    // square root would amplify to ~1e-8; identity must be exact.
    if scale_u == scale_v && u == v {
        return Ok(0.0);
    }
    let mut acc = 0.0;
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (a * scale_u, b * scale_v);
        acc += h(a) + h(b) - h(a + b);
    }
    guarded_sqrt(1.0 - 0.5 * acc)
}

fn triangular_core(u: &[f64], v: &[f64], scale_u: f64, scale_v: f64) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in u.iter().zip(v) {
        let (a, b) = (a * scale_u, b * scale_v);
        let s = a + b;
        // 0/0 is taken as 0.
        if s > 0.0 {
            let d = a - b;
            acc += d * d / s;
        }
    }
    (0.5 * acc).sqrt()
}

fn qf_core(u: &[f64], v: &[f64], m: &DMatrix<f64>) -> Result<f64> {
    let n = u.len();
    let diff: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    let mut acc = 0.0;
    // M is column-major; iterate columns outermost.
    for j in 0..n {
        let col = m.column(j);
        let mut dot = 0.0;
        for i in 0..n {
            dot += diff[i] * col[i];
        }
        acc += dot * diff[j];
    }
    guarded_sqrt(acc)
}
