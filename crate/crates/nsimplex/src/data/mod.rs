//! Dataset generation, loading, normalization, witness sampling and k-NN
//! ground truth.

mod generate;
mod io;
mod knn;
mod witness;

pub use generate::{gen_gaussian, gen_uniform};
pub use io::{load_csv, load_fvecs, write_csv, write_fvecs};
pub use knn::{knn_ground_truth, knn_lists};
pub use witness::{sample_partition, sample_witness, WitnessSplit};

use crate::error::{Error, Result};
use crate::matrix::RowMatrix;
use crate::metrics::{Metric, L1_TOLERANCE};

/// Rows plus the metric they are meant to be compared under. Construction
/// validates (and, within tolerance, repairs) the metric's domain
/// constraints, so bulk operations can use the unchecked distance path.
#[derive(Debug, Clone)]
pub struct Dataset {
    rows: RowMatrix,
    metric: Metric,
    name: String,
}

impl Dataset {
    pub fn new(rows: RowMatrix, metric: Metric, name: impl Into<String>) -> Result<Self> {
        if rows.nrows() == 0 || rows.ncols() == 0 {
            return Err(Error::InvalidArgument("empty dataset".into()));
        }
        if !rows.is_finite() {
            return Err(Error::Domain("dataset has non-finite entries".into()));
        }
        let mut rows = rows;
        match metric.kind() {
            k if k.requires_probability_input() => {
                rows = l1_normalize_checked(&rows, L1_TOLERANCE)?;
            }
            crate::metrics::MetricKind::CosineL2Normed => {
                for i in 0..rows.nrows() {
                    if rows.row(i).iter().all(|v| *v == 0.0) {
                        return Err(Error::ZeroVector);
                    }
                }
            }
            crate::metrics::MetricKind::QuadraticForm => {
                let m = metric.qf_matrix().unwrap().nrows();
                if rows.ncols() != m {
                    return Err(Error::DimensionMismatch {
                        left: rows.ncols(),
                        right: m,
                    });
                }
            }
            _ => {}
        }
        Ok(Self {
            rows,
            metric,
            name: name.into(),
        })
    }

    pub fn rows(&self) -> &RowMatrix {
        &self.rows
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn len(&self) -> usize {
        self.rows.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.nrows() == 0
    }

    pub fn dim(&self) -> usize {
        self.rows.ncols()
    }

    /// Distance between two stored rows (rows were validated on
    /// construction).
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.metric
            .distance_unchecked(self.rows.row(i), self.rows.row(j))
    }
}

/// Rescales each row to sum 1. Rows must be nonnegative with positive sum.
pub fn l1_normalize(data: &RowMatrix) -> Result<RowMatrix> {
    l1_normalize_checked(data, f64::INFINITY)
}

fn l1_normalize_checked(data: &RowMatrix, tolerance: f64) -> Result<RowMatrix> {
    let mut out = data.clone();
    for i in 0..out.nrows() {
        let row = out.row_mut(i);
        let mut sum = 0.0;
        for &v in row.iter() {
            if v < 0.0 {
                return Err(Error::Domain(format!("row {i} has negative component {v}")));
            }
            sum += v;
        }
        if sum <= 0.0 {
            return Err(Error::ZeroVector);
        }
        if (sum - 1.0).abs() > tolerance {
            return Err(Error::Domain(format!(
                "row {i} sums to {sum}, outside tolerance {tolerance:e}"
            )));
        }
        if sum != 1.0 {
            row.iter_mut().for_each(|v| *v /= sum);
        }
    }
    Ok(out)
}

/// Rescales each row to unit Euclidean norm. Rows must be nonzero.
pub fn l2_normalize(data: &RowMatrix) -> Result<RowMatrix> {
    let mut out = data.clone();
    for i in 0..out.nrows() {
        let row = out.row_mut(i);
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::ZeroVector);
        }
        if norm != 1.0 {
            row.iter_mut().for_each(|v| *v /= norm);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_hand_case_and_idempotence() {
        let m = RowMatrix::from_rows(&[vec![2.0, 2.0]]).unwrap();
        let n = l1_normalize(&m).unwrap();
        assert_eq!(n.row(0), &[0.5, 0.5]);
        let twice = l1_normalize(&n).unwrap();
        for (a, b) in twice.row(0).iter().zip(n.row(0)) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn l2_hand_case_and_idempotence() {
        let m = RowMatrix::from_rows(&[vec![3.0, 4.0]]).unwrap();
        let n = l2_normalize(&m).unwrap();
        assert_eq!(n.row(0), &[0.6, 0.8]);
        let twice = l2_normalize(&n).unwrap();
        for (a, b) in twice.row(0).iter().zip(n.row(0)) {
            assert!((a - b).abs() <= 1e-15);
        }
    }

    #[test]
    fn normalize_rejects_bad_rows() {
        let zero = RowMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(l1_normalize(&zero).is_err());
        assert!(l2_normalize(&zero).is_err());
        let neg = RowMatrix::from_rows(&[vec![-1.0, 2.0]]).unwrap();
        assert!(l1_normalize(&neg).is_err());
    }

    #[test]
    fn dataset_validates_metric_domain() {
        let rows = RowMatrix::from_rows(&[vec![0.5, 0.5], vec![0.9, 0.1]]).unwrap();
        assert!(Dataset::new(rows.clone(), Metric::JensenShannon, "ok").is_ok());
        let bad = RowMatrix::from_rows(&[vec![0.5, 0.6]]).unwrap();
        assert!(Dataset::new(bad, Metric::JensenShannon, "bad").is_err());
        let zero = RowMatrix::from_rows(&[vec![0.0, 0.0]]).unwrap();
        assert!(Dataset::new(zero, Metric::CosineL2Normed, "zero").is_err());
    }
}
