//! Matrix-based transforms: `x -> scale * (x - centering) * M` for an
//! `m x k` matrix `M`.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::RowMatrix;

/// An immutable fitted linear reduction. The matrix is stored column-major so
/// each output coordinate is one contiguous dot product; the row and batch
/// entry points share that kernel, so a batch row is bit-identical to the
/// corresponding single-row call.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearTransform {
    cols: Vec<f64>, // k columns of length m, concatenated
    input_dim: usize,
    output_dim: usize,
    centering: Option<Vec<f64>>,
    scale: f64,
}

impl LinearTransform {
    /// `matrix` is row-major `m x k` with `k <= m`.
    pub fn new(
        matrix: &[f64],
        input_dim: usize,
        output_dim: usize,
        centering: Option<Vec<f64>>,
        scale: f64,
    ) -> Result<Self> {
        if matrix.len() != input_dim * output_dim {
            return Err(Error::InvalidArgument(format!(
                "matrix buffer {} does not hold {input_dim}x{output_dim}",
                matrix.len()
            )));
        }
        if output_dim > input_dim || output_dim == 0 {
            return Err(Error::InvalidArgument(format!(
                "output dimension {output_dim} must be in 1..={input_dim}"
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) || !scale.is_finite() {
            return Err(Error::InvalidArgument(
                "non-finite transform entries".into(),
            ));
        }
        if let Some(c) = &centering {
            if c.len() != input_dim {
                return Err(Error::DimensionMismatch {
                    left: c.len(),
                    right: input_dim,
                });
            }
        }
        let mut cols = vec![0.0; input_dim * output_dim];
        for l in 0..input_dim {
            for j in 0..output_dim {
                cols[j * input_dim + l] = matrix[l * output_dim + j];
            }
        }
        Ok(Self {
            cols,
            input_dim,
            output_dim,
            centering,
            scale,
        })
    }

    pub fn input_dim(&self) -> usize {
        self.input_dim
    }

    pub fn output_dim(&self) -> usize {
        self.output_dim
    }

    pub fn centering(&self) -> Option<&[f64]> {
        self.centering.as_deref()
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.cols[j * self.input_dim..(j + 1) * self.input_dim]
    }

    /// Matrix entries back in row-major `m x k` order.
    pub fn matrix_row_major(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.input_dim * self.output_dim];
        for j in 0..self.output_dim {
            let col = self.column(j);
            for l in 0..self.input_dim {
                out[l * self.output_dim + j] = col[l];
            }
        }
        out
    }

    fn apply_into(&self, row: &[f64], out: &mut [f64]) {
        for j in 0..self.output_dim {
            let col = self.column(j);
            let mut acc = 0.0;
            match &self.centering {
                Some(c) => {
                    for l in 0..self.input_dim {
                        acc += (row[l] - c[l]) * col[l];
                    }
                }
                None => {
                    for l in 0..self.input_dim {
                        acc += row[l] * col[l];
                    }
                }
            }
            out[j] = self.scale * acc;
        }
    }

    /// Projects a single row.
    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.input_dim {
            return Err(Error::DimensionMismatch {
                left: row.len(),
                right: self.input_dim,
            });
        }
        let mut out = vec![0.0; self.output_dim];
        self.apply_into(row, &mut out);
        Ok(out)
    }

    /// Projects every row at once. Rows run in parallel over the same kernel
    /// as [`Self::apply_row`], so the output is identical bit-for-bit to the
    /// looped version regardless of thread count.
    pub fn apply(&self, data: &RowMatrix) -> Result<RowMatrix> {
        if data.ncols() != self.input_dim {
            return Err(Error::DimensionMismatch {
                left: data.ncols(),
                right: self.input_dim,
            });
        }
        let n = data.nrows();
        let mut buf = vec![0.0; n * self.output_dim];
        buf.par_chunks_mut(self.output_dim)
            .enumerate()
            .for_each(|(i, chunk)| self.apply_into(data.row(i), chunk));
        RowMatrix::from_vec(buf, n, self.output_dim)
    }
}
