//! Compressed sparse row storage used inside the integrators.
//!
//! Every operator in this crate (ladder powers, Pauli embeddings) has at most
//! a handful of nonzeros per row, so the right-hand sides of the Schrödinger
//! and master equations are evaluated with sparse-times-dense kernels.

use super::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    /// Converts a dense matrix, dropping exact zeros.
    pub fn from_dense(m: &CMatrix) -> Self {
        let (nrows, ncols) = m.shape();
        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..nrows {
            for j in 0..ncols {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        SparseMatrix {
            nrows,
            ncols,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[(i, self.col_idx[k])] += self.values[k];
            }
        }
        m
    }

    /// `y += alpha * S x`
    #[inline]
    pub fn mul_vec_add(&self, alpha: C64, x: &[C64], y: &mut [C64]) {
        debug_assert_eq!(x.len(), self.ncols);
        debug_assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi += alpha * acc;
        }
    }

    /// `out += alpha * S M` for a dense column-major `M`.
    pub fn mul_dense_add(&self, alpha: C64, m: &CMatrix, out: &mut CMatrix) {
        assert_eq!(m.nrows(), self.ncols);
        assert_eq!(out.shape(), (self.nrows, m.ncols()));
        let rows_in = m.nrows();
        let rows_out = out.nrows();
        let src = m.as_slice();
        let dst = out.as_mut_slice();
        for j in 0..m.ncols() {
            let x = &src[j * rows_in..(j + 1) * rows_in];
            let y = &mut dst[j * rows_out..(j + 1) * rows_out];
            self.mul_vec_add(alpha, x, y);
        }
    }

    /// `out += alpha * M S^dagger` for a dense column-major `M`.
    pub fn dense_mul_adjoint_add(&self, alpha: C64, m: &CMatrix, out: &mut CMatrix) {
        assert_eq!(m.ncols(), self.ncols);
        assert_eq!(out.shape(), (m.nrows(), self.nrows));
        let n = m.nrows();
        let src = m.as_slice();
        let dst = out.as_mut_slice();
        // (M S^dagger)[:, j] = sum_k M[:, k] conj(S[j, k])
        for j in 0..self.nrows {
            let y = &mut dst[j * n..(j + 1) * n];
            for k in self.row_ptr[j]..self.row_ptr[j + 1] {
                let w = alpha * self.values[k].conj();
                let col = self.col_idx[k];
                let x = &src[col * n..(col + 1) * n];
                for (yi, xi) in y.iter_mut().zip(x) {
                    *yi += w * xi;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;

    fn sample(n: usize, seed: usize) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let h = (i * 31 + j * 17 + seed * 7) % 13;
            if h < 9 {
                C64::new(0.0, 0.0)
            } else {
                C64::new(h as f64 * 0.1 - 0.5, (i as f64 - j as f64) * 0.05)
            }
        })
    }

    #[test]
    fn dense_round_trip() {
        let a = sample(9, 1);
        assert_eq!(SparseMatrix::from_dense(&a).to_dense(), a);
    }

    #[test]
    fn kernels_match_dense_products() {
        let s = sample(8, 2);
        let m = CMatrix::from_fn(8, 8, |i, j| C64::new(i as f64 - 2.0, j as f64 * 0.3));
        let sp = SparseMatrix::from_dense(&s);
        let alpha = C64::new(0.3, -1.2);

        let mut out = CMatrix::zeros(8, 8);
        sp.mul_dense_add(alpha, &m, &mut out);
        assert!(max_abs_diff(&out, &(&s * &m * alpha)) < 1e-12);

        let mut out = CMatrix::zeros(8, 8);
        sp.dense_mul_adjoint_add(alpha, &m, &mut out);
        assert!(max_abs_diff(&out, &(&m * s.adjoint() * alpha)) < 1e-12);
    }
}
