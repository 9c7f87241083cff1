//! Dense complex linear algebra helpers shared by every module.

mod expm;
mod sparse;

pub use expm::expm;
pub use sparse::SparseMatrix;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest entrywise modulus of `a - a^dagger`.
pub fn hermiticity_error(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for j in 0..n {
        for i in 0..=j {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            worst = worst.max(d);
        }
    }
    worst
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entrywise modulus of `u^dagger u - 1`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    let prod = u.adjoint() * u;
    max_abs_diff(&prod, &CMatrix::identity(n, n))
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// unitary eigenvector columns.
pub fn hermitian_eigen(a: &CMatrix) -> (DVector<f64>, CMatrix) {
    // Symmetrize first; the solver reads only one triangle.
    let sym = (a + a.adjoint()) * c(0.5);
    let eig = SymmetricEigen::new(sym);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = DVector::from_iterator(order.len(), order.iter().map(|&k| eig.eigenvalues[k]));
    let mut vectors = CMatrix::zeros(a.nrows(), a.ncols());
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Square root of a positive semidefinite Hermitian matrix. Negative
/// eigenvalues from rounding are clamped to zero.
pub fn sqrt_psd(a: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(a);
    let mut scaled = vectors.clone();
    for (k, &lambda) in values.iter().enumerate() {
        let s = lambda.max(0.0).sqrt();
        scaled.column_mut(k).scale_mut(s);
    }
    scaled * vectors.adjoint()
}

/// Trace of a square matrix.
pub fn trace(a: &CMatrix) -> C64 {
    a.diagonal().iter().sum()
}
