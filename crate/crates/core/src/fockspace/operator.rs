use std::ops::{Add, Mul, Neg, Sub};

use super::{HilbertSpace, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{self, c, hermiticity_error, CMatrix, C64, I, ONE, ZERO};

/// Tolerance for the `hermitian_hint` invariant.
const HERMITIAN_TOLERANCE: f64 = 1e-12;

/// Dense operator on a [`HilbertSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    space: HilbertSpace,
    elements: CMatrix,
    hermitian_hint: bool,
}

impl OperatorMatrix {
    pub fn new(space: HilbertSpace, elements: CMatrix, hermitian_hint: bool) -> Result<Self> {
        let d = space.total_dim();
        if elements.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: elements.nrows(),
            });
        }
        if hermitian_hint {
            let err = hermiticity_error(&elements);
            if err > HERMITIAN_TOLERANCE {
                return Err(Error::NotHermitian(err));
            }
        }
        Ok(OperatorMatrix {
            space,
            elements,
            hermitian_hint,
        })
    }

    pub(crate) fn from_parts(space: HilbertSpace, elements: CMatrix, hermitian_hint: bool) -> Self {
        debug_assert_eq!(elements.nrows(), space.total_dim());
        OperatorMatrix {
            space,
            elements,
            hermitian_hint,
        }
    }

    pub fn zeros(space: HilbertSpace) -> Self {
        let d = space.total_dim();
        Self::from_parts(space, CMatrix::zeros(d, d), true)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn elements(&self) -> &CMatrix {
        &self.elements
    }

    pub fn into_elements(self) -> CMatrix {
        self.elements
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.elements)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_parts(self.space, self.elements.adjoint(), self.hermitian_hint)
    }

    /// Entry `<i|O|j>` by composite index.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.elements[(i, j)]
    }

    /// `O |psi>`
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.space() != self.space {
            return Err(Error::SpaceMismatch);
        }
        StateVector::new(self.space, &self.elements * psi.amplitudes())
    }

    /// `[self, other]`
    pub fn commutator(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_space(other)?;
        Ok(Self::from_parts(
            self.space,
            &self.elements * &other.elements - &other.elements * &self.elements,
            false,
        ))
    }

    pub fn checked_mul(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.check_space(other)?;
        Ok(self * other)
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        linalg::max_abs_diff(&self.elements, &other.elements)
    }

    /// Same matrix with the Hermitian hint forced on after checking it.
    pub fn into_hermitian(self) -> Result<OperatorMatrix> {
        OperatorMatrix::new(self.space, self.elements, true)
    }

    fn check_space(&self, other: &OperatorMatrix) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix::from_parts(
            self.space,
            &self.elements + &rhs.elements,
            self.hermitian_hint && rhs.hermitian_hint,
        )
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix::from_parts(
            self.space,
            &self.elements - &rhs.elements,
            self.hermitian_hint && rhs.hermitian_hint,
        )
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.space, rhs.space, "operator spaces differ");
        OperatorMatrix::from_parts(self.space, &self.elements * &rhs.elements, false)
    }
}

impl Mul<C64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: C64) -> OperatorMatrix {
        OperatorMatrix::from_parts(
            self.space,
            &self.elements * rhs,
            self.hermitian_hint && rhs.im == 0.0,
        )
    }
}

impl Mul<f64> for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn mul(self, rhs: f64) -> OperatorMatrix {
        OperatorMatrix::from_parts(self.space, &self.elements * c(rhs), self.hermitian_hint)
    }
}

impl Neg for &OperatorMatrix {
    type Output = OperatorMatrix;
    fn neg(self) -> OperatorMatrix {
        self * -1.0
    }
}

/// Qubit operators used by the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PauliAxis {
    X,
    Y,
    Z,
    /// Lowering operator `|g><e|`.
    Minus,
}

/// 2x2 matrix of a qubit operator in the `(|e>, |g>)` basis.
pub fn qubit_matrix(axis: PauliAxis) -> CMatrix {
    let m = match axis {
        PauliAxis::X => [ZERO, ONE, ONE, ZERO],
        PauliAxis::Y => [ZERO, -I, I, ZERO],
        PauliAxis::Z => [ONE, ZERO, ZERO, -ONE],
        PauliAxis::Minus => [ZERO, ZERO, ONE, ZERO],
    };
    CMatrix::from_row_slice(2, 2, &m)
}

fn ladder(dim: usize) -> CMatrix {
    let mut b = CMatrix::zeros(dim, dim);
    for n in 1..dim {
        b[(n - 1, n)] = c((n as f64).sqrt());
    }
    b
}

fn lift(space: HilbertSpace, osc: CMatrix, hermitian: bool) -> OperatorMatrix {
    let elements = if space.has_qubit() {
        linalg::kron(&CMatrix::identity(2, 2), &osc)
    } else {
        osc
    };
    OperatorMatrix::from_parts(space, elements, hermitian)
}

/// Bosonic lowering operator `b` (`I ⊗ b` on composite spaces).
pub fn annihilation(space: HilbertSpace) -> OperatorMatrix {
    lift(space, ladder(space.oscillator_dim()), false)
}

/// Bosonic raising operator `b^dagger`.
pub fn creation(space: HilbertSpace) -> OperatorMatrix {
    lift(space, ladder(space.oscillator_dim()).adjoint(), false)
}

/// Number operator `b^dagger b`, built diagonally.
pub fn number(space: HilbertSpace) -> OperatorMatrix {
    let d = space.oscillator_dim();
    let osc = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |n, _| c(n as f64)));
    lift(space, osc, true)
}

pub fn identity(space: HilbertSpace) -> OperatorMatrix {
    let d = space.total_dim();
    OperatorMatrix::from_parts(space, CMatrix::identity(d, d), true)
}

/// Pauli operator (or `sigma_-`) embedded as `sigma ⊗ I_osc`.
pub fn pauli(axis: PauliAxis, space: HilbertSpace) -> Result<OperatorMatrix> {
    space.require_qubit()?;
    let d = space.oscillator_dim();
    Ok(OperatorMatrix::from_parts(
        space,
        linalg::kron(&qubit_matrix(axis), &CMatrix::identity(d, d)),
        axis != PauliAxis::Minus,
    ))
}

/// Kronecker embedding `qubit_op ⊗ osc_op`; a missing factor is the identity.
///
/// On an oscillator-only space only `osc_op` may be given.
pub fn embed(
    qubit_op: Option<&CMatrix>,
    osc_op: Option<&CMatrix>,
    space: HilbertSpace,
) -> Result<OperatorMatrix> {
    let d = space.oscillator_dim();
    if qubit_op.is_none() && osc_op.is_none() {
        return Err(Error::InvalidSpace(
            "embed needs at least one factor".to_string(),
        ));
    }
    if let Some(q) = qubit_op {
        space.require_qubit()?;
        if q.shape() != (2, 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: q.nrows(),
            });
        }
    }
    if let Some(o) = osc_op {
        if o.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: o.nrows(),
            });
        }
    }
    let osc = osc_op.cloned().unwrap_or_else(|| CMatrix::identity(d, d));
    let elements = if space.has_qubit() {
        let q = qubit_op.cloned().unwrap_or_else(|| CMatrix::identity(2, 2));
        linalg::kron(&q, &osc)
    } else {
        osc
    };
    let hermitian = hermiticity_error(&elements) <= HERMITIAN_TOLERANCE;
    Ok(OperatorMatrix::from_parts(space, elements, hermitian))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::Qubit;
    use proptest::prelude::*;

    #[test]
    fn ladder_elements() {
        let s = HilbertSpace::oscillator(5).unwrap();
        let b = annihilation(s);
        assert_eq!(b.get(0, 1), c(1.0));
        assert!((b.get(1, 2) - c(2f64.sqrt())).norm() < 1e-15);
        assert_eq!(b.get(1, 0), ZERO);
    }

    #[test]
    fn ladder_algebra_truncation_corner() {
        for &n in &[4usize, 16, 64] {
            let s = HilbertSpace::oscillator(n).unwrap();
            let b = annihilation(s);
            let bd = creation(s);
            for k in 1..=n {
                assert_eq!(b.get(k - 1, k), c((k as f64).sqrt()));
            }
            let comm = b.commutator(&bd).unwrap();
            let diff = &comm - &identity(s);
            for i in 0..=n {
                for j in 0..=n {
                    let expected = if i == n && j == n {
                        c(-(n as f64) - 1.0)
                    } else {
                        ZERO
                    };
                    assert!(
                        (diff.get(i, j) - expected).norm() < 1e-12,
                        "N={n} ({i},{j})"
                    );
                }
            }
            // [b, b^dagger] itself has corner entry -N.
            assert!((comm.get(n, n) - c(-(n as f64))).norm() < 1e-12);
        }
    }

    #[test]
    fn pauli_conventions() {
        let s = HilbertSpace::composite(2).unwrap();
        let e0 = StateVector::basis(s, Qubit::Excited, 0).unwrap();
        let g0 = StateVector::basis(s, Qubit::Ground, 0).unwrap();
        let sz = pauli(PauliAxis::Z, s).unwrap();
        assert_eq!(sz.apply(&e0).unwrap(), e0);
        let sx = pauli(PauliAxis::X, s).unwrap();
        assert_eq!(g0.inner(&sx.apply(&e0).unwrap()).unwrap(), ONE);
        let sm = pauli(PauliAxis::Minus, s).unwrap();
        assert_eq!(sm.apply(&e0).unwrap(), g0);
        assert_eq!(sm.apply(&g0).unwrap().norm_sqr(), 0.0);
        assert!(matches!(
            pauli(PauliAxis::Z, HilbertSpace::oscillator(2).unwrap()),
            Err(Error::NoQubit)
        ));
    }

    #[test]
    fn embed_layouts() {
        let s = HilbertSpace::composite(3).unwrap();
        let z = embed(Some(&qubit_matrix(PauliAxis::Z)), None, s).unwrap();
        for k in 0..8 {
            let expected = if k < 4 { 1.0 } else { -1.0 };
            assert_eq!(z.get(k, k), c(expected));
        }
        let n_osc = number(s.oscillator_part()).into_elements();
        let n = embed(None, Some(&n_osc), s).unwrap();
        for k in 0..8 {
            assert_eq!(n.get(k, k), c((k % 4) as f64));
        }
        let both = embed(Some(&qubit_matrix(PauliAxis::Z)), Some(&n_osc), s).unwrap();
        assert!(both.max_abs_diff(&(&z * &n)) < 1e-15);
        assert!(matches!(
            embed(None, Some(&CMatrix::zeros(3, 3)), s),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = CMatrix> {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |v| CMatrix::from_iterator(n, n, v.into_iter().map(|(a, b)| C64::new(a, b))))
    }

    proptest! {
        #[test]
        fn kronecker_consistency(a in arb_matrix(2), b in arb_matrix(4)) {
            let s = HilbertSpace::composite(3).unwrap();
            let left = embed(Some(&a), None, s).unwrap();
            let right = embed(None, Some(&b), s).unwrap();
            let both = embed(Some(&a), Some(&b), s).unwrap();
            prop_assert!((&left * &right).max_abs_diff(&both) < 1e-12);
        }
    }
}
