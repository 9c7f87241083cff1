use super::{HilbertSpace, Qubit};
use crate::error::{Error, Result};
use crate::linalg::{self, hermiticity_error, CMatrix, CVector, C64};

/// Pure state in a (possibly composite) truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    space: HilbertSpace,
    amplitudes: CVector,
}

impl StateVector {
    /// Wraps raw amplitudes without normalizing.
    pub fn new(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: space.total_dim(),
                actual: amplitudes.len(),
            });
        }
        Ok(StateVector { space, amplitudes })
    }

    /// Wraps and normalizes raw amplitudes.
    pub fn normalized(space: HilbertSpace, amplitudes: CVector) -> Result<Self> {
        let mut s = Self::new(space, amplitudes)?;
        s.normalize()?;
        Ok(s)
    }

    /// Fock state `|n>` of an oscillator-only space.
    pub fn fock(space: HilbertSpace, n: usize) -> Result<Self> {
        space.require_oscillator_only()?;
        if n > space.fock_cutoff() {
            return Err(Error::OutOfRange(format!(
                "Fock index {n} above cutoff {}",
                space.fock_cutoff()
            )));
        }
        let mut amps = CVector::zeros(space.total_dim());
        amps[n] = linalg::ONE;
        Ok(StateVector {
            space,
            amplitudes: amps,
        })
    }

    /// Composite basis state `|q> ⊗ |n>`.
    pub fn basis(space: HilbertSpace, qubit: Qubit, n: usize) -> Result<Self> {
        space.require_qubit()?;
        if n > space.fock_cutoff() {
            return Err(Error::OutOfRange(format!(
                "Fock index {n} above cutoff {}",
                space.fock_cutoff()
            )));
        }
        let mut amps = CVector::zeros(space.total_dim());
        amps[space.index(qubit, n)] = linalg::ONE;
        Ok(StateVector {
            space,
            amplitudes: amps,
        })
    }

    /// Product state `(c_e |e> + c_g |g>) ⊗ |osc>`, normalized.
    pub fn product(qubit: [C64; 2], osc: &StateVector) -> Result<Self> {
        osc.space.require_oscillator_only()?;
        let space = osc.space.with_qubit();
        let d = space.oscillator_dim();
        let mut amps = CVector::zeros(space.total_dim());
        for n in 0..d {
            amps[n] = qubit[0] * osc.amplitudes[n];
            amps[d + n] = qubit[1] * osc.amplitudes[n];
        }
        Self::normalized(space, amps)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let n = self.amplitudes.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized(n * n));
        }
        self.amplitudes.unscale_mut(n);
        Ok(())
    }

    /// Checks `| ||psi||^2 - 1 | <= tol`.
    pub fn check_normalized(&self, tol: f64) -> Result<()> {
        let n2 = self.norm_sqr();
        if (n2 - 1.0).abs() > tol {
            Err(Error::NotNormalized(n2))
        } else {
            Ok(())
        }
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Population of the highest retained Fock level, summed over the qubit.
    pub fn top_level_population(&self) -> f64 {
        let d = self.space.oscillator_dim();
        let top = self.amplitudes[d - 1].norm_sqr();
        if self.space.has_qubit() {
            top + self.amplitudes[2 * d - 1].norm_sqr()
        } else {
            top
        }
    }

    /// Truncation guard: fails when the top Fock level holds `threshold` or
    /// more of the population.
    pub fn check_truncation(&self, threshold: f64) -> Result<()> {
        let leak = self.top_level_population();
        if leak >= threshold {
            Err(Error::Truncation {
                deficiency: leak,
                threshold,
            })
        } else {
            Ok(())
        }
    }

    /// Copies the oscillator state into a space with a larger cutoff.
    pub fn pad_to(&self, fock_cutoff: usize) -> Result<StateVector> {
        if fock_cutoff < self.space.fock_cutoff() {
            return Err(Error::OutOfRange(format!(
                "cannot pad cutoff {} down to {fock_cutoff}",
                self.space.fock_cutoff()
            )));
        }
        let space = HilbertSpace::new(fock_cutoff, self.space.has_qubit())?;
        let d_old = self.space.oscillator_dim();
        let d_new = space.oscillator_dim();
        let mut amps = CVector::zeros(space.total_dim());
        let blocks = if self.space.has_qubit() { 2 } else { 1 };
        for q in 0..blocks {
            for n in 0..d_old {
                amps[q * d_new + n] = self.amplitudes[q * d_old + n];
            }
        }
        StateVector::new(space, amps)
    }
}

/// Mixed state. Hermitian with unit trace on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    space: HilbertSpace,
    elements: CMatrix,
}

/// Construction tolerance for the Hermiticity and trace invariants.
const DENSITY_TOLERANCE: f64 = 1e-10;

impl DensityMatrix {
    pub fn new(space: HilbertSpace, elements: CMatrix) -> Result<Self> {
        let rho = Self::unchecked(space, elements)?;
        let herm = hermiticity_error(&rho.elements);
        if herm > DENSITY_TOLERANCE {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > DENSITY_TOLERANCE {
            return Err(Error::BadTrace(tr));
        }
        Ok(rho)
    }

    /// Dimension-checked wrapper that skips the physical invariants; used for
    /// intermediate and unnormalized branch matrices.
    pub(crate) fn unchecked(space: HilbertSpace, elements: CMatrix) -> Result<Self> {
        let d = space.total_dim();
        if elements.shape() != (d, d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: elements.nrows(),
            });
        }
        Ok(DensityMatrix { space, elements })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        DensityMatrix {
            space: psi.space(),
            elements: a * a.adjoint(),
        }
    }

    /// Maximally mixed state on the span of the given basis indices.
    pub fn maximally_mixed(space: HilbertSpace, indices: &[usize]) -> Result<Self> {
        let d = space.total_dim();
        let mut m = CMatrix::zeros(d, d);
        let w = 1.0 / indices.len() as f64;
        for &k in indices {
            if k >= d {
                return Err(Error::OutOfRange(format!("basis index {k} >= {d}")));
            }
            m[(k, k)] = linalg::c(w);
        }
        Self::new(space, m)
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

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.elements).re
    }

    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.elements)
    }

    /// Replaces the matrix by its Hermitian part.
    pub fn symmetrize(&mut self) {
        self.elements = (&self.elements + self.elements.adjoint()) * linalg::c(0.5);
    }

    /// Scales to unit trace.
    pub fn normalize(&mut self) -> Result<()> {
        let tr = self.trace();
        if tr <= 0.0 || !tr.is_finite() {
            return Err(Error::BadTrace(tr));
        }
        self.elements.unscale_mut(tr);
        Ok(())
    }

    /// Smallest eigenvalue; positivity is checked on demand only.
    pub fn min_eigenvalue(&self) -> f64 {
        let (values, _) = linalg::hermitian_eigen(&self.elements);
        values[0]
    }

    /// Population of the highest retained Fock level, summed over the qubit.
    pub fn top_level_population(&self) -> f64 {
        let d = self.space.oscillator_dim();
        let mut p = self.elements[(d - 1, d - 1)].re;
        if self.space.has_qubit() {
            p += self.elements[(2 * d - 1, 2 * d - 1)].re;
        }
        p
    }

    /// `Tr[rho^2]`
    pub fn purity(&self) -> f64 {
        self.elements
            .iter()
            .map(|z| z.norm_sqr())
            .sum()
    }

    /// Copies the oscillator matrix into a space with a larger cutoff.
    pub fn pad_to(&self, fock_cutoff: usize) -> Result<DensityMatrix> {
        if fock_cutoff < self.space.fock_cutoff() {
            return Err(Error::OutOfRange(format!(
                "cannot pad cutoff {} down to {fock_cutoff}",
                self.space.fock_cutoff()
            )));
        }
        let space = HilbertSpace::new(fock_cutoff, self.space.has_qubit())?;
        let d_old = self.space.oscillator_dim();
        let d_new = space.oscillator_dim();
        let blocks = if self.space.has_qubit() { 2 } else { 1 };
        let map = |k: usize| (k / d_old) * d_new + k % d_old;
        let mut m = CMatrix::zeros(space.total_dim(), space.total_dim());
        for i in 0..blocks * d_old {
            for j in 0..blocks * d_old {
                m[(map(i), map(j))] = self.elements[(i, j)];
            }
        }
        Ok(DensityMatrix { space, elements: m })
    }
}

/// Borrowed view of either kind of state.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a StateVector),
    Mixed(&'a DensityMatrix),
}

impl StateRef<'_> {
    pub fn space(&self) -> HilbertSpace {
        match self {
            StateRef::Pure(s) => s.space(),
            StateRef::Mixed(r) => r.space(),
        }
    }
}

impl<'a> From<&'a StateVector> for StateRef<'a> {
    fn from(s: &'a StateVector) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a DensityMatrix> for StateRef<'a> {
    fn from(r: &'a DensityMatrix) -> Self {
        StateRef::Mixed(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::NORM_TOLERANCE;
    use crate::linalg::c;

    #[test]
    fn product_state_layout() {
        let osc = HilbertSpace::oscillator(3).unwrap();
        let one = StateVector::fock(osc, 1).unwrap();
        let psi = StateVector::product([c(1.0), c(1.0)], &one).unwrap();
        let s = psi.space();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((psi.amplitudes()[s.index(Qubit::Excited, 1)] - c(h)).norm() < 1e-15);
        assert!((psi.amplitudes()[s.index(Qubit::Ground, 1)] - c(h)).norm() < 1e-15);
        psi.check_normalized(NORM_TOLERANCE).unwrap();
    }

    #[test]
    fn density_invariants_enforced() {
        let s = HilbertSpace::oscillator(2).unwrap();
        let mut m = CMatrix::zeros(3, 3);
        m[(0, 0)] = c(1.0);
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(matches!(
            DensityMatrix::new(s, m.clone()),
            Err(Error::NotHermitian(_))
        ));
        m[(0, 1)] = c(0.0);
        m[(1, 1)] = c(0.5);
        assert!(matches!(DensityMatrix::new(s, m), Err(Error::BadTrace(_))));
    }

    #[test]
    fn padding_preserves_amplitudes() {
        let s = HilbertSpace::composite(2).unwrap();
        let psi = StateVector::basis(s, Qubit::Ground, 2).unwrap();
        let big = psi.pad_to(5).unwrap();
        assert_eq!(big.amplitudes()[big.space().index(Qubit::Ground, 2)], c(1.0));
        let rho = DensityMatrix::from_pure(&psi).pad_to(5).unwrap();
        assert_eq!(rho, DensityMatrix::from_pure(&big));
    }

    #[test]
    fn truncation_guard() {
        let s = HilbertSpace::oscillator(3).unwrap();
        let top = StateVector::fock(s, 3).unwrap();
        assert!(top.check_truncation(1e-6).is_err());
        StateVector::fock(s, 0).unwrap().check_truncation(1e-6).unwrap();
    }
}
