//! Hamiltonians of the driven, quadratically coupled qubit-oscillator in the
//! lab, interaction and rotating frames, the effective static models, and
//! the frame transformations linking them.
//!
//! Every time-dependent model is a [`BlockHamiltonian`]: a sum of constant
//! operator blocks with scalar coefficient functions. Integrators use the
//! blocks directly; [`BlockHamiltonian::at`] assembles the dense matrix.

mod bessel;

use std::fmt;
use std::sync::Arc;

pub use bessel::{bessel_j, bessel_j_all, J0_FIRST_ROOT, MAX_ARGUMENT, MAX_ORDER};

use crate::error::{Error, Result};
use crate::fockspace::{
    annihilation, creation, embed, number, pauli, qubit_matrix, HilbertSpace,
    OperatorMatrix, PauliAxis,
};
use crate::linalg::{c, CMatrix, C64, I};

/// Tolerance for the flags in [`DriveCondition`].
pub const DRIVE_CONDITION_TOLERANCE: f64 = 1e-9;

/// Model parameters in units of the oscillator frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub omega_q: f64,
    pub omega_m: f64,
    pub omega_d: f64,
    pub amplitude_a: f64,
    pub g: f64,
}

impl Default for SystemParams {
    /// `omega_q = 20`, resonant drive at the first `J_0` root, `g = 1e-4`.
    fn default() -> Self {
        SystemParams {
            omega_q: 20.0,
            omega_m: 1.0,
            omega_d: 1.0,
            amplitude_a: 0.5 * J0_FIRST_ROOT,
            g: 1e-4,
        }
    }
}

impl SystemParams {
    /// Resonant drive (`omega_d = omega_m = 1`) with amplitude `A_bar`.
    pub fn resonant(omega_q: f64, a_bar: f64, g: f64) -> Result<Self> {
        let p = SystemParams {
            omega_q,
            omega_m: 1.0,
            omega_d: 1.0,
            amplitude_a: 0.5 * a_bar,
            g,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("omega_q", self.omega_q),
            ("omega_m", self.omega_m),
            ("omega_d", self.omega_d),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.g >= 0.0) || !self.g.is_finite() {
            return Err(Error::OutOfRange(format!("g must be >= 0, got {}", self.g)));
        }
        if !self.amplitude_a.is_finite() {
            return Err(Error::OutOfRange("amplitude_A must be finite".to_string()));
        }
        Ok(())
    }

    /// `A_bar = 2 A / omega_d`
    pub fn a_bar(&self) -> f64 {
        2.0 * self.amplitude_a / self.omega_d
    }

    /// Same parameters with the amplitude set so that `2A/omega_d = a_bar`.
    pub fn with_a_bar(mut self, a_bar: f64) -> Self {
        self.amplitude_a = 0.5 * a_bar * self.omega_d;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    /// `g_cs = g J_2(A_bar)`
    pub fn g_cs(&self) -> Result<f64> {
        Ok(self.g * bessel_j(2, self.a_bar())?)
    }

    pub fn drive_condition(&self) -> DriveCondition {
        DriveCondition {
            resonant: (self.omega_d - self.omega_m).abs() <= DRIVE_CONDITION_TOLERANCE,
            amplitude_at_first_j0_root: (self.a_bar() - J0_FIRST_ROOT).abs()
                <= DRIVE_CONDITION_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DriveCondition {
    pub resonant: bool,
    pub amplitude_at_first_j0_root: bool,
}

/// Scalar time dependence of one Hamiltonian block.
pub type Coefficient = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

#[derive(Clone)]
pub struct HamiltonianTerm {
    pub operator: OperatorMatrix,
    pub coefficient: Coefficient,
}

impl fmt::Debug for HamiltonianTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HamiltonianTerm")
            .field("nnz", &self.operator.elements().iter().filter(|z| **z != c(0.0)).count())
            .finish()
    }
}

/// `H(t) = sum_k c_k(t) B_k`, Hermitian for every real `t`.
#[derive(Debug, Clone)]
pub struct BlockHamiltonian {
    space: HilbertSpace,
    terms: Vec<HamiltonianTerm>,
    max_frequency: f64,
}

impl BlockHamiltonian {
    pub fn new(space: HilbertSpace, max_frequency: f64) -> Self {
        BlockHamiltonian {
            space,
            terms: Vec::new(),
            max_frequency,
        }
    }

    /// Time-independent Hamiltonian.
    pub fn constant(h: OperatorMatrix) -> Self {
        let space = h.space();
        let mut b = BlockHamiltonian::new(space, 0.0);
        b.push(h, Arc::new(|_| c(1.0)));
        b
    }

    /// Adds `coefficient(t) * operator`. Blocks in other spaces are a bug.
    pub fn push(&mut self, operator: OperatorMatrix, coefficient: Coefficient) {
        assert_eq!(operator.space(), self.space, "block space differs");
        self.terms.push(HamiltonianTerm {
            operator,
            coefficient,
        });
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn terms(&self) -> &[HamiltonianTerm] {
        &self.terms
    }

    /// Largest angular frequency in the coefficients; bounds the step size.
    pub fn max_frequency(&self) -> f64 {
        self.max_frequency
    }

    /// Dense `H(t)`, symmetrized to be exactly Hermitian.
    pub fn at(&self, t: f64) -> OperatorMatrix {
        let d = self.space.total_dim();
        let mut m = CMatrix::zeros(d, d);
        for term in &self.terms {
            let k = (term.coefficient)(t);
            if k != c(0.0) {
                m += term.operator.elements() * k;
            }
        }
        let h = (&m + m.adjoint()) * c(0.5);
        OperatorMatrix::new(self.space, h, true).expect("symmetrized matrix is Hermitian")
    }
}

/// Operator blocks shared by the builders.
struct Blocks {
    space: HilbertSpace,
    b2: CMatrix,
    bd2: CMatrix,
    two_n_plus_one: CMatrix,
}

impl Blocks {
    fn new(space: HilbertSpace) -> Result<Self> {
        space.require_qubit()?;
        let osc = space.oscillator_part();
        let b = annihilation(osc).into_elements();
        let bd = creation(osc).into_elements();
        let n = number(osc).into_elements();
        let d = osc.total_dim();
        Ok(Blocks {
            space,
            b2: &b * &b,
            bd2: &bd * &bd,
            two_n_plus_one: n * c(2.0) + CMatrix::identity(d, d),
        })
    }

    fn op(&self, qubit: PauliAxis, osc: &CMatrix) -> OperatorMatrix {
        embed(Some(&qubit_matrix(qubit)), Some(osc), self.space).expect("dimensions match")
    }
}

fn rotating_phase(sign: f64, omega: f64) -> impl Fn(f64) -> C64 + Send + Sync + Copy {
    move |t: f64| C64::from_polar(1.0, sign * 2.0 * omega * t)
}

/// Adds `g (b^2 e^{-2i w t} + b^dagger^2 e^{2i w t} + 2 n + 1) ⊗ sigma * env(t)`.
fn push_quadratic_coupling(
    h: &mut BlockHamiltonian,
    blocks: &Blocks,
    g: f64,
    omega_m: f64,
    axis: PauliAxis,
    envelope: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
) {
    let down = rotating_phase(-1.0, omega_m);
    let up = rotating_phase(1.0, omega_m);
    let e = envelope.clone();
    h.push(blocks.op(axis, &blocks.b2), Arc::new(move |t| down(t) * (g * e(t))));
    let e = envelope.clone();
    h.push(blocks.op(axis, &blocks.bd2), Arc::new(move |t| up(t) * (g * e(t))));
    h.push(
        blocks.op(axis, &blocks.two_n_plus_one),
        Arc::new(move |t| c(g * envelope(t))),
    );
}

/// Lab-frame model:
/// `(w_q/2) sz + w_m n + g (b + b^dagger)^2 sz
///  + A cos(w_d t) [cos(w_q t) sx + sin(w_q t) sy]`.
pub fn lab_blocks(params: &SystemParams, space: HilbertSpace) -> Result<BlockHamiltonian> {
    params.validate()?;
    let blocks = Blocks::new(space)?;
    // (b + b^dagger)^2 is expanded before truncation; squaring the truncated
    // quadrature would corrupt the top Fock level.
    let x2 = &blocks.b2 + &blocks.bd2 + &blocks.two_n_plus_one;
    let static_part = &(&pauli(PauliAxis::Z, space)? * (0.5 * params.omega_q))
        + &(&(&number(space) * params.omega_m) + &(&blocks.op(PauliAxis::Z, &x2) * params.g));
    let mut h = BlockHamiltonian::new(space, params.omega_q + params.omega_d);
    h.push(static_part, Arc::new(|_| c(1.0)));
    let (a, wd, wq) = (params.amplitude_a, params.omega_d, params.omega_q);
    h.push(
        pauli(PauliAxis::X, space)?,
        Arc::new(move |t| c(a * (wd * t).cos() * (wq * t).cos())),
    );
    h.push(
        pauli(PauliAxis::Y, space)?,
        Arc::new(move |t| c(a * (wd * t).cos() * (wq * t).sin())),
    );
    Ok(h)
}

/// Interaction-frame model:
/// `g (b^2 e^{-2i w_m t} + b^dagger^2 e^{2i w_m t} + 2n + 1) sz + A cos(w_d t) sx`.
pub fn interaction_blocks(params: &SystemParams, space: HilbertSpace) -> Result<BlockHamiltonian> {
    params.validate()?;
    let blocks = Blocks::new(space)?;
    let mut h = BlockHamiltonian::new(space, (2.0 * params.omega_m).max(params.omega_d));
    push_quadratic_coupling(&mut h, &blocks, params.g, params.omega_m, PauliAxis::Z, Arc::new(|_| 1.0));
    let (a, wd) = (params.amplitude_a, params.omega_d);
    h.push(pauli(PauliAxis::X, space)?, Arc::new(move |t| c(a * (wd * t).cos())));
    Ok(h)
}

/// Rotating-frame model: the interaction-frame coupling with `sz` replaced by
/// `cos(A_bar sin(w_d t)) sz + sin(A_bar sin(w_d t)) sy`.
pub fn rotating_blocks(params: &SystemParams, space: HilbertSpace) -> Result<BlockHamiltonian> {
    params.validate()?;
    let blocks = Blocks::new(space)?;
    let (a_bar, wd) = (params.a_bar(), params.omega_d);
    let mut h = BlockHamiltonian::new(space, 2.0 * params.omega_m + a_bar.abs().max(1.0) * wd);
    push_quadratic_coupling(
        &mut h,
        &blocks,
        params.g,
        params.omega_m,
        PauliAxis::Z,
        Arc::new(move |t| (a_bar * (wd * t).sin()).cos()),
    );
    push_quadratic_coupling(
        &mut h,
        &blocks,
        params.g,
        params.omega_m,
        PauliAxis::Y,
        Arc::new(move |t| (a_bar * (wd * t).sin()).sin()),
    );
    Ok(h)
}

/// Rotating-frame model with both envelopes replaced by their Bessel
/// expansions through harmonic `n_max`.
pub fn rotating_expanded_blocks(
    params: &SystemParams,
    space: HilbertSpace,
    n_max: usize,
) -> Result<BlockHamiltonian> {
    params.validate()?;
    if n_max == 0 {
        return Err(Error::OutOfRange("n_max must be >= 1".to_string()));
    }
    let blocks = Blocks::new(space)?;
    let j = Arc::new(bessel_j_all(2 * n_max, params.a_bar())?);
    let wd = params.omega_d;
    let mut h = BlockHamiltonian::new(space, 2.0 * params.omega_m + 2.0 * n_max as f64 * wd);
    let jc = j.clone();
    push_quadratic_coupling(
        &mut h,
        &blocks,
        params.g,
        params.omega_m,
        PauliAxis::Z,
        Arc::new(move |t| expansion_sums(&jc, wd * t, n_max).0),
    );
    push_quadratic_coupling(
        &mut h,
        &blocks,
        params.g,
        params.omega_m,
        PauliAxis::Y,
        Arc::new(move |t| expansion_sums(&j, wd * t, n_max).1),
    );
    Ok(h)
}

/// Static approximation `g J_0 (2n+1) sz + g J_2 (b^2 + b^dagger^2) sz`.
pub fn h_rwa(params: &SystemParams, space: HilbertSpace) -> Result<OperatorMatrix> {
    params.validate()?;
    let blocks = Blocks::new(space)?;
    let j0 = bessel_j(0, params.a_bar())?;
    let j2 = bessel_j(2, params.a_bar())?;
    let osc = &blocks.two_n_plus_one * c(params.g * j0) + (&blocks.b2 + &blocks.bd2) * c(params.g * j2);
    blocks.op(PauliAxis::Z, &osc).into_hermitian()
}

/// Conditional squeezing Hamiltonian `g_cs (b^2 + b^dagger^2) sz`.
pub fn h_cs(params: &SystemParams, space: HilbertSpace) -> Result<OperatorMatrix> {
    params.validate()?;
    let blocks = Blocks::new(space)?;
    let osc = (&blocks.b2 + &blocks.bd2) * c(params.g_cs()?);
    blocks.op(PauliAxis::Z, &osc).into_hermitian()
}

pub fn h_lab(params: &SystemParams, space: HilbertSpace, t: f64) -> Result<OperatorMatrix> {
    Ok(lab_blocks(params, space)?.at(t))
}

pub fn h_interaction(params: &SystemParams, space: HilbertSpace, t: f64) -> Result<OperatorMatrix> {
    Ok(interaction_blocks(params, space)?.at(t))
}

pub fn h_rotating(params: &SystemParams, space: HilbertSpace, t: f64) -> Result<OperatorMatrix> {
    Ok(rotating_blocks(params, space)?.at(t))
}

pub fn h_rotating_expanded(
    params: &SystemParams,
    space: HilbertSpace,
    t: f64,
    n_max: usize,
) -> Result<OperatorMatrix> {
    Ok(rotating_expanded_blocks(params, space, n_max)?.at(t))
}

/// Partial sums `(J_0 + 2 sum J_2n cos(2n tau), 2 sum J_{2n-1} sin((2n-1) tau))`
/// from a table holding at least `J_0..=J_{2 n_max}`.
fn expansion_sums(j: &[f64], tau: f64, n_max: usize) -> (f64, f64) {
    let mut cos_value = j[0];
    let mut sin_value = 0.0;
    for n in 1..=n_max {
        cos_value += 2.0 * j[2 * n] * (2.0 * n as f64 * tau).cos();
        sin_value += 2.0 * j[2 * n - 1] * ((2 * n - 1) as f64 * tau).sin();
    }
    (cos_value, sin_value)
}

/// Jacobi-Anger partial sums approximating `(cos(chi sin tau), sin(chi sin tau))`.
pub fn jacobi_anger_partial(chi: f64, tau: f64, n_max: usize) -> Result<(f64, f64)> {
    if n_max == 0 {
        return Err(Error::OutOfRange("n_max must be >= 1".to_string()));
    }
    let j = bessel_j_all(2 * n_max, chi)?;
    Ok(expansion_sums(&j, tau, n_max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `exp[i((w_q/2) sz + w_m n) t]`
    V1,
    /// `exp[i (A/w_d) sin(w_d t) sx]`
    V2,
    /// `V2 V1`
    V,
}

/// Frame unitary at time `t`; `V1` is diagonal and `V2` acts on the qubit.
pub fn frame_transform(
    params: &SystemParams,
    space: HilbertSpace,
    t: f64,
    which: Frame,
) -> Result<OperatorMatrix> {
    params.validate()?;
    space.require_qubit()?;
    let v1 = || {
        let d = space.oscillator_dim();
        let diag = nalgebra::DVector::from_fn(space.total_dim(), |k, _| {
            let (sz, n) = if k < d { (1.0, k) } else { (-1.0, k - d) };
            C64::from_polar(1.0, (0.5 * params.omega_q * sz + params.omega_m * n as f64) * t)
        });
        CMatrix::from_diagonal(&diag)
    };
    let v2 = || {
        let theta = params.amplitude_a / params.omega_d * (params.omega_d * t).sin();
        let q = CMatrix::identity(2, 2) * c(theta.cos()) + qubit_matrix(PauliAxis::X) * (I * theta.sin());
        embed(Some(&q), None, space).map(OperatorMatrix::into_elements)
    };
    let m = match which {
        Frame::V1 => v1(),
        Frame::V2 => v2()?,
        Frame::V => v2()? * v1(),
    };
    OperatorMatrix::new(space, m, false)
}

/// `V H V^dagger + i (dV/dt) V^dagger` for a frame unitary `V` with
/// time derivative `dv_dt`.
pub fn transform_hamiltonian(
    h: &OperatorMatrix,
    v: &OperatorMatrix,
    dv_dt: &OperatorMatrix,
) -> Result<OperatorMatrix> {
    if h.space() != v.space() || v.space() != dv_dt.space() {
        return Err(Error::SpaceMismatch);
    }
    let vd = v.elements().adjoint();
    let m = v.elements() * h.elements() * &vd + dv_dt.elements() * &vd * I;
    OperatorMatrix::new(h.space(), m, false)
}
