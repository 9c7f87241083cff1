//! Closed and open time evolution.
//!
//! Pure states follow `i d psi/dt = H(t) psi`; density matrices follow the
//! Lindblad master equation. Both use explicit Runge-Kutta integrators on
//! sparse Hamiltonian blocks: an adaptive Dormand-Prince 5(4) pair or
//! classical fixed-step RK4 as a cross-check.

mod lindblad;
mod solver;

pub use lindblad::{dissipators, lindblad_rhs, lindblad_rhs_with, Dissipator};
pub use solver::StepCounts;

use std::f64::consts::TAU;

use solver::{integrate, Rhs, Schedule};

use crate::error::{Error, Result};
use crate::fockspace::{
    annihilation, creation, DensityMatrix, HilbertSpace, OperatorMatrix, StateVector,
    DEFAULT_LEAK_THRESHOLD,
};
use crate::hamiltonians::{BlockHamiltonian, Coefficient};
use crate::linalg::{c, expm, CMatrix, SparseMatrix, C64, I};
use crate::squeezing::{squeezed_vacuum_deficiency, SqueezeParam};

/// Steps per period of the fastest drive frequency, at least.
pub const STEPS_PER_PERIOD: f64 = 20.0;

/// Density matrices more negative than this are flagged.
pub const POSITIVITY_WARNING: f64 = 1e-6;

/// Decoherence rates in units of the oscillator frequency.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct NoiseParams {
    pub gamma_1: f64,
    pub gamma_phi: f64,
    pub gamma_m: f64,
    pub n_m_th: f64,
}

impl NoiseParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma_1", self.gamma_1),
            ("gamma_phi", self.gamma_phi),
            ("gamma_m", self.gamma_m),
            ("n_m_th", self.n_m_th),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::OutOfRange(format!("{name} must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    pub fn is_closed(&self) -> bool {
        self.gamma_1 == 0.0 && self.gamma_phi == 0.0 && self.gamma_m == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMethod {
    AdaptiveEmbedded,
    FixedRk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub method: SolverMethod,
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Upper bound on the step; the drive-frequency bound applies on top.
    pub max_step: f64,
    /// Step of the fixed RK4 method.
    pub fixed_step: f64,
    /// Store every `k`-th accepted step; `0` stores only the endpoints.
    pub store_every: usize,
}

impl SolverOptions {
    /// Adaptive, `rel_tol = 1e-9`.
    pub fn closed() -> Self {
        SolverOptions {
            method: SolverMethod::AdaptiveEmbedded,
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_step: f64::INFINITY,
            fixed_step: 1e-2,
            store_every: 0,
        }
    }

    /// Adaptive, `rel_tol = 1e-7`.
    pub fn open() -> Self {
        SolverOptions {
            rel_tol: 1e-7,
            abs_tol: 1e-10,
            ..Self::closed()
        }
    }

    pub fn fixed_rk4(step: f64) -> Self {
        SolverOptions {
            method: SolverMethod::FixedRk4,
            fixed_step: step,
            ..Self::closed()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::OutOfRange("solver tolerances must be positive".to_string()));
        }
        if !(self.max_step > 0.0) {
            return Err(Error::OutOfRange("solver max_step must be positive".to_string()));
        }
        if self.method == SolverMethod::FixedRk4 && !(self.fixed_step > 0.0 && self.fixed_step.is_finite()) {
            return Err(Error::OutOfRange("fixed_step must be positive".to_string()));
        }
        Ok(())
    }

    /// `min(max_step, 2 pi / (20 omega_fast))`
    pub fn step_bound(&self, omega_fast: f64) -> f64 {
        if omega_fast > 0.0 {
            self.max_step.min(TAU / (STEPS_PER_PERIOD * omega_fast))
        } else {
            self.max_step
        }
    }
}

/// Per-point integrator diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    /// `| ||psi||^2 - 1 |` or `| Tr rho - 1 |`.
    pub norm_drift: f64,
    /// Hermiticity error before symmetrization (zero for pure states).
    pub hermiticity_error: f64,
    /// Smallest eigenvalue of a stored density matrix.
    pub min_eigenvalue: Option<f64>,
    pub steps: StepCounts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<S> {
    pub times: Vec<f64>,
    pub states: Vec<S>,
    pub diagnostics: Vec<Diagnostics>,
    /// Non-fatal findings such as positivity violations.
    pub warnings: Vec<String>,
}

impl<S> Trajectory<S> {
    fn with_capacity(n: usize) -> Self {
        Trajectory {
            times: Vec::with_capacity(n),
            states: Vec::with_capacity(n),
            diagnostics: Vec::with_capacity(n),
            warnings: Vec::new(),
        }
    }

    pub fn final_state(&self) -> &S {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    pub fn into_final_state(mut self) -> S {
        self.states.pop().expect("trajectory holds at least the initial state")
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Largest recorded norm or trace drift.
    pub fn max_drift(&self) -> f64 {
        self.diagnostics.iter().map(|d| d.norm_drift).fold(0.0, f64::max)
    }
}

type SparseTerms = Vec<(SparseMatrix, Coefficient)>;

fn sparse_terms(h: &BlockHamiltonian) -> SparseTerms {
    h.terms()
        .iter()
        .map(|term| (SparseMatrix::from_dense(term.operator.elements()), term.coefficient.clone()))
        .collect()
}

struct SchrodingerRhs {
    terms: SparseTerms,
}

impl Rhs for SchrodingerRhs {
    fn eval(&mut self, t: f64, y: &CMatrix, out: &mut CMatrix) {
        out.fill(c(0.0));
        for (op, coef) in &self.terms {
            let k = coef(t);
            if k != c(0.0) {
                op.mul_dense_add(-I * k, y, out);
            }
        }
    }
}

/// `A = -i K rho` with `K = H - (i/2) sum gamma L^dagger L`, then
/// `A + A^dagger + sum gamma L rho L^dagger`; valid for Hermitian `rho`.
struct LindbladRhs {
    terms: SparseTerms,
    damping: Option<SparseMatrix>,
    jumps: Vec<(f64, SparseMatrix)>,
    a: CMatrix,
    tmp: CMatrix,
}

impl LindbladRhs {
    fn new(h: &BlockHamiltonian, channels: &[Dissipator]) -> Self {
        let d = h.space().total_dim();
        let mut damping = CMatrix::zeros(d, d);
        let mut jumps = Vec::new();
        for ch in channels {
            let l = ch.operator.elements();
            damping -= l.adjoint() * l * c(0.5 * ch.rate);
            jumps.push((ch.rate, SparseMatrix::from_dense(l)));
        }
        LindbladRhs {
            terms: sparse_terms(h),
            damping: (!channels.is_empty()).then(|| SparseMatrix::from_dense(&damping)),
            jumps,
            a: CMatrix::zeros(d, d),
            tmp: CMatrix::zeros(d, d),
        }
    }
}

impl Rhs for LindbladRhs {
    fn eval(&mut self, t: f64, y: &CMatrix, out: &mut CMatrix) {
        self.a.fill(c(0.0));
        for (op, coef) in &self.terms {
            let k = coef(t);
            if k != c(0.0) {
                op.mul_dense_add(-I * k, y, &mut self.a);
            }
        }
        if let Some(damp) = &self.damping {
            damp.mul_dense_add(c(1.0), y, &mut self.a);
        }
        let d = y.nrows();
        for j in 0..d {
            for i in 0..d {
                out[(i, j)] = self.a[(i, j)] + self.a[(j, i)].conj();
            }
        }
        for (rate, l) in &self.jumps {
            self.tmp.fill(c(0.0));
            l.mul_dense_add(c(1.0), y, &mut self.tmp);
            l.dense_mul_adjoint_add(c(*rate), &self.tmp, out);
        }
    }
}

/// Checks `times` and splits off a leading `t0`.
fn output_times(t0: f64, times: &[f64]) -> Result<(bool, &[f64])> {
    if times.is_empty() {
        return Err(Error::OutOfRange("no output times requested".to_string()));
    }
    if !times.iter().all(|t| t.is_finite()) || times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange("output times must be finite and strictly increasing".to_string()));
    }
    if !t0.is_finite() || times[0] < t0 {
        return Err(Error::OutOfRange(format!("output times must start at or after t0 = {t0}")));
    }
    Ok(if times[0] == t0 { (true, &times[1..]) } else { (false, times) })
}

fn check_hamiltonian(h: &BlockHamiltonian, space: HilbertSpace) -> Result<()> {
    if h.space() != space {
        return Err(Error::SpaceMismatch);
    }
    Ok(())
}

/// Integrates `i d psi/dt = H(t) psi` from `t0` to `t1`, storing the
/// endpoints and every `store_every`-th accepted step.
pub fn evolve_state(
    h: &BlockHamiltonian,
    psi0: &StateVector,
    t0: f64,
    t1: f64,
    opts: &SolverOptions,
) -> Result<Trajectory<StateVector>> {
    if !(t1 > t0) {
        return Err(Error::OutOfRange(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    evolve_state_inner(h, psi0, t0, &[t0, t1], opts, opts.store_every)
}

/// Integrates `i d psi/dt = H(t) psi`, storing exactly the requested times.
pub fn evolve_state_at(
    h: &BlockHamiltonian,
    psi0: &StateVector,
    t0: f64,
    times: &[f64],
    opts: &SolverOptions,
) -> Result<Trajectory<StateVector>> {
    evolve_state_inner(h, psi0, t0, times, opts, 0)
}

fn evolve_state_inner(
    h: &BlockHamiltonian,
    psi0: &StateVector,
    t0: f64,
    times: &[f64],
    opts: &SolverOptions,
    store_every: usize,
) -> Result<Trajectory<StateVector>> {
    opts.validate()?;
    check_hamiltonian(h, psi0.space())?;
    psi0.check_normalized(crate::fockspace::NORM_TOLERANCE)?;
    let (store_initial, targets) = output_times(t0, times)?;
    let space = psi0.space();
    let mut traj = Trajectory::with_capacity(times.len());
    let norm_drift = |y: &CMatrix| (y.norm_squared() - 1.0).abs();
    if store_initial {
        traj.times.push(t0);
        traj.states.push(psi0.clone());
        traj.diagnostics.push(Diagnostics {
            norm_drift: (psi0.norm_sqr() - 1.0).abs(),
            hermiticity_error: 0.0,
            min_eigenvalue: None,
            steps: StepCounts::default(),
        });
    }
    if targets.is_empty() {
        return Ok(traj);
    }
    let mut rhs = SchrodingerRhs { terms: sparse_terms(h) };
    let y0 = CMatrix::from_column_slice(space.total_dim(), 1, psi0.amplitudes().as_slice());
    integrate(
        &mut rhs,
        y0,
        t0,
        Schedule { targets, store_every },
        opts,
        opts.step_bound(h.max_frequency()),
        &norm_drift,
        &mut |t, y, steps| {
            traj.times.push(t);
            traj.states.push(StateVector::new(space, y.column(0).into_owned())?);
            traj.diagnostics.push(Diagnostics {
                norm_drift: norm_drift(y),
                hermiticity_error: 0.0,
                min_eigenvalue: None,
                steps,
            });
            Ok(())
        },
    )?;
    let final_drift = traj.diagnostics.last().map_or(0.0, |d| d.norm_drift);
    if final_drift > 10.0 * opts.rel_tol {
        traj.warnings.push(format!(
            "final norm drift {final_drift:.3e} exceeds 10 x rel_tol"
        ));
    }
    Ok(traj)
}

/// `exp(-i H t)` for a Hermitian `H`.
pub fn propagator(h: &OperatorMatrix, t: f64) -> Result<OperatorMatrix> {
    let err = h.hermiticity_error();
    if err > 1e-10 {
        return Err(Error::NotHermitian(err));
    }
    OperatorMatrix::new(h.space(), expm(&(h.elements() * (-I * t))), false)
}

/// `S(xi) = exp[(xi^* b^2 - xi b^dagger^2)/2]` on an oscillator space.
pub fn squeeze_unitary(xi: SqueezeParam, space: HilbertSpace) -> Result<OperatorMatrix> {
    space.require_oscillator_only()?;
    let deficiency = squeezed_vacuum_deficiency(xi.r(), space.fock_cutoff());
    if deficiency >= DEFAULT_LEAK_THRESHOLD {
        return Err(Error::Truncation {
            deficiency,
            threshold: DEFAULT_LEAK_THRESHOLD,
        });
    }
    let b = annihilation(space).into_elements();
    let bd = creation(space).into_elements();
    let z = xi.xi();
    let generator = (&b * &b * z.conj() - &bd * &bd * z) * c(0.5);
    OperatorMatrix::new(space, expm(&generator), false)
}

/// Integrates the master equation with the model's channels from `t0` to
/// `t1`, storing the endpoints and every `store_every`-th accepted step.
pub fn evolve_density(
    h: &BlockHamiltonian,
    noise: &NoiseParams,
    rho0: &DensityMatrix,
    t0: f64,
    t1: f64,
    opts: &SolverOptions,
) -> Result<Trajectory<DensityMatrix>> {
    if !(t1 > t0) {
        return Err(Error::OutOfRange(format!("need t1 > t0, got [{t0}, {t1}]")));
    }
    let channels = dissipators(noise, rho0.space())?;
    evolve_density_inner(h, &channels, rho0, t0, &[t0, t1], opts, opts.store_every)
}

/// Integrates the master equation, storing exactly the requested times.
pub fn evolve_density_at(
    h: &BlockHamiltonian,
    noise: &NoiseParams,
    rho0: &DensityMatrix,
    t0: f64,
    times: &[f64],
    opts: &SolverOptions,
) -> Result<Trajectory<DensityMatrix>> {
    let channels = dissipators(noise, rho0.space())?;
    evolve_density_inner(h, &channels, rho0, t0, times, opts, 0)
}

/// As [`evolve_density_at`] with an explicit channel list.
pub fn evolve_density_with(
    h: &BlockHamiltonian,
    channels: &[Dissipator],
    rho0: &DensityMatrix,
    t0: f64,
    times: &[f64],
    opts: &SolverOptions,
) -> Result<Trajectory<DensityMatrix>> {
    evolve_density_inner(h, channels, rho0, t0, times, opts, 0)
}

fn density_diagnostics(
    space: HilbertSpace,
    y: &CMatrix,
    steps: StepCounts,
) -> Result<(DensityMatrix, Diagnostics)> {
    let d = y.nrows();
    let trace: C64 = (0..d).map(|i| y[(i, i)]).sum();
    let hermiticity_error = crate::linalg::hermiticity_error(y);
    let sym = (y + y.adjoint()) * c(0.5);
    let rho = DensityMatrix::unchecked(space, sym)?;
    let min_eigenvalue = rho.min_eigenvalue();
    Ok((
        rho,
        Diagnostics {
            norm_drift: (trace.re - 1.0).abs(),
            hermiticity_error,
            min_eigenvalue: Some(min_eigenvalue),
            steps,
        },
    ))
}

fn evolve_density_inner(
    h: &BlockHamiltonian,
    channels: &[Dissipator],
    rho0: &DensityMatrix,
    t0: f64,
    times: &[f64],
    opts: &SolverOptions,
    store_every: usize,
) -> Result<Trajectory<DensityMatrix>> {
    opts.validate()?;
    let space = rho0.space();
    check_hamiltonian(h, space)?;
    if channels.iter().any(|ch| ch.operator.space() != space) {
        return Err(Error::SpaceMismatch);
    }
    let (store_initial, targets) = output_times(t0, times)?;
    let mut traj = Trajectory::with_capacity(times.len());
    let trace_drift = |y: &CMatrix| {
        let tr: C64 = (0..y.nrows()).map(|i| y[(i, i)]).sum();
        (tr.re - 1.0).abs()
    };
    let record = |traj: &mut Trajectory<DensityMatrix>, t: f64, y: &CMatrix, steps: StepCounts| -> Result<()> {
        let (rho, diag) = density_diagnostics(space, y, steps)?;
        if diag.min_eigenvalue.is_some_and(|m| m < -POSITIVITY_WARNING) {
            traj.warnings.push(format!(
                "t = {t:.6e}: density matrix eigenvalue {:.3e} below -{POSITIVITY_WARNING:e}",
                diag.min_eigenvalue.unwrap_or(0.0)
            ));
        }
        traj.times.push(t);
        traj.states.push(rho);
        traj.diagnostics.push(diag);
        Ok(())
    };
    if store_initial {
        record(&mut traj, t0, rho0.elements(), StepCounts::default())?;
    }
    if targets.is_empty() {
        return Ok(traj);
    }
    let mut rhs = LindbladRhs::new(h, channels);
    integrate(
        &mut rhs,
        rho0.elements().clone(),
        t0,
        Schedule { targets, store_every },
        opts,
        opts.step_bound(h.max_frequency()),
        &trace_drift,
        &mut |t, y, steps| record(&mut traj, t, y, steps),
    )?;
    let final_drift = traj.diagnostics.last().map_or(0.0, |d| d.norm_drift);
    if final_drift > 10.0 * opts.rel_tol {
        traj.warnings.push(format!(
            "final trace drift {final_drift:.3e} exceeds 10 x rel_tol"
        ));
    }
    Ok(traj)
}

#[cfg(test)]
mod tests;
