//! Invariant suite behind the `validate` command.

use serde::Serialize;

use super::{default_config, run_protocol, Experiment};
use crate::dynamics::{dissipators, evolve_density_with, evolve_state, lindblad_rhs, NoiseParams, SolverOptions};
use crate::error::Result;
use crate::fockspace::{
    annihilation, creation, fidelity, pauli, DensityMatrix, HilbertSpace, OperatorMatrix, PauliAxis, Qubit,
    StateVector,
};
use crate::hamiltonians::{
    bessel_j, frame_transform, h_cs, h_interaction, h_lab, h_rotating, h_rotating_expanded, jacobi_anger_partial,
    BlockHamiltonian, Frame, SystemParams, J0_FIRST_ROOT,
};
use crate::linalg::{c, trace, unitarity_error, CMatrix, C64};
use crate::squeezing::{
    kl_check, logical_state, moment_ratio, normalization_constants, number_moment, squeezed_vacuum,
    truncated_number_moment, LogicalLabel, SqueezeParam,
};
use crate::wigner::{cutoff_for_extent, symmetric_axis, wigner, wigner_direct};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub measured: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn at_most(name: &str, tolerance: f64, measured: f64) -> Self {
        Check {
            name: name.to_string(),
            tolerance,
            measured,
            passed: measured <= tolerance,
            error: None,
        }
    }

    fn from_result(name: &str, tolerance: f64, measured: Result<f64>) -> Self {
        match measured {
            Ok(m) => Check::at_most(name, tolerance, m),
            Err(e) => Check {
                name: name.to_string(),
                tolerance,
                measured: f64::NAN,
                passed: false,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain JSON value") + "\n"
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        self.checks
            .iter()
            .map(|c| {
                let mut line = format!(
                    "{} {:<32} measured {:.3e} tolerance {:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.measured,
                    c.tolerance
                );
                if let Some(e) = &c.error {
                    line.push_str(&format!(" ({e})"));
                }
                line + "\n"
            })
            .collect()
    }
}

/// Fault injection for exercising the report itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationOptions {
    /// Multiplies the rate of the `sigma_z` dephasing channel.
    pub dephasing_rate_scale: f64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        ValidationOptions {
            dephasing_rate_scale: 1.0,
        }
    }
}

pub fn validate() -> ValidationReport {
    validate_with(ValidationOptions::default())
}

pub fn validate_with(options: ValidationOptions) -> ValidationReport {
    let checks = vec![
        Check::from_result("ladder_commutator", 1e-12, ladder_commutator()),
        Check::from_result("squeeze_operator_vs_series", 1e-10, squeeze_operator_vs_series()),
        Check::from_result("kl_orthogonality", 1e-12, kl_orthogonality()),
        Check::from_result("moment_series_vs_operator", 1e-6, moment_series_vs_operator()),
        Check::from_result("moment_ratio_large_r_limit", 0.0, moment_ratio_limit()),
        Check::from_result("bessel_recurrence", 1e-10, bessel_recurrence()),
        Check::from_result("jacobi_anger", 1e-12, jacobi_anger()),
        Check::from_result("expansion_exact", 1e-12, expansion_exact()),
        Check::from_result("hamiltonian_hermiticity", 1e-12, hamiltonian_hermiticity()),
        Check::from_result("frame_unitarity", 1e-12, frame_unitarity()),
        Check::from_result("conditional_squeezing_identity", 1e-8, conditional_squeezing()),
        Check::from_result("protocol_plus_probability", 1e-6, protocol_probability()),
        Check::from_result("lindblad_trace_free", 1e-12, lindblad_trace_free()),
        Check::from_result("dephasing_oracle", 1e-6, dephasing(options.dephasing_rate_scale)),
        Check::from_result("amplitude_damping", 1e-6, amplitude_damping()),
        Check::from_result("wigner_vacuum", 1e-10, wigner_vacuum()),
        Check::from_result("wigner_normalization", 1e-3, wigner_normalization()),
        Check::from_result("wigner_fast_vs_direct", 1e-10, wigner_fast_vs_direct()),
    ];
    ValidationReport {
        passed: checks.iter().all(|c| c.passed),
        checks,
    }
}

fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unit_xi() -> Result<SqueezeParam> {
    SqueezeParam::new(1.0, std::f64::consts::FRAC_PI_2)
}

/// `[b, b^dagger] = 1` away from the truncation edge.
fn ladder_commutator() -> Result<f64> {
    let s = HilbertSpace::oscillator(20)?;
    let comm = annihilation(s).commutator(&creation(s))?;
    let n = s.oscillator_dim() - 1;
    let block = comm.elements().view((0, 0), (n, n)) - CMatrix::identity(n, n);
    Ok(max_abs(&block.into_owned()))
}

fn squeeze_operator_vs_series() -> Result<f64> {
    let s = HilbertSpace::oscillator(80)?;
    let xi = SqueezeParam::new(0.8, 0.7)?;
    let via_operator = crate::dynamics::squeeze_unitary(xi, s)?.apply(&StateVector::fock(s, 0)?)?;
    Ok(1.0 - fidelity(&via_operator, &squeezed_vacuum(xi, s)?)?)
}

fn kl_orthogonality() -> Result<f64> {
    Ok(kl_check(unit_xi()?, HilbertSpace::oscillator(200)?)?.off_diagonal_max)
}

fn moment_series_vs_operator() -> Result<f64> {
    let s = HilbertSpace::oscillator(200)?;
    let mut worst: f64 = 0.0;
    for label in [LogicalLabel::ZeroL, LogicalLabel::OneL] {
        let psi = logical_state(label, unit_xi()?, s)?;
        for p in 1..=4 {
            let series = number_moment(label, 1.0, p, crate::squeezing::MOMENT_TOLERANCE)?;
            let direct = truncated_number_moment(&psi, p)?;
            worst = worst.max((series - direct).abs() / direct.abs());
        }
    }
    Ok(worst)
}

/// `max_p (|1 - ratio(2.5)| - |1 - ratio(0.5)|)`; negative when the code
/// words are closer at large squeezing for every `p`.
fn moment_ratio_limit() -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for p in 1..=4 {
        let large = (1.0 - moment_ratio(2.5, p)?.ratio).abs();
        let small = (1.0 - moment_ratio(0.5, p)?.ratio).abs();
        worst = worst.max(large - small);
    }
    Ok(worst)
}

fn bessel_recurrence() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for x in [0.5, J0_FIRST_ROOT, 10.0, 30.0] {
        for n in 1..30 {
            let lhs = bessel_j(n - 1, x)? + bessel_j(n + 1, x)?;
            let rhs = 2.0 * n as f64 / x * bessel_j(n, x)?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

fn jacobi_anger() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for chi in [0.5, J0_FIRST_ROOT, 3.0] {
        for k in 0..200 {
            let tau = std::f64::consts::TAU * k as f64 / 200.0;
            let (cos_sum, sin_sum) = jacobi_anger_partial(chi, tau, 20)?;
            worst = worst
                .max((cos_sum - (chi * tau.sin()).cos()).abs())
                .max((sin_sum - (chi * tau.sin()).sin()).abs());
        }
    }
    Ok(worst)
}

fn sample_times() -> impl Iterator<Item = f64> {
    (0..20).map(|k| 0.37 * k as f64 + 0.11)
}

fn strong_params() -> Result<SystemParams> {
    SystemParams::resonant(20.0, J0_FIRST_ROOT, 0.1)
}

fn expansion_exact() -> Result<f64> {
    let p = strong_params()?;
    let s = HilbertSpace::composite(10)?;
    let mut worst: f64 = 0.0;
    for t in sample_times() {
        let exact = h_rotating(&p, s, t)?;
        worst = worst.max(exact.max_abs_diff(&h_rotating_expanded(&p, s, t, 30)?));
    }
    Ok(worst)
}

fn hamiltonian_hermiticity() -> Result<f64> {
    let p = strong_params()?;
    let s = HilbertSpace::composite(10)?;
    let mut worst: f64 = 0.0;
    for t in sample_times() {
        for h in [h_lab(&p, s, t)?, h_interaction(&p, s, t)?, h_rotating(&p, s, t)?] {
            worst = worst.max(h.hermiticity_error());
        }
    }
    Ok(worst)
}

fn frame_unitarity() -> Result<f64> {
    let p = strong_params()?;
    let s = HilbertSpace::composite(10)?;
    let mut worst: f64 = 0.0;
    for t in sample_times() {
        let v = frame_transform(&p, s, t, Frame::V)?;
        let v2v1 = frame_transform(&p, s, t, Frame::V2)?.checked_mul(&frame_transform(&p, s, t, Frame::V1)?)?;
        worst = worst.max(unitarity_error(v.elements())).max(v.max_abs_diff(&v2v1));
    }
    Ok(worst)
}

fn conditional_squeezing() -> Result<f64> {
    let p = SystemParams::default();
    let s = HilbertSpace::composite(120)?;
    let h = BlockHamiltonian::constant(h_cs(&p, s)?);
    let psi0 = StateVector::basis(s, Qubit::Excited, 0)?;
    let t = 0.5 / p.g_cs()?;
    let psi = evolve_state(&h, &psi0, 0.0, t, &SolverOptions::closed())?.into_final_state();
    let osc = s.oscillator_part();
    let excited = StateVector::new(osc, psi.amplitudes().rows(0, osc.oscillator_dim()).into_owned())?;
    Ok(1.0 - fidelity(&excited, &squeezed_vacuum(unit_xi()?, osc)?)?)
}

fn protocol_probability() -> Result<f64> {
    let result = run_protocol(&default_config(Experiment::Protocol, false))?;
    let (n_plus, _) = normalization_constants(1.0);
    Ok((result.plus_probability - n_plus / 4.0).abs())
}

fn lindblad_trace_free() -> Result<f64> {
    let s = HilbertSpace::composite(6)?;
    let d = s.total_dim();
    let m = CMatrix::from_fn(d, d, |i, j| C64::new(((i * 7 + j * 3) % 5) as f64, ((i + 2 * j) % 3) as f64 - 1.0));
    let mut rho = &m * m.adjoint();
    let tr = trace(&rho);
    rho /= tr;
    let rho = DensityMatrix::new(s, rho)?;
    let h = h_interaction(&strong_params()?, s, 0.3)?;
    let noise = NoiseParams {
        gamma_1: 0.2,
        gamma_phi: 0.3,
        gamma_m: 0.1,
        n_m_th: 1.0,
    };
    Ok(trace(&lindblad_rhs(&h, &noise, &rho)?).norm())
}

/// Coherence of `(|e> + |g>)/sqrt(2)` under pure dephasing at
/// `gamma_phi t = 1`, against `exp(-gamma_phi t) / 2`.
fn dephasing(rate_scale: f64) -> Result<f64> {
    let s = HilbertSpace::composite(1)?;
    let gamma_phi = 0.25;
    let noise = NoiseParams {
        gamma_phi,
        ..Default::default()
    };
    let sz = pauli(PauliAxis::Z, s)?;
    let mut channels = dissipators(&noise, s)?;
    for ch in channels.iter_mut().filter(|ch| ch.operator == sz) {
        ch.rate *= rate_scale;
    }
    let plus = StateVector::product([c(1.0), c(1.0)], &StateVector::fock(s.oscillator_part(), 0)?)?;
    let h = BlockHamiltonian::constant(OperatorMatrix::zeros(s));
    let t = 1.0 / gamma_phi;
    let traj = evolve_density_with(&h, &channels, &DensityMatrix::from_pure(&plus), 0.0, &[t], &SolverOptions::open())?;
    let coherence = traj.final_state().elements()[(s.index(Qubit::Excited, 0), s.index(Qubit::Ground, 0))].norm();
    Ok((coherence - 0.5 * (-1.0f64).exp()).abs())
}

fn amplitude_damping() -> Result<f64> {
    let s = HilbertSpace::composite(1)?;
    let gamma_1 = 0.5;
    let noise = NoiseParams {
        gamma_1,
        ..Default::default()
    };
    let h = BlockHamiltonian::constant(OperatorMatrix::zeros(s));
    let rho0 = DensityMatrix::from_pure(&StateVector::basis(s, Qubit::Excited, 0)?);
    let t = 1.0 / gamma_1;
    let traj = evolve_density_with(&h, &dissipators(&noise, s)?, &rho0, 0.0, &[t], &SolverOptions::open())?;
    let e = s.index(Qubit::Excited, 0);
    Ok((traj.final_state().elements()[(e, e)].re - (-1.0f64).exp()).abs())
}

fn wigner_vacuum() -> Result<f64> {
    let vac = StateVector::fock(HilbertSpace::oscillator(10)?, 0)?;
    let grid = wigner(&vac, &[0.0], &[0.0])?;
    Ok((grid.value(0, 0) - std::f64::consts::FRAC_2_PI).abs())
}

fn wigner_normalization() -> Result<f64> {
    let axis = symmetric_axis(5.0, 101);
    let cutoff = cutoff_for_extent(0, 5.0 * std::f64::consts::SQRT_2);
    let vac = StateVector::fock(HilbertSpace::oscillator(cutoff)?, 0)?;
    Ok((wigner(&vac, &axis, &axis)?.normalization() - 1.0).abs())
}

fn wigner_fast_vs_direct() -> Result<f64> {
    let psi = logical_state(LogicalLabel::ZeroL, unit_xi()?, HilbertSpace::oscillator(40)?)?.pad_to(80)?;
    let mut worst: f64 = 0.0;
    for (re, im) in [(0.3, -0.2), (-1.1, 0.7), (0.0, 1.5)] {
        let fast = wigner(&psi, &[re], &[im])?.value(0, 0);
        let direct = wigner_direct(&psi, C64::new(re, im))?;
        worst = worst.max((fast - direct.re).abs()).max(direct.im.abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_and_catches_dephasing_mutation() {
        let report = validate();
        assert!(report.passed, "{}", report.summary());
        assert_eq!(report.checks.len(), 18);
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["checks"][0]["name"], "ladder_commutator");

        let mutated = validate_with(ValidationOptions { dephasing_rate_scale: 2.0 });
        let failed: Vec<_> = mutated.failures().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["dephasing_oracle"]);
    }
}
