use super::*;
use crate::fockspace::{fidelity, number, pauli, Qubit, PauliAxis};
use crate::hamiltonians::{
    frame_transform, h_cs, interaction_blocks, rotating_blocks, Frame, SystemParams, J0_FIRST_ROOT,
};
use crate::linalg::unitarity_error;
use crate::squeezing::squeezed_vacuum;
use std::sync::Arc;

fn composite(n: usize) -> HilbertSpace {
    HilbertSpace::composite(n).unwrap()
}

fn reference_params() -> SystemParams {
    SystemParams::default()
}

fn oscillator_part(psi: &StateVector, qubit: Qubit) -> StateVector {
    let space = psi.space();
    let d = space.oscillator_dim();
    let off = qubit.index() * d;
    StateVector::new(space.oscillator_part(), psi.amplitudes().rows(off, d).into_owned()).unwrap()
}

#[test]
fn zero_hamiltonian_is_identity() {
    let s = composite(5);
    let psi = StateVector::basis(s, Qubit::Ground, 3).unwrap();
    let h = BlockHamiltonian::constant(OperatorMatrix::zeros(s));
    let traj = evolve_state(&h, &psi, 0.0, 7.5, &SolverOptions::closed()).unwrap();
    assert_eq!(traj.times, vec![0.0, 7.5]);
    assert_eq!(traj.final_state(), &psi);
}

#[test]
fn conditional_squeezing_identity() {
    let s = composite(120);
    let p = reference_params();
    let g_cs = p.g_cs().unwrap();
    let h = BlockHamiltonian::constant(h_cs(&p, s).unwrap());
    let osc = s.oscillator_part();
    for (qubit, sign) in [(Qubit::Excited, 1.0), (Qubit::Ground, -1.0)] {
        let psi0 = StateVector::basis(s, qubit, 0).unwrap();
        let times: Vec<f64> = [0.2, 0.6, 1.0, 1.2].iter().map(|r| r / (2.0 * g_cs)).collect();
        let traj = evolve_state_at(&h, &psi0, 0.0, &times, &SolverOptions::closed()).unwrap();
        for (t, psi) in traj.times.iter().zip(&traj.states) {
            let xi = SqueezeParam::from_conditional_squeezing(sign * g_cs, *t).unwrap();
            let want = squeezed_vacuum(xi, osc).unwrap();
            let f = fidelity(&oscillator_part(psi, qubit), &want).unwrap();
            assert!(f >= 1.0 - 1e-8, "{qubit:?} at 2 g_cs t = {}: {f}", 2.0 * g_cs * t);
        }
        assert!(traj.max_drift() <= 10.0 * 1e-9);
    }
}

#[test]
fn propagator_matches_integrator() {
    let s = composite(40);
    let p = SystemParams::resonant(20.0, J0_FIRST_ROOT, 1e-2).unwrap();
    let hc = h_cs(&p, s).unwrap();
    let t = 0.8 / (2.0 * p.g_cs().unwrap());
    let u = propagator(&hc, t).unwrap();
    assert!(unitarity_error(u.elements()) < 1e-10);
    let psi0 = StateVector::basis(s, Qubit::Excited, 0).unwrap();
    let exact = u.apply(&psi0).unwrap();
    let opts = SolverOptions { rel_tol: 1e-10, ..SolverOptions::closed() };
    let traj = evolve_state(&BlockHamiltonian::constant(hc), &psi0, 0.0, t, &opts).unwrap();
    let diff = (exact.amplitudes() - traj.final_state().amplitudes()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    assert!(diff < 1e-9, "{diff:e}");
}

#[test]
fn propagator_special_cases() {
    let s = composite(4);
    let h = h_cs(&reference_params(), s).unwrap();
    assert!(propagator(&h, 0.0).unwrap().max_abs_diff(&crate::fockspace::identity(s)) < 1e-15);
    let n = number(s);
    let u = propagator(&n, 0.7).unwrap();
    for k in 0..s.total_dim() {
        let want = C64::from_polar(1.0, -0.7 * (k % 5) as f64);
        assert!((u.get(k, k) - want).norm() < 1e-14);
    }
}

/// Final state under the interaction-frame model, used by several tests.
fn interaction_problem() -> (BlockHamiltonian, StateVector, f64) {
    let s = composite(10);
    let p = SystemParams { omega_q: 20.0, omega_m: 1.0, omega_d: 1.0, amplitude_a: 0.6, g: 0.05 };
    let h = interaction_blocks(&p, s).unwrap();
    let psi0 = StateVector::product([c(1.0), c(1.0)], &StateVector::fock(s.oscillator_part(), 0).unwrap()).unwrap();
    (h, psi0, 6.0)
}

#[test]
fn rk4_is_fourth_order() {
    let (h, psi0, t1) = interaction_problem();
    let tight = SolverOptions { rel_tol: 1e-13, abs_tol: 1e-15, ..SolverOptions::closed() };
    let reference = evolve_state(&h, &psi0, 0.0, t1, &tight).unwrap().into_final_state();
    let error = |step: f64| {
        let psi = evolve_state(&h, &psi0, 0.0, t1, &SolverOptions::fixed_rk4(step)).unwrap().into_final_state();
        (psi.amplitudes() - reference.amplitudes()).norm()
    };
    let coarse = error(0.04);
    let fine = error(0.02);
    let ratio = coarse / fine;
    assert!((13.0..19.0).contains(&ratio), "ratio = {ratio}, errors {coarse:e} {fine:e}");
}

#[test]
fn store_every_and_output_times() {
    let (h, psi0, t1) = interaction_problem();
    let opts = SolverOptions { store_every: 5, ..SolverOptions::closed() };
    let traj = evolve_state(&h, &psi0, 0.0, t1, &opts).unwrap();
    assert!(traj.len() > 3);
    assert_eq!(traj.times[0], 0.0);
    assert_eq!(*traj.times.last().unwrap(), t1);
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    let at = evolve_state_at(&h, &psi0, 0.0, &[1.0, 2.5, 6.0], &SolverOptions::closed()).unwrap();
    assert_eq!(at.times, vec![1.0, 2.5, 6.0]);
    assert!(evolve_state_at(&h, &psi0, 0.0, &[2.0, 1.0], &SolverOptions::closed()).is_err());
    assert!(evolve_state(&h, &psi0, 1.0, 1.0, &SolverOptions::closed()).is_err());
}

#[test]
fn norm_drift_aborts() {
    let (h, psi0, t1) = interaction_problem();
    let sloppy = SolverOptions::fixed_rk4(0.9);
    match evolve_state(&h, &psi0, 0.0, t1, &sloppy) {
        Err(Error::NormDrift { .. }) => {}
        other => panic!("expected norm drift abort, got {other:?}"),
    }
}

#[test]
fn frame_equivalence() {
    let s = composite(16);
    let p = SystemParams::resonant(20.0, J0_FIRST_ROOT, 2e-2).unwrap();
    let psi0 = StateVector::product([c(1.0), c(1.0)], &StateVector::fock(s.oscillator_part(), 0).unwrap()).unwrap();
    let t1 = 9.3;
    let opts = SolverOptions::closed();
    let int = evolve_state(&interaction_blocks(&p, s).unwrap(), &psi0, 0.0, t1, &opts).unwrap();
    let rot = evolve_state(&rotating_blocks(&p, s).unwrap(), &psi0, 0.0, t1, &opts).unwrap();
    let v2 = frame_transform(&p, s, t1, Frame::V2).unwrap();
    let moved = v2.apply(int.final_state()).unwrap();
    let f = fidelity(&moved, rot.final_state()).unwrap();
    assert!(f >= 1.0 - 1e-8, "{f}");
}

#[test]
fn squeeze_unitary_matches_series() {
    let s = HilbertSpace::oscillator(120).unwrap();
    let xi = SqueezeParam::new(1.0, 0.0).unwrap();
    let u = squeeze_unitary(xi, s).unwrap();
    let vac = StateVector::fock(s, 0).unwrap();
    let f = fidelity(&u.apply(&vac).unwrap(), &squeezed_vacuum(xi, s).unwrap()).unwrap();
    assert!(f >= 1.0 - 1e-10, "{f}");
    let xi = SqueezeParam::new(0.9, 2.0).unwrap();
    let round_trip = squeeze_unitary(xi, s).unwrap().checked_mul(&squeeze_unitary(xi.negated(), s).unwrap()).unwrap();
    assert!(round_trip.max_abs_diff(&crate::fockspace::identity(s)) < 1e-8);
    assert!(squeeze_unitary(SqueezeParam::new(0.0, 0.0).unwrap(), s).unwrap().max_abs_diff(&crate::fockspace::identity(s)) < 1e-15);
    assert!(matches!(squeeze_unitary(SqueezeParam::new(2.5, 0.0).unwrap(), HilbertSpace::oscillator(30).unwrap()), Err(Error::Truncation { .. })));
}

fn random_density(s: HilbertSpace, seed: u64) -> DensityMatrix {
    // Deterministic pseudo-random Gram matrix.
    let d = s.total_dim();
    let mut x = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = || {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((x >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let a = CMatrix::from_fn(d, d, |_, _| C64::new(next(), next()));
    let m = &a * a.adjoint();
    let tr = crate::linalg::trace(&m).re;
    DensityMatrix::new(s, (&m + m.adjoint()) * c(0.5 / tr)).unwrap()
}

#[test]
fn lindblad_rhs_examples() {
    let s = composite(3);
    let p = SystemParams::resonant(20.0, 1.1, 3e-2).unwrap();
    let h = crate::hamiltonians::h_interaction(&p, s, 0.4).unwrap();
    let rho = random_density(s, 7);
    let closed = lindblad_rhs(&h, &NoiseParams::default(), &rho).unwrap();
    let comm = (h.elements() * rho.elements() - rho.elements() * h.elements()) * -I;
    assert!(crate::linalg::max_abs_diff(&closed, &comm) < 1e-15);

    let e0 = DensityMatrix::from_pure(&StateVector::basis(s, Qubit::Excited, 0).unwrap());
    let g0 = DensityMatrix::from_pure(&StateVector::basis(s, Qubit::Ground, 0).unwrap());
    let noise = NoiseParams { gamma_1: 0.3, ..Default::default() };
    let rhs = lindblad_rhs(&OperatorMatrix::zeros(s), &noise, &e0).unwrap();
    let want = (g0.elements() - e0.elements()) * c(0.3);
    assert!(crate::linalg::max_abs_diff(&rhs, &want) < 1e-16);
}

#[test]
fn lindblad_rhs_is_trace_free_and_sparse_path_agrees() {
    let s = composite(4);
    let p = SystemParams::resonant(20.0, 2.0, 5e-2).unwrap();
    let blocks = interaction_blocks(&p, s).unwrap();
    let noise = NoiseParams { gamma_1: 0.2, gamma_phi: 0.13, gamma_m: 0.07, n_m_th: 1.0 };
    let channels = dissipators(&noise, s).unwrap();
    let mut fast = LindbladRhs::new(&blocks, &channels);
    for seed in 0..50 {
        let rho = random_density(s, seed);
        let t = 0.37 * seed as f64;
        let dense = lindblad_rhs(&blocks.at(t), &noise, &rho).unwrap();
        assert!(crate::linalg::trace(&dense).norm() <= 1e-12);
        let mut out = CMatrix::zeros(s.total_dim(), s.total_dim());
        fast.eval(t, rho.elements(), &mut out);
        assert!(crate::linalg::max_abs_diff(&dense, &out) < 1e-13);
    }
}

#[test]
fn oscillator_decay() {
    let s = HilbertSpace::oscillator(3).unwrap();
    let noise = NoiseParams { gamma_m: 0.5, ..Default::default() };
    let rho0 = DensityMatrix::from_pure(&StateVector::fock(s, 1).unwrap());
    let h = BlockHamiltonian::constant(OperatorMatrix::zeros(s));
    let traj = evolve_density(&h, &noise, &rho0, 0.0, 2.0, &SolverOptions::open()).unwrap();
    let p1 = traj.final_state().elements()[(1, 1)].re;
    assert!((p1 - (-1.0f64).exp()).abs() < 1e-6, "{p1}");
}

fn dephasing_coherence(channels: &[Dissipator], s: HilbertSpace, t: f64) -> f64 {
    let plus = StateVector::product([c(1.0), c(1.0)], &StateVector::fock(s.oscillator_part(), 0).unwrap()).unwrap();
    let rho0 = DensityMatrix::from_pure(&plus);
    let h = BlockHamiltonian::constant(OperatorMatrix::zeros(s));
    let traj = evolve_density_with(&h, channels, &rho0, 0.0, &[t], &SolverOptions::open()).unwrap();
    let e0 = s.index(Qubit::Excited, 0);
    let g0 = s.index(Qubit::Ground, 0);
    traj.final_state().elements()[(e0, g0)].norm()
}

#[test]
fn dephasing_convention() {
    let s = composite(1);
    let gamma_phi = 0.25;
    let noise = NoiseParams { gamma_phi, ..Default::default() };
    // (gamma_phi/2)(sz rho sz - rho) multiplies rho_eg by -gamma_phi, so the
    // coherence is exp(-gamma_phi t) / 2.
    let coherence = dephasing_coherence(&dissipators(&noise, s).unwrap(), s, 1.0 / gamma_phi);
    assert!((coherence - 0.5 * (-1.0f64).exp()).abs() < 1e-6, "{coherence}");
    // Rate gamma_phi instead of gamma_phi/2 doubles the decay exponent.
    let wrong = [Dissipator { rate: gamma_phi, operator: pauli(PauliAxis::Z, s).unwrap() }];
    let coherence = dephasing_coherence(&wrong, s, 1.0 / gamma_phi);
    assert!((coherence - 0.5 * (-2.0f64).exp()).abs() < 1e-6, "{coherence}");
}

#[test]
fn thermal_relaxation() {
    let s = composite(30);
    let g = 1e-2;
    let osc = s.oscillator_part();
    let n = number(s);
    let id = crate::fockspace::identity(s);
    let h = BlockHamiltonian::constant(&pauli(PauliAxis::Z, s).unwrap().checked_mul(&(&(&n * 2.0) + &id)).unwrap() * g);
    let noise = NoiseParams { gamma_m: 0.5, n_m_th: 1.0, ..Default::default() };
    let rho0 = DensityMatrix::from_pure(&StateVector::product([c(1.0), c(0.0)], &StateVector::fock(osc, 0).unwrap()).unwrap());
    let traj = evolve_density(&h, &noise, &rho0, 0.0, 40.0, &SolverOptions::open()).unwrap();
    let mean = crate::fockspace::expectation(&n, traj.final_state()).unwrap().re;
    assert!((mean - 1.0).abs() <= 1e-3, "{mean}");
    assert!(traj.max_drift() <= 1e-6);
}

#[test]
fn closed_limit_of_master_equation() {
    let (h, psi0, t1) = interaction_problem();
    let pure = evolve_state(&h, &psi0, 0.0, t1, &SolverOptions::closed()).unwrap();
    let opts = SolverOptions { rel_tol: 1e-9, abs_tol: 1e-12, ..SolverOptions::open() };
    let mixed = evolve_density(&h, &NoiseParams::default(), &DensityMatrix::from_pure(&psi0), 0.0, t1, &opts).unwrap();
    let f = fidelity(pure.final_state(), mixed.final_state()).unwrap();
    assert!(f >= 1.0 - 1e-8, "{f}");
    assert!(mixed.warnings.is_empty());
}

#[test]
fn adaptive_and_fixed_agree_on_open_problem() {
    let s = composite(12);
    let p = SystemParams::resonant(20.0, J0_FIRST_ROOT, 1e-2).unwrap();
    let h = interaction_blocks(&p, s).unwrap();
    let noise = NoiseParams { gamma_1: 1e-2, gamma_phi: 1e-2, gamma_m: 1e-4, n_m_th: 1.0 };
    let psi0 = StateVector::product([c(1.0), c(1.0)], &StateVector::fock(s.oscillator_part(), 0).unwrap()).unwrap();
    let rho0 = DensityMatrix::from_pure(&psi0);
    let t1 = 30.0;
    let adaptive = evolve_density(&h, &noise, &rho0, 0.0, t1, &SolverOptions::open()).unwrap();
    let fixed = evolve_density(&h, &noise, &rho0, 0.0, t1, &SolverOptions::fixed_rk4(0.02)).unwrap();
    let diff = crate::linalg::max_abs_diff(adaptive.final_state().elements(), fixed.final_state().elements());
    assert!(diff < 10.0 * 1e-7, "{diff:e}");
}

#[test]
fn coefficient_closures_drive_time_dependence() {
    let s = HilbertSpace::oscillator(2).unwrap();
    let mut h = BlockHamiltonian::new(s, 1.0);
    h.push(number(s), Arc::new(|t: f64| c(t)));
    let psi0 = StateVector::normalized(s, crate::linalg::CVector::from_vec(vec![c(1.0), c(1.0), c(0.0)])).unwrap();
    let out = evolve_state(&h, &psi0, 0.0, 2.0, &SolverOptions::closed()).unwrap().into_final_state();
    // Phase of |1> is -int_0^2 t dt = -2.
    let rel = out.amplitudes()[1] / out.amplitudes()[0];
    assert!((rel - C64::from_polar(1.0, -2.0)).norm() < 1e-8);
}
