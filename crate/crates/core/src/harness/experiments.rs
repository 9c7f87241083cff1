use rayon::prelude::*;
use serde::Serialize;

use super::{ExperimentConfig, HamiltonianModel, OPEN_G_T_STEP};
use crate::dynamics::{
    evolve_density, evolve_density_at, evolve_state, evolve_state_at, propagator, NoiseParams,
    SolverOptions,
};
use crate::error::{Error, Result};
use crate::fockspace::{
    fidelity, measure_qubit_x, measure_qubit_x_density, DensityMatrix, HilbertSpace,
    StateRef, StateVector,
};
use crate::hamiltonians::{
    frame_transform, h_cs, h_rwa, interaction_blocks, lab_blocks, rotating_blocks,
    bessel_j, BlockHamiltonian, Frame, SystemParams, J0_FIRST_ROOT,
};
use crate::linalg::C64;
use crate::squeezing::{logical_state, moment_ratio, LogicalLabel, MomentReport, SqueezeParam};
use crate::wigner::{cutoff_for_extent, symmetric_axis, wigner, PhaseSpaceGrid};

/// Half width and resolution of the snapshot grids.
const SNAPSHOT_HALF_WIDTH: f64 = 3.5;
const SNAPSHOT_POINTS: usize = 141;

#[derive(Debug, Clone, PartialEq)]
pub enum BranchState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl BranchState {
    pub fn as_state_ref(&self) -> StateRef<'_> {
        match self {
            BranchState::Pure(s) => StateRef::Pure(s),
            BranchState::Mixed(r) => StateRef::Mixed(r),
        }
    }
}

/// Outcome of one run of the preparation protocol. States are oscillator
/// states in the rotating frame; a branch with zero probability has no
/// state and no fidelity.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub plus_probability: f64,
    pub minus_probability: f64,
    pub plus_state: Option<BranchState>,
    pub minus_state: Option<BranchState>,
    pub fidelity_plus_vs_analytic: Option<f64>,
    pub fidelity_minus_vs_analytic: Option<f64>,
    /// `2 i g_cs t_end`
    pub xi: C64,
    pub t_end: f64,
    pub warnings: Vec<String>,
}

/// `(gamma_1 / g, gamma_phi / g)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateCombo {
    pub gamma_1_over_g: f64,
    pub gamma_phi_over_g: f64,
}

impl RateCombo {
    pub const fn new(gamma_1_over_g: f64, gamma_phi_over_g: f64) -> Self {
        RateCombo {
            gamma_1_over_g,
            gamma_phi_over_g,
        }
    }

    /// `"0.1/1.0"`
    pub fn label(&self) -> String {
        format!("{:?}/{:?}", self.gamma_1_over_g, self.gamma_phi_over_g)
    }
}

pub const FIG4_COMBOS: [RateCombo; 4] = [
    RateCombo::new(0.1, 0.1),
    RateCombo::new(1.0, 0.1),
    RateCombo::new(0.1, 1.0),
    RateCombo::new(1.0, 1.0),
];

#[derive(Debug, Clone, PartialEq)]
pub struct OpenCurveRow {
    pub combo: String,
    pub g_t: f64,
    pub fidelity: f64,
    /// `|Tr rho - 1|` of the open run at this sample.
    pub trace_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WhichSnapshot {
    Fig1Sym,
    Fig1Antisym,
    OpenEndstate,
}

impl WhichSnapshot {
    pub fn label(self) -> &'static str {
        match self {
            WhichSnapshot::Fig1Sym => "fig1_sym",
            WhichSnapshot::Fig1Antisym => "fig1_antisym",
            WhichSnapshot::OpenEndstate => "open_endstate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SnapshotMeta {
    pub label: String,
    pub xi_re: f64,
    pub xi_im: f64,
    pub cutoff: usize,
    pub convention: String,
}

/// Plus branches at the end of the open run and of its closed counterpart.
#[derive(Debug, Clone, PartialEq)]
pub struct EndStates {
    pub closed_plus: StateVector,
    pub open_plus: DensityMatrix,
    pub xi: C64,
}

/// `A_bar` in `[0.5, 4.5]`, step 0.05.
pub fn amplitude_grid() -> Vec<f64> {
    (0..=80).map(|k| (50 + 5 * k) as f64 / 100.0).collect()
}

/// Couplings of the `g`-sweep; `paper_scale` adds the two weakest.
pub fn coupling_grid(paper_scale: bool) -> Vec<f64> {
    let mut grid = vec![1e-3, 3e-3, 1e-2, 3e-2, 1e-1];
    if paper_scale {
        grid.splice(0..0, [1e-4, 3e-4]);
    }
    grid
}

/// `r` in `[0.05, 3]`, step 0.05.
pub fn r_grid() -> Vec<f64> {
    (1..=60).map(|k| k as f64 / 20.0).collect()
}

fn initial_state(space: HilbertSpace) -> Result<StateVector> {
    let vac = StateVector::fock(space.oscillator_part(), 0)?;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::product([C64::new(h, 0.0), C64::new(h, 0.0)], &vac)
}

fn blocks(model: HamiltonianModel, params: &SystemParams, space: HilbertSpace) -> Result<BlockHamiltonian> {
    match model {
        HamiltonianModel::Lab => lab_blocks(params, space),
        HamiltonianModel::Interaction => interaction_blocks(params, space),
        HamiltonianModel::Rotating => rotating_blocks(params, space),
        HamiltonianModel::Rwa => Ok(BlockHamiltonian::constant(h_rwa(params, space)?)),
        HamiltonianModel::Cs => Ok(BlockHamiltonian::constant(h_cs(params, space)?)),
    }
}

/// Frame taking a state of `model` to the rotating frame.
fn to_rotating(model: HamiltonianModel) -> Option<Frame> {
    match model {
        HamiltonianModel::Lab => Some(Frame::V),
        HamiltonianModel::Interaction => Some(Frame::V2),
        _ => None,
    }
}

/// Closed evolution of `psi0` to `t_end`, returned in the rotating frame.
fn evolve_closed(
    model: HamiltonianModel,
    params: &SystemParams,
    psi0: &StateVector,
    t_end: f64,
    opts: &SolverOptions,
    warnings: &mut Vec<String>,
) -> Result<StateVector> {
    if t_end == 0.0 {
        return Ok(psi0.clone());
    }
    let space = psi0.space();
    let psi = match model {
        HamiltonianModel::Rwa => propagator(&h_rwa(params, space)?, t_end)?.apply(psi0)?,
        HamiltonianModel::Cs => propagator(&h_cs(params, space)?, t_end)?.apply(psi0)?,
        _ => {
            let h = blocks(model, params, space)?;
            let traj = evolve_state(&h, psi0, 0.0, t_end, opts)?;
            warnings.extend(traj.warnings.iter().cloned());
            traj.into_final_state()
        }
    };
    match to_rotating(model) {
        Some(frame) => frame_transform(params, space, t_end, frame)?.apply(&psi),
        None => Ok(psi),
    }
}

fn analytic_fidelity(label: LogicalLabel, xi: SqueezeParam, state: &BranchState) -> Result<Option<f64>> {
    if label == LogicalLabel::OneL && xi.r() == 0.0 {
        return Ok(None);
    }
    let space = state.as_state_ref().space();
    let target = logical_state(label, xi, space)?;
    Ok(Some(fidelity(&target, state.as_state_ref())?))
}

/// Prepares `|0> (|e> + |g>)/sqrt(2)`, evolves it to `t_end` and measures
/// the qubit in the `sigma_x` basis. Open runs (any nonzero rate) use the
/// interaction-frame model.
pub fn run_protocol(config: &ExperimentConfig) -> Result<ProtocolResult> {
    config.validate()?;
    let params = config.system;
    let space = HilbertSpace::composite(config.fock_cutoff)?;
    let psi0 = initial_state(space)?;
    let t_end = config.t_end();
    let xi = SqueezeParam::from_conditional_squeezing(params.g_cs()?, t_end)?;
    let mut warnings = Vec::new();

    let (p_plus, p_minus, plus, minus) = if config.noise.is_closed() {
        let psi = evolve_closed(config.hamiltonian_model, &params, &psi0, t_end, &config.solver, &mut warnings)?;
        let m = measure_qubit_x(&psi)?;
        (
            m.plus.probability,
            m.minus.probability,
            m.plus.state.map(BranchState::Pure),
            m.minus.state.map(BranchState::Pure),
        )
    } else {
        if config.hamiltonian_model != HamiltonianModel::Interaction {
            return Err(Error::Config(
                "open-system runs require hamiltonian_model = interaction".to_string(),
            ));
        }
        let rho0 = DensityMatrix::from_pure(&psi0);
        let rho = if t_end == 0.0 {
            rho0
        } else {
            let h = interaction_blocks(&params, space)?;
            let traj = evolve_density(&h, &config.noise, &rho0, 0.0, t_end, &config.solver)?;
            warnings.extend(traj.warnings.iter().cloned());
            traj.into_final_state()
        };
        // The remaining frame change is a qubit rotation about x, which
        // leaves the sigma_x branches untouched.
        let m = measure_qubit_x_density(&rho)?;
        (
            m.plus.probability,
            m.minus.probability,
            m.plus.state.map(BranchState::Mixed),
            m.minus.state.map(BranchState::Mixed),
        )
    };

    let fid = |label, s: &Option<BranchState>| -> Result<Option<f64>> {
        match s {
            Some(state) => analytic_fidelity(label, xi, state),
            None => Ok(None),
        }
    };
    Ok(ProtocolResult {
        plus_probability: p_plus,
        minus_probability: p_minus,
        fidelity_plus_vs_analytic: fid(LogicalLabel::ZeroL, &plus)?,
        fidelity_minus_vs_analytic: fid(LogicalLabel::OneL, &minus)?,
        plus_state: plus,
        minus_state: minus,
        xi: xi.xi(),
        t_end,
        warnings,
    })
}

/// Plus-branch fidelity between `model` and `H_cs` evolution to `t_end`.
fn branch_fidelity(config: &ExperimentConfig, params: &SystemParams, t_end: f64) -> Result<f64> {
    let space = HilbertSpace::composite(config.fock_cutoff)?;
    let psi0 = initial_state(space)?;
    let mut warnings = Vec::new();
    let psi = evolve_closed(config.hamiltonian_model, params, &psi0, t_end, &config.solver, &mut warnings)?;
    let reference = evolve_closed(HamiltonianModel::Cs, params, &psi0, t_end, &config.solver, &mut warnings)?;
    let plus = |s: &StateVector| -> Result<StateVector> {
        measure_qubit_x(s)?
            .plus
            .state
            .ok_or_else(|| Error::DegenerateState("empty plus branch".to_string()))
    };
    fidelity(&plus(&psi)?, &plus(&reference)?)
}

fn check_closed(config: &ExperimentConfig) -> Result<()> {
    config.validate()?;
    if !config.noise.is_closed() {
        return Err(Error::Config("sweeps are closed-system runs; set all rates to 0".to_string()));
    }
    Ok(())
}

/// End time giving every sweep point the squeezing strength
/// `|xi| = 2 J_2(x_0) g t` reached at the first `J_0` root `x_0` after
/// `t_end_in_g_units`.
fn sweep_t_end(config: &ExperimentConfig, params: &SystemParams) -> Result<f64> {
    let r = 2.0 * bessel_j(2, J0_FIRST_ROOT)? * config.t_end_in_g_units;
    let g_cs = params.g_cs()?;
    if !(g_cs.abs() > 0.0) {
        return Err(Error::OutOfRange(format!(
            "g_cs vanishes at A_bar = {}, g = {}",
            params.a_bar(),
            params.g
        )));
    }
    Ok(r / (2.0 * g_cs.abs()))
}

/// `(A_bar, fidelity)` at fixed `g` and fixed `|xi|`.
pub fn sweep_amplitude(config: &ExperimentConfig, a_bar_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_closed(config)?;
    a_bar_grid
        .par_iter()
        .map(|&a| {
            let params = config.system.with_a_bar(a);
            Ok((a, branch_fidelity(config, &params, sweep_t_end(config, &params)?)?))
        })
        .collect()
}

/// `(g, fidelity)` at the configured `A_bar` and fixed `|xi|`.
pub fn sweep_coupling(config: &ExperimentConfig, g_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_closed(config)?;
    g_grid
        .par_iter()
        .map(|&g| {
            let params = config.system.with_g(g);
            Ok((g, branch_fidelity(config, &params, sweep_t_end(config, &params)?)?))
        })
        .collect()
}

/// Long-format `(r, p, ratio)` rows, `r` major.
pub fn moment_ratio_curves(r_grid: &[f64], p_set: &[u32]) -> Result<Vec<MomentReport>> {
    if let Some(r) = r_grid.iter().find(|r| !(**r > 0.0)) {
        return Err(Error::OutOfRange(format!("r must be positive, got {r}")));
    }
    let mut rows = Vec::with_capacity(r_grid.len() * p_set.len());
    for &r in r_grid {
        for &p in p_set {
            rows.push(moment_ratio(r, p)?);
        }
    }
    Ok(rows)
}

fn open_times(config: &ExperimentConfig) -> Vec<(f64, f64)> {
    let n = (config.t_end_in_g_units / OPEN_G_T_STEP).round() as usize;
    (0..=n)
        .map(|k| {
            let g_t = k as f64 / (1.0 / OPEN_G_T_STEP).round();
            (g_t, g_t / config.system.g)
        })
        .collect()
}

fn reference_options(opts: &SolverOptions) -> SolverOptions {
    let mut o = *opts;
    o.rel_tol = o.rel_tol.min(1e-9);
    o.abs_tol = o.abs_tol.min(1e-12);
    o
}

fn plus_pure(psi: &StateVector) -> Result<StateVector> {
    measure_qubit_x(psi)?
        .plus
        .state
        .ok_or_else(|| Error::DegenerateState("empty plus branch".to_string()))
}

fn plus_mixed(rho: &DensityMatrix) -> Result<DensityMatrix> {
    measure_qubit_x_density(rho)?
        .plus
        .state
        .ok_or_else(|| Error::DegenerateState("empty plus branch".to_string()))
}

fn combo_noise(config: &ExperimentConfig, combo: RateCombo) -> NoiseParams {
    let g = config.system.g;
    NoiseParams {
        gamma_1: combo.gamma_1_over_g * g,
        gamma_phi: combo.gamma_phi_over_g * g,
        gamma_m: config.noise.gamma_m,
        n_m_th: config.noise.n_m_th,
    }
}

/// Plus-branch fidelity of the open run against the closed run on the
/// `g t` grid `0, 0.05, ..., t_end_in_g_units`, one curve per combo.
/// Oscillator rates come from `config.noise`.
pub fn open_fidelity_curves(config: &ExperimentConfig, combos: &[RateCombo]) -> Result<Vec<OpenCurveRow>> {
    config.validate()?;
    if config.system.g == 0.0 {
        return Err(Error::Config("open curves need g > 0".to_string()));
    }
    let space = HilbertSpace::composite(config.fock_cutoff)?;
    let psi0 = initial_state(space)?;
    let h = interaction_blocks(&config.system, space)?;
    let grid = open_times(config);
    let times: Vec<f64> = grid.iter().map(|&(_, t)| t).collect();
    let closed = evolve_state_at(&h, &psi0, 0.0, &times, &reference_options(&config.solver))?;
    let closed_plus: Vec<StateVector> = closed.states.iter().map(plus_pure).collect::<Result<_>>()?;
    let rho0 = DensityMatrix::from_pure(&psi0);

    let curves: Vec<Vec<OpenCurveRow>> = combos
        .par_iter()
        .map(|&combo| {
            let noise = combo_noise(config, combo);
            let traj = evolve_density_at(&h, &noise, &rho0, 0.0, &times, &config.solver)?;
            let label = combo.label();
            grid.iter()
                .zip(&traj.states)
                .zip(&closed_plus)
                .zip(&traj.diagnostics)
                .map(|(((&(g_t, _), rho), psi), diag)| {
                    Ok(OpenCurveRow {
                        combo: label.clone(),
                        g_t,
                        fidelity: fidelity(psi, &plus_mixed(rho)?)?,
                        trace_drift: diag.norm_drift,
                    })
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    Ok(curves.into_iter().flatten().collect())
}

/// Plus branches at `t_end` of the closed run and of the open run with
/// `config.noise`, both from the interaction-frame model.
pub fn end_states(config: &ExperimentConfig) -> Result<EndStates> {
    config.validate()?;
    let t_end = config.t_end();
    if t_end == 0.0 {
        return Err(Error::Config("end states need t_end_in_g_units > 0".to_string()));
    }
    let space = HilbertSpace::composite(config.fock_cutoff)?;
    let psi0 = initial_state(space)?;
    let h = interaction_blocks(&config.system, space)?;
    let closed = evolve_state(&h, &psi0, 0.0, t_end, &reference_options(&config.solver))?;
    let open = evolve_density(&h, &config.noise, &DensityMatrix::from_pure(&psi0), 0.0, t_end, &config.solver)?;
    let xi = SqueezeParam::from_conditional_squeezing(config.system.g_cs()?, t_end)?;
    Ok(EndStates {
        closed_plus: plus_pure(closed.final_state())?,
        open_plus: plus_mixed(open.final_state())?,
        xi: xi.xi(),
    })
}

/// Wigner function of a code word at `xi = i` or of the open end state,
/// on a `141 x 141` grid over `[-3.5, 3.5]^2`.
pub fn wigner_snapshot(config: &ExperimentConfig, which: WhichSnapshot) -> Result<(PhaseSpaceGrid, SnapshotMeta)> {
    config.validate()?;
    let axis = symmetric_axis(SNAPSHOT_HALF_WIDTH, SNAPSHOT_POINTS);
    let cutoff = cutoff_for_extent(config.fock_cutoff, SNAPSHOT_HALF_WIDTH * std::f64::consts::SQRT_2);
    let (grid, xi) = match which {
        WhichSnapshot::Fig1Sym | WhichSnapshot::Fig1Antisym => {
            let label = if which == WhichSnapshot::Fig1Sym {
                LogicalLabel::ZeroL
            } else {
                LogicalLabel::OneL
            };
            let xi = SqueezeParam::new(1.0, std::f64::consts::FRAC_PI_2)?;
            let psi = logical_state(label, xi, HilbertSpace::oscillator(config.fock_cutoff)?)?;
            (wigner(&psi.pad_to(cutoff)?, &axis, &axis)?, xi.xi())
        }
        WhichSnapshot::OpenEndstate => {
            let states = end_states(config)?;
            (wigner(&states.open_plus.pad_to(cutoff)?, &axis, &axis)?, states.xi)
        }
    };
    let meta = SnapshotMeta {
        label: which.label().to_string(),
        xi_re: xi.re,
        xi_im: xi.im,
        cutoff: config.fock_cutoff,
        convention: crate::wigner::CONVENTION.to_string(),
    };
    Ok((grid, meta))
}
