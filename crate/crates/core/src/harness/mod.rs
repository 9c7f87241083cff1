//! Experiment orchestration: the state-preparation protocol, the parameter
//! sweeps, open-system fidelity curves, Wigner snapshots and the
//! validation report.

mod config;
mod experiments;
mod output;
mod validate;

pub use config::{load_config, parse_config, ExperimentConfig, HamiltonianModel};
pub use experiments::{
    amplitude_grid, coupling_grid, end_states, moment_ratio_curves, open_fidelity_curves,
    r_grid, run_protocol, sweep_amplitude, sweep_coupling, wigner_snapshot, BranchState,
    EndStates, OpenCurveRow, ProtocolResult, RateCombo, SnapshotMeta, WhichSnapshot,
    FIG4_COMBOS,
};
pub use output::{
    amplitude_csv, coupling_csv, format_float, moment_csv, open_curves_csv, protocol_json,
    snapshot_json, wigner_csv, write_text,
};
pub use validate::{validate, validate_with, Check, ValidationOptions, ValidationReport};

use crate::dynamics::{NoiseParams, SolverOptions};
use crate::hamiltonians::{bessel_j, SystemParams, J0_FIRST_ROOT};

/// `g t_end` giving `2 g_cs t_end = 1` at the first `J_0` root.
pub fn unit_squeezing_g_t() -> f64 {
    let j2 = bessel_j(2, J0_FIRST_ROOT).expect("in range");
    0.5 / j2
}

/// `g t_end` of the open-system curves.
pub const OPEN_END_G_T: f64 = 1.2;

/// Spacing of the `g t` samples of the open-system curves.
pub const OPEN_G_T_STEP: f64 = 0.05;

/// Coupling of the reduced-cost sweeps and open runs.
pub const DESK_G_SWEEP: f64 = 1e-3;
pub const DESK_G_OPEN: f64 = 1e-2;

/// `gamma_m / g` and thermal occupation of the oscillator bath.
pub const OPEN_GAMMA_M_OVER_G: f64 = 0.01;
pub const OPEN_N_TH: f64 = 1.0;

pub const CLOSED_CUTOFF: usize = 120;
pub const OPEN_CUTOFF: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Protocol,
    Fig2a,
    Fig2b,
    Fig3,
    Fig4,
    Wigner,
    Validate,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::Protocol => "protocol",
            Experiment::Fig2a => "fig2a",
            Experiment::Fig2b => "fig2b",
            Experiment::Fig3 => "fig3",
            Experiment::Fig4 => "fig4",
            Experiment::Wigner => "wigner",
            Experiment::Validate => "validate",
        }
    }
}

/// Starting configuration of each experiment; a config file is applied on
/// top of it. `paper_scale` selects `g = 1e-4` throughout.
pub fn default_config(experiment: Experiment, paper_scale: bool) -> ExperimentConfig {
    let reference_g = SystemParams::default().g;
    let (g, model, cutoff, g_t, noise, solver, ext) = match experiment {
        Experiment::Protocol | Experiment::Validate => (
            reference_g,
            HamiltonianModel::Cs,
            CLOSED_CUTOFF,
            unit_squeezing_g_t(),
            NoiseParams::default(),
            SolverOptions::closed(),
            "json",
        ),
        Experiment::Fig2a | Experiment::Fig2b | Experiment::Fig3 => (
            if paper_scale { reference_g } else { DESK_G_SWEEP },
            HamiltonianModel::Rotating,
            OPEN_CUTOFF,
            unit_squeezing_g_t(),
            NoiseParams::default(),
            SolverOptions::closed(),
            "csv",
        ),
        Experiment::Fig4 | Experiment::Wigner => {
            let g = if paper_scale { reference_g } else { DESK_G_OPEN };
            (
                g,
                HamiltonianModel::Interaction,
                OPEN_CUTOFF,
                OPEN_END_G_T,
                NoiseParams {
                    gamma_1: g,
                    gamma_phi: g,
                    gamma_m: OPEN_GAMMA_M_OVER_G * g,
                    n_m_th: OPEN_N_TH,
                },
                SolverOptions::open(),
                "csv",
            )
        }
    };
    ExperimentConfig {
        system: SystemParams::default().with_g(g),
        noise,
        fock_cutoff: cutoff,
        solver,
        hamiltonian_model: model,
        t_end_in_g_units: g_t,
        output_path: format!("{}.{ext}", experiment.name()),
    }
}
