//! Flat `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! system.g = 1e-3
//! hamiltonian_model = rotating
//! ```
//!
//! Keys mirror [`ExperimentConfig`] with dotted paths; unknown or repeated
//! keys are errors.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::dynamics::{NoiseParams, SolverMethod, SolverOptions};
use crate::error::{Error, Result};
use crate::hamiltonians::SystemParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HamiltonianModel {
    Lab,
    Interaction,
    Rotating,
    Rwa,
    Cs,
}

impl HamiltonianModel {
    pub fn name(self) -> &'static str {
        match self {
            HamiltonianModel::Lab => "lab",
            HamiltonianModel::Interaction => "interaction",
            HamiltonianModel::Rotating => "rotating",
            HamiltonianModel::Rwa => "rwa",
            HamiltonianModel::Cs => "cs",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "lab" => HamiltonianModel::Lab,
            "interaction" => HamiltonianModel::Interaction,
            "rotating" => HamiltonianModel::Rotating,
            "rwa" => HamiltonianModel::Rwa,
            "cs" => HamiltonianModel::Cs,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub system: SystemParams,
    pub noise: NoiseParams,
    pub fock_cutoff: usize,
    pub solver: SolverOptions,
    pub hamiltonian_model: HamiltonianModel,
    /// End time in units of `1/g`.
    pub t_end_in_g_units: f64,
    pub output_path: String,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let wrap = |e: Error| Error::Config(e.to_string());
        self.system.validate().map_err(wrap)?;
        self.noise.validate().map_err(wrap)?;
        self.solver.validate().map_err(wrap)?;
        if self.fock_cutoff == 0 {
            return Err(Error::Config("fock_cutoff must be >= 1".to_string()));
        }
        if !(self.t_end_in_g_units >= 0.0) || !self.t_end_in_g_units.is_finite() {
            return Err(Error::Config(format!(
                "t_end_in_g_units must be finite and >= 0, got {}",
                self.t_end_in_g_units
            )));
        }
        if self.t_end_in_g_units > 0.0 && self.system.g == 0.0 {
            return Err(Error::Config("a positive end time needs g > 0".to_string()));
        }
        Ok(())
    }

    /// End time `t_end_in_g_units / g` (zero when the end time is zero).
    pub fn t_end(&self) -> f64 {
        if self.t_end_in_g_units == 0.0 {
            0.0
        } else {
            self.t_end_in_g_units / self.system.g
        }
    }

    /// Renders the configuration in the file format read by [`parse_config`].
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("system.omega_q", fmt(self.system.omega_q));
        line("system.omega_m", fmt(self.system.omega_m));
        line("system.omega_d", fmt(self.system.omega_d));
        line("system.amplitude_A", fmt(self.system.amplitude_a));
        line("system.g", fmt(self.system.g));
        line("noise.gamma_1", fmt(self.noise.gamma_1));
        line("noise.gamma_phi", fmt(self.noise.gamma_phi));
        line("noise.gamma_m", fmt(self.noise.gamma_m));
        line("noise.n_m_th", fmt(self.noise.n_m_th));
        line("fock_cutoff", self.fock_cutoff.to_string());
        line(
            "solver.method",
            match self.solver.method {
                SolverMethod::AdaptiveEmbedded => "adaptive_embedded",
                SolverMethod::FixedRk4 => "fixed_rk4",
            }
            .to_string(),
        );
        line("solver.rel_tol", fmt(self.solver.rel_tol));
        line("solver.abs_tol", fmt(self.solver.abs_tol));
        line("solver.max_step", fmt(self.solver.max_step));
        line("solver.fixed_step", fmt(self.solver.fixed_step));
        line("solver.store_every", self.solver.store_every.to_string());
        line("hamiltonian_model", self.hamiltonian_model.name().to_string());
        line("t_end_in_g_units", fmt(self.t_end_in_g_units));
        line("output_path", self.output_path.clone());
        s
    }
}

fn fmt(x: f64) -> String {
    if x.is_infinite() {
        "inf".to_string()
    } else {
        format!("{x:e}")
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("{key}: expected a number, got '{value}'")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse::<usize>()
        .map_err(|_| Error::Config(format!("{key}: expected a non-negative integer, got '{value}'")))
}

/// Applies the settings in `text` on top of `base`.
pub fn parse_config(text: &str, base: ExperimentConfig) -> Result<ExperimentConfig> {
    let mut cfg = base;
    let mut seen = HashSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value'", lineno + 1)))?;
        let key = key.trim();
        let value = value.trim().trim_matches('"');
        if !seen.insert(key.to_string()) {
            return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
        }
        let f = || parse_f64(key, value);
        match key {
            "system.omega_q" => cfg.system.omega_q = f()?,
            "system.omega_m" => cfg.system.omega_m = f()?,
            "system.omega_d" => cfg.system.omega_d = f()?,
            "system.amplitude_A" => cfg.system.amplitude_a = f()?,
            "system.g" => cfg.system.g = f()?,
            "noise.gamma_1" => cfg.noise.gamma_1 = f()?,
            "noise.gamma_phi" => cfg.noise.gamma_phi = f()?,
            "noise.gamma_m" => cfg.noise.gamma_m = f()?,
            "noise.n_m_th" => cfg.noise.n_m_th = f()?,
            "fock_cutoff" => cfg.fock_cutoff = parse_usize(key, value)?,
            "solver.method" => {
                cfg.solver.method = match value {
                    "adaptive_embedded" => SolverMethod::AdaptiveEmbedded,
                    "fixed_rk4" => SolverMethod::FixedRk4,
                    _ => {
                        return Err(Error::Config(format!(
                            "solver.method: expected adaptive_embedded or fixed_rk4, got '{value}'"
                        )))
                    }
                }
            }
            "solver.rel_tol" => cfg.solver.rel_tol = f()?,
            "solver.abs_tol" => cfg.solver.abs_tol = f()?,
            "solver.max_step" => cfg.solver.max_step = f()?,
            "solver.fixed_step" => cfg.solver.fixed_step = f()?,
            "solver.store_every" => cfg.solver.store_every = parse_usize(key, value)?,
            "hamiltonian_model" => {
                cfg.hamiltonian_model = HamiltonianModel::parse(value).ok_or_else(|| {
                    Error::Config(format!(
                        "hamiltonian_model: expected lab, interaction, rotating, rwa or cs, got '{value}'"
                    ))
                })?
            }
            "t_end_in_g_units" => cfg.t_end_in_g_units = f()?,
            "output_path" => cfg.output_path = value.to_string(),
            _ => {
                return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1)));
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and parses a configuration file on top of `base`.
pub fn load_config(path: &Path, base: ExperimentConfig) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, base)
}
