//! Entangle, squeeze and measure: the qubit outcome selects one of the two
//! squeezed-vacuum code words.
//!
//! ```text
//! cargo run --release --example state_preparation
//! ```

use condsqueeze::harness::{default_config, run_protocol, Experiment, HamiltonianModel};
use condsqueeze::squeezing::normalization_constants;

fn main() -> condsqueeze::Result<()> {
    let (n_plus, n_minus) = normalization_constants(1.0);
    println!("expected P(+) = {:.8}, P(-) = {:.8}", n_plus / 4.0, n_minus / 4.0);

    let mut config = default_config(Experiment::Protocol, false);
    config.fock_cutoff = 60;
    for model in [HamiltonianModel::Cs, HamiltonianModel::Rwa, HamiltonianModel::Rotating] {
        config.hamiltonian_model = model;
        let r = run_protocol(&config)?;
        println!(
            "{:<9} P(+) = {:.8}  P(-) = {:.8}  F(+, 0_L) = {:.8}  F(-, 1_L) = {:.8}",
            model.name(),
            r.plus_probability,
            r.minus_probability,
            r.fidelity_plus_vs_analytic.unwrap_or(f64::NAN),
            r.fidelity_minus_vs_analytic.unwrap_or(f64::NAN),
        );
    }
    Ok(())
}
