//! Fidelity of the prepared code word under qubit decay and dephasing and
//! thermal oscillator damping, relative to the noiseless run.
//!
//! ```text
//! cargo run --release --example open_system
//! ```

use condsqueeze::harness::{default_config, open_fidelity_curves, Experiment, FIG4_COMBOS};

fn main() -> condsqueeze::Result<()> {
    let mut config = default_config(Experiment::Fig4, false);
    config.fock_cutoff = 40;
    println!(
        "g = {}, gamma_m = {:.0e}, n_th = {}, cutoff = {}",
        config.system.g, config.noise.gamma_m, config.noise.n_m_th, config.fock_cutoff
    );
    let rows = open_fidelity_curves(&config, &FIG4_COMBOS)?;

    print!("  g t ");
    for combo in &FIG4_COMBOS {
        print!("  {:>8}", combo.label());
    }
    println!();
    let per_curve = rows.len() / FIG4_COMBOS.len();
    for k in (0..per_curve).step_by(4) {
        print!("{:>5.2} ", rows[k].g_t);
        for c in 0..FIG4_COMBOS.len() {
            print!("  {:>8.5}", rows[c * per_curve + k].fidelity);
        }
        println!();
    }
    let drift = rows.iter().map(|r| r.trace_drift).fold(0.0, f64::max);
    println!("max trace drift {drift:.1e}");
    Ok(())
}
