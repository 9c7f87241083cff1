//! How the prepared state degrades away from the drive condition and as
//! the coupling approaches the oscillator frequency.
//!
//! ```text
//! cargo run --release --example drive_sensitivity
//! ```

use condsqueeze::harness::{coupling_grid, default_config, sweep_amplitude, sweep_coupling, Experiment};

fn main() -> condsqueeze::Result<()> {
    let config = default_config(Experiment::Fig2a, false);
    let grid: Vec<f64> = (0..9).map(|k| 1.6 + 0.2 * k as f64).collect();
    println!("A_bar   fidelity   (g = {})", config.system.g);
    for (a, f) in sweep_amplitude(&config, &grid)? {
        println!("{a:.2}    {f:.6}");
    }

    let config = default_config(Experiment::Fig2b, false);
    println!("\ng        fidelity");
    for (g, f) in sweep_coupling(&config, &coupling_grid(false))? {
        println!("{g:<8} {f:.6}");
    }
    Ok(())
}
