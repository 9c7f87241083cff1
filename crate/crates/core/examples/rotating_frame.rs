//! The driven model in three frames, its exact Bessel expansion and the
//! secular (rotating-wave) part.
//!
//! ```text
//! cargo run --release --example rotating_frame
//! ```

use condsqueeze::dynamics::{evolve_state, SolverOptions};
use condsqueeze::fockspace::{fidelity, HilbertSpace, StateVector};
use condsqueeze::hamiltonians::{
    bessel_j, frame_transform, h_rotating, h_rotating_expanded, h_rwa, interaction_blocks, lab_blocks,
    rotating_blocks, Frame, SystemParams, J0_FIRST_ROOT,
};
use condsqueeze::linalg::c;

fn main() -> condsqueeze::Result<()> {
    let params = SystemParams::resonant(6.0, J0_FIRST_ROOT, 1e-2)?;
    let space = HilbertSpace::composite(20)?;
    println!("J0(A) = {:.3e}, J2(A) = {:.9}", bessel_j(0, params.a_bar())?, bessel_j(2, params.a_bar())?);

    for n_max in [2, 5, 10, 30] {
        let worst = (0..50)
            .map(|k| {
                let t = 0.731 * k as f64;
                let exact = h_rotating(&params, space, t).unwrap();
                exact.max_abs_diff(&h_rotating_expanded(&params, space, t, n_max).unwrap())
            })
            .fold(0.0, f64::max);
        println!("expansion to order {n_max:>2}: max deviation {worst:.2e}");
    }

    // Period average of the rotating-frame Hamiltonian against its secular part.
    let nodes = 4096;
    let mut avg = h_rotating(&params, space, 0.0)?.into_elements() * c(0.0);
    for k in 0..nodes {
        let t = std::f64::consts::TAU * (k as f64 + 0.5) / nodes as f64;
        avg += h_rotating(&params, space, t)?.elements();
    }
    avg /= c(nodes as f64);
    let secular = h_rwa(&params, space)?;
    let gap = (avg - secular.elements()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    println!("period average vs H_rwa: {gap:.2e} (g = {})", params.g);

    // One state, three frames.
    let osc0 = StateVector::fock(space.oscillator_part(), 0)?;
    let psi0 = StateVector::product([c(1.0), c(1.0)], &osc0)?;
    let t = 20.0;
    let opts = SolverOptions { rel_tol: 1e-11, abs_tol: 1e-13, ..SolverOptions::closed() };
    let lab = evolve_state(&lab_blocks(&params, space)?, &psi0, 0.0, t, &opts)?.into_final_state();
    let int = evolve_state(&interaction_blocks(&params, space)?, &psi0, 0.0, t, &opts)?.into_final_state();
    let rot = evolve_state(&rotating_blocks(&params, space)?, &psi0, 0.0, t, &opts)?.into_final_state();
    let lab_rot = frame_transform(&params, space, t, Frame::V)?.apply(&lab)?;
    let int_rot = frame_transform(&params, space, t, Frame::V2)?.apply(&int)?;
    println!("lab -> rotating:         1 - F = {:.2e}", 1.0 - fidelity(&lab_rot, &rot)?);
    println!("interaction -> rotating: 1 - F = {:.2e}", 1.0 - fidelity(&int_rot, &rot)?);
    Ok(())
}
