//! The conditional-squeezing Hamiltonian squeezes the oscillator one way
//! when the qubit is excited and the other way when it is in the ground state.
//!
//! ```text
//! cargo run --release --example conditional_squeezing
//! ```

use condsqueeze::dynamics::{evolve_state, SolverOptions};
use condsqueeze::fockspace::{expectation, fidelity, number, HilbertSpace, Qubit, StateVector};
use condsqueeze::hamiltonians::{h_cs, BlockHamiltonian, SystemParams};
use condsqueeze::squeezing::{squeezed_vacuum, SqueezeParam};

fn main() -> condsqueeze::Result<()> {
    let params = SystemParams::default();
    let space = HilbertSpace::composite(120)?;
    let osc = space.oscillator_part();
    let h = BlockHamiltonian::constant(h_cs(&params, space)?);
    let g_cs = params.g_cs()?;
    let t = 0.5 / g_cs;
    println!("g_cs = {g_cs:.6e}, evolving to t = {t:.1}");

    for qubit in [Qubit::Excited, Qubit::Ground] {
        let psi0 = StateVector::basis(space, qubit, 0)?;
        let traj = evolve_state(&h, &psi0, 0.0, t, &SolverOptions::closed())?;
        let psi = traj.final_state();
        let offset = space.index(qubit, 0);
        let osc_state = StateVector::new(osc, psi.amplitudes().rows(offset, osc.oscillator_dim()).into_owned())?;

        let xi = SqueezeParam::from_conditional_squeezing(g_cs, t)?;
        let xi = if qubit == Qubit::Excited { xi } else { xi.negated() };
        let f = fidelity(&osc_state, &squeezed_vacuum(xi, osc)?)?;
        let n = expectation(&number(osc), &osc_state)?.re;
        println!(
            "{qubit:?}: xi = {:+.3}i  fidelity = 1 - {:.1e}  <n> = {n:.6} (sinh^2 r = {:.6})  steps = {}",
            xi.xi().im,
            1.0 - f,
            xi.r().sinh().powi(2),
            traj.diagnostics.last().map_or(0, |d| d.steps.accepted)
        );
    }
    Ok(())
}
