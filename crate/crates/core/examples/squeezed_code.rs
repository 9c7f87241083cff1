//! Code words built from squeezed vacua: Fock support, error-set
//! orthogonality and how close their number moments get.
//!
//! ```text
//! cargo run --release --example squeezed_code
//! ```

use std::f64::consts::FRAC_PI_2;

use condsqueeze::fockspace::HilbertSpace;
use condsqueeze::squeezing::{kl_check, logical_state, moment_ratio, LogicalLabel, SqueezeParam};

fn main() -> condsqueeze::Result<()> {
    let space = HilbertSpace::oscillator(200)?;
    let xi = SqueezeParam::new(1.0, FRAC_PI_2)?;
    for label in [LogicalLabel::ZeroL, LogicalLabel::OneL] {
        let psi = logical_state(label, xi, space)?;
        let support: Vec<usize> = (0..20).filter(|&n| psi.amplitudes()[n].norm() > 1e-12).collect();
        println!("{label:?} populated levels below 20: {support:?}");
    }

    let kl = kl_check(xi, space)?;
    println!("max |<0_L|Ei^+ Ej|1_L>| = {:.1e}", kl.off_diagonal_max);
    for (p, gap) in &kl.moment_mismatches {
        println!("  <n^{p}> mismatch {gap:.4}");
    }

    println!("\n   r    p=1      p=2      p=3      p=4");
    for r in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0] {
        let ratios: Vec<String> = (1..=4)
            .map(|p| moment_ratio(r, p).map(|m| format!("{:.6}", m.ratio)))
            .collect::<Result<_, _>>()?;
        println!("{r:>4}  {}", ratios.join("  "));
    }
    Ok(())
}
