//! Wigner function of a code word, drawn as a character map and optionally
//! written as CSV.
//!
//! ```text
//! cargo run --release --example wigner_map [-- out.csv]
//! ```

use std::f64::consts::FRAC_PI_2;

use condsqueeze::fockspace::HilbertSpace;
use condsqueeze::harness::write_text;
use condsqueeze::squeezing::{logical_state, LogicalLabel, SqueezeParam};
use condsqueeze::wigner::{cutoff_for_extent, symmetric_axis, wigner, PhaseSpaceGrid};

fn draw(grid: &PhaseSpaceGrid) {
    let peak = grid.max().abs().max(grid.min().abs());
    for i in (0..grid.im_axis().len()).rev() {
        let line: String = (0..grid.re_axis().len())
            .map(|j| {
                let w = grid.value(i, j) / peak;
                match w {
                    w if w > 0.5 => '#',
                    w if w > 0.1 => '+',
                    w if w < -0.1 => 'o',
                    w if w < -0.02 => '.',
                    _ => ' ',
                }
            })
            .collect();
        println!("{line}");
    }
}

fn main() -> condsqueeze::Result<()> {
    let xi = SqueezeParam::new(1.0, FRAC_PI_2)?;
    let psi = logical_state(LogicalLabel::ZeroL, xi, HilbertSpace::oscillator(60)?)?;
    let axis = symmetric_axis(3.5, 61);
    let grid = wigner(&psi.pad_to(cutoff_for_extent(60, 3.5 * 2f64.sqrt()))?, &axis, &axis)?;
    draw(&grid);
    println!("min W = {:.4}, max W = {:.4}, integral = {:.4}", grid.min(), grid.max(), grid.normalization());

    if let Some(path) = std::env::args().nth(1) {
        write_text(path.as_ref(), &condsqueeze::harness::wigner_csv(&grid))?;
        println!("wrote {path}");
    }
    Ok(())
}
