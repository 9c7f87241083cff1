//! Matrix exponential by scaling and squaring with a degree-13 Padé kernel.

use super::{c, CMatrix};

const THETA_13: f64 = 5.371_920_351_148_152;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

fn one_norm(a: &CMatrix) -> f64 {
    a.column_iter()
        .map(|col| col.iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Computes `exp(a)` for a square complex matrix.
pub fn expm(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "expm requires a square matrix");
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }

    let norm = one_norm(a);
    let squarings = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let a = a * c(0.5f64.powi(squarings));

    let b = PADE_13;
    let ident = CMatrix::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * c(b[13]) + &a4 * c(b[11]) + &a2 * c(b[9]);
    let u_inner = &a6 * u_inner + &a6 * c(b[7]) + &a4 * c(b[5]) + &a2 * c(b[3]) + &ident * c(b[1]);
    let u = &a * u_inner;

    let v_inner = &a6 * c(b[12]) + &a4 * c(b[10]) + &a2 * c(b[8]);
    let v = &a6 * v_inner + &a6 * c(b[6]) + &a4 * c(b[4]) + &a2 * c(b[2]) + &ident * c(b[0]);

    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Padé denominator is nonsingular for scaled arguments");

    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
