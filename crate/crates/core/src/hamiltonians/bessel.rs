//! Bessel functions of the first kind for integer order.

use crate::error::{Error, Result};

/// Largest supported `|n|`.
pub const MAX_ORDER: usize = 200;
/// Largest supported `|x|`.
pub const MAX_ARGUMENT: f64 = 50.0;
/// First positive zero of `J_0`.
pub const J0_FIRST_ROOT: f64 = 2.404_825_557_695_773;

/// Below this `|x|` the power series is used directly.
const SERIES_LIMIT: f64 = 1.0;
const RESCALE_ABOVE: f64 = 1e250;

/// `J_n(x)` for `|n| <= 200`, `|x| <= 50`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    let order = n.unsigned_abs() as usize;
    let value = bessel_j_all(order, x)?[order];
    Ok(if n < 0 && order % 2 == 1 { -value } else { value })
}

/// `[J_0(x), ..., J_{n_max}(x)]`.
pub fn bessel_j_all(n_max: usize, x: f64) -> Result<Vec<f64>> {
    if n_max > MAX_ORDER || !(x.abs() <= MAX_ARGUMENT) {
        return Err(Error::OutOfRange(format!(
            "bessel_j supports n <= {MAX_ORDER}, |x| <= {MAX_ARGUMENT}; got n = {n_max}, x = {x}"
        )));
    }
    let ax = x.abs();
    let mut values = if ax == 0.0 {
        let mut v = vec![0.0; n_max + 1];
        v[0] = 1.0;
        v
    } else if ax < SERIES_LIMIT {
        (0..=n_max).map(|n| power_series(n, ax)).collect()
    } else {
        miller(n_max, ax)
    };
    if x < 0.0 {
        for (n, v) in values.iter_mut().enumerate() {
            if n % 2 == 1 {
                *v = -*v;
            }
        }
    }
    Ok(values)
}

/// `sum_k (-1)^k (x/2)^(2k+n) / (k! (n+k)!)`
pub(crate) fn power_series(n: usize, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..500 {
        term *= q / (k as f64 * (n + k) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Backward recurrence from well above `max(n_max, x)`, normalized with
/// `J_0 + 2 sum_k J_{2k} = 1`.
fn miller(n_max: usize, x: f64) -> Vec<f64> {
    let top = (n_max as f64).max(x);
    let mut start = (top + 30.0 + (20.0 * top).sqrt()) as usize;
    start += start % 2;
    let mut values = vec![0.0; n_max + 1];
    let mut above = 0.0;
    let mut current = 1e-30;
    let mut norm = 0.0;
    for k in (0..=start).rev() {
        if k <= n_max {
            values[k] = current;
        }
        if k % 2 == 0 {
            norm += if k == 0 { current } else { 2.0 * current };
        }
        if k == 0 {
            break;
        }
        let below = 2.0 * k as f64 / x * current - above;
        above = current;
        current = below;
        if current.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            current *= s;
            above *= s;
            norm *= s;
            values.iter_mut().for_each(|v| *v *= s);
        }
    }
    values.iter_mut().for_each(|v| *v /= norm);
    values
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from a 30-digit arbitrary-precision evaluation.
    const TABLE: &[(i64, f64, f64)] = &[
        (2, 2.405, 0.431_782_727_623_023_32),
        (1, 1.0, 0.440_050_585_744_933_52),
        (5, 10.0, -0.234_061_528_186_793_64),
        (0, 50.0, 0.055_812_327_669_251_815),
        (30, 50.0, 0.048_434_257_245_509_417),
        (49, 50.0, 0.151_195_142_521_472_24),
        (120, 50.0, 4.303_026_521_767_698e-34),
        (200, 50.0, 2.138_369_004_239_117e-97),
        (2, 0.5, 0.030_604_023_458_682_641),
        (3, -7.0, 0.167_555_587_995_336_03),
        (1, 3.0, 0.339_058_958_525_936_46),
        (17, 2.405, 5.962_320_297_953_945e-14),
    ];

    #[test]
    fn reference_values() {
        for &(n, x, want) in TABLE {
            let got = bessel_j(n, x).unwrap();
            assert!((got - want).abs() < 1e-13, "J_{n}({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        for n in 1..10 {
            assert_eq!(bessel_j(n, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn first_root() {
        assert!(bessel_j(0, J0_FIRST_ROOT).unwrap().abs() < 1e-15);
        assert!(bessel_j(0, 2.404826).unwrap().abs() < 1e-6);
    }

    #[test]
    fn negative_order() {
        for n in 0..8i64 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(bessel_j(-n, 3.7).unwrap(), sign * bessel_j(n, 3.7).unwrap());
        }
    }

    #[test]
    fn out_of_range() {
        assert!(bessel_j(201, 1.0).is_err());
        assert!(bessel_j(2, 50.5).is_err());
        assert!(bessel_j(2, f64::NAN).is_err());
    }

    #[test]
    fn recurrence_holds() {
        for i in 1..=100 {
            let x = i as f64 * 0.5;
            let j = bessel_j_all(60, x).unwrap();
            for n in 1..60 {
                let lhs = j[n - 1] + j[n + 1];
                let rhs = 2.0 * n as f64 / x * j[n];
                assert!((lhs - rhs).abs() < 1e-10, "n = {n}, x = {x}");
            }
        }
    }

    #[test]
    fn recurrence_matches_series_across_switch() {
        for &x in &[0.999, 1.0, 1.5, 3.0, 6.0] {
            for n in 0..20 {
                let a = bessel_j_all(20, x).unwrap()[n];
                assert!((a - power_series(n, x)).abs() < 1e-13, "n = {n}, x = {x}");
            }
        }
    }
}
