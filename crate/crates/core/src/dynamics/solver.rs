//! Explicit Runge-Kutta drivers on dense complex state matrices.

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};

use super::{SolverMethod, SolverOptions};

/// Right-hand side `dy/dt = f(t, y)`.
pub(crate) trait Rhs {
    fn eval(&mut self, t: f64, y: &CMatrix, out: &mut CMatrix);
}

/// Step counters up to a stored point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepCounts {
    pub accepted: usize,
    pub rejected: usize,
}

/// Where the driver hands control back to the caller.
pub(crate) struct Schedule<'a> {
    /// Strictly increasing times after `t0`; each is hit exactly.
    pub targets: &'a [f64],
    /// Also report every `k`-th accepted step; `0` disables.
    pub store_every: usize,
}

// Dormand-Prince 5(4) tableau.
const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Fifth- minus fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// `out += a * x`
fn axpy(out: &mut CMatrix, a: f64, x: &CMatrix) {
    for (o, v) in out.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *o += v * a;
    }
}

/// `out = y + h * sum_i w_i k_i`
fn combine(out: &mut CMatrix, y: &CMatrix, h: f64, weights: &[f64], ks: &[CMatrix]) {
    out.copy_from(y);
    for (w, k) in weights.iter().zip(ks) {
        if *w != 0.0 {
            axpy(out, h * w, k);
        }
    }
}

/// Integrates from `t0` through every target. `sink` receives each reported
/// point; `drift` measures the conserved-quantity error and aborts the run
/// beyond `100 * rel_tol`.
pub(crate) fn integrate<R: Rhs>(
    rhs: &mut R,
    y0: CMatrix,
    t0: f64,
    schedule: Schedule<'_>,
    opts: &SolverOptions,
    max_step: f64,
    drift: &dyn Fn(&CMatrix) -> f64,
    sink: &mut dyn FnMut(f64, &CMatrix, StepCounts) -> Result<()>,
) -> Result<()> {
    let drift_limit = 100.0 * opts.rel_tol;
    let mut y = y0;
    let mut t = t0;
    let mut counts = StepCounts::default();
    let shape = y.shape();
    let zeros = || CMatrix::zeros(shape.0, shape.1);
    let mut ks: Vec<CMatrix> = (0..7).map(|_| zeros()).collect();
    let mut stage = zeros();
    let mut y_new = zeros();
    let mut fsal_valid = false;
    let mut h = match opts.method {
        SolverMethod::FixedRk4 => opts.fixed_step,
        SolverMethod::AdaptiveEmbedded => {
            let span = schedule.targets.last().map_or(0.0, |&e| e - t0);
            (0.01 * span).min(max_step)
        }
    };
    let mut since_store = 0usize;

    for &target in schedule.targets {
        while t < target {
            let remaining = target - t;
            let mut step = h.min(max_step);
            // Land exactly on the target, avoiding a sliver step after it.
            let last = step >= remaining || remaining - step < 1e-10 * step;
            if last {
                step = remaining;
            }
            if step <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepSizeUnderflow { t, h: step });
            }
            match opts.method {
                SolverMethod::FixedRk4 => {
                    rk4_step(rhs, t, step, &y, &mut ks, &mut stage, &mut y_new);
                    std::mem::swap(&mut y, &mut y_new);
                    t = if last { target } else { t + step };
                    counts.accepted += 1;
                }
                SolverMethod::AdaptiveEmbedded => {
                    if !fsal_valid {
                        rhs.eval(t, &y, &mut ks[0]);
                        fsal_valid = true;
                    }
                    let err = dp5_step(rhs, t, step, &y, &mut ks, &mut stage, &mut y_new, opts);
                    let factor = if err == 0.0 {
                        MAX_FACTOR
                    } else {
                        (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
                    };
                    if err <= 1.0 {
                        std::mem::swap(&mut y, &mut y_new);
                        ks.swap(0, 6);
                        t = if last { target } else { t + step };
                        counts.accepted += 1;
                        // Keep the controller's proposal when this step was
                        // shortened to hit a target.
                        if !last || step == h {
                            h = step * factor;
                        }
                    } else {
                        counts.rejected += 1;
                        h = step * factor.min(1.0);
                        continue;
                    }
                }
            }
            let d = drift(&y);
            if !(d <= drift_limit) {
                return Err(Error::NormDrift {
                    t,
                    drift: d,
                    limit: drift_limit,
                });
            }
            since_store += 1;
            if t < target && schedule.store_every > 0 && since_store >= schedule.store_every {
                since_store = 0;
                sink(t, &y, counts)?;
            }
        }
        since_store = 0;
        sink(target, &y, counts)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn dp5_step<R: Rhs>(
    rhs: &mut R,
    t: f64,
    h: f64,
    y: &CMatrix,
    ks: &mut [CMatrix],
    stage: &mut CMatrix,
    y_new: &mut CMatrix,
    opts: &SolverOptions,
) -> f64 {
    let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
    for (i, a) in rows.iter().enumerate() {
        combine(stage, y, h, a, &ks[..a.len()]);
        rhs.eval(t + C[i] * h, stage, &mut ks[i + 1]);
    }
    combine(y_new, y, h, &B, &ks[..6]);
    rhs.eval(t + h, y_new, &mut ks[6]);
    // Error estimate h * sum_i E_i k_i, reusing `stage` as scratch.
    stage.fill(c(0.0));
    for (e, k) in E.iter().zip(ks.iter()) {
        if *e != 0.0 {
            axpy(stage, h * e, k);
        }
    }
    let scale = opts.abs_tol + opts.rel_tol * y.norm().max(y_new.norm());
    stage.norm() / scale
}

fn rk4_step<R: Rhs>(
    rhs: &mut R,
    t: f64,
    h: f64,
    y: &CMatrix,
    ks: &mut [CMatrix],
    stage: &mut CMatrix,
    y_new: &mut CMatrix,
) {
    rhs.eval(t, y, &mut ks[0]);
    combine(stage, y, 0.5 * h, &[1.0], &ks[..1]);
    rhs.eval(t + 0.5 * h, stage, &mut ks[1]);
    combine(stage, y, 0.5 * h, &[0.0, 1.0], &ks[..2]);
    rhs.eval(t + 0.5 * h, stage, &mut ks[2]);
    combine(stage, y, h, &[0.0, 0.0, 1.0], &ks[..3]);
    rhs.eval(t + h, stage, &mut ks[3]);
    combine(y_new, y, h / 6.0, &[1.0, 2.0, 2.0, 1.0], &ks[..4]);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    /// `dy/dt = lambda y`
    struct Linear(C64);

    impl Rhs for Linear {
        fn eval(&mut self, _t: f64, y: &CMatrix, out: &mut CMatrix) {
            out.copy_from(&(y * self.0));
        }
    }

    fn run(method: SolverMethod, lambda: C64, t1: f64) -> C64 {
        let opts = SolverOptions {
            method,
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            fixed_step: 1e-3,
            ..SolverOptions::closed()
        };
        let mut out = c(0.0);
        integrate(
            &mut Linear(lambda),
            CMatrix::from_element(1, 1, c(1.0)),
            0.0,
            Schedule { targets: &[t1], store_every: 0 },
            &opts,
            f64::INFINITY,
            &|_| 0.0,
            &mut |_, y, _| {
                out = y[(0, 0)];
                Ok(())
            },
        )
        .unwrap();
        out
    }

    #[test]
    fn tableau_consistency() {
        let rows: [&[f64]; 5] = [&A2, &A3, &A4, &A5, &A6];
        for (i, row) in rows.iter().enumerate() {
            assert!((row.iter().sum::<f64>() - C[i]).abs() < 1e-14);
        }
        assert!((B.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(E.iter().sum::<f64>().abs() < 1e-15);
    }

    #[test]
    fn exponential_growth_and_rotation() {
        for method in [SolverMethod::AdaptiveEmbedded, SolverMethod::FixedRk4] {
            let decay = run(method, c(-1.0), 2.0);
            assert!((decay.re - (-2.0f64).exp()).abs() < 1e-9, "{method:?}");
            let rot = run(method, C64::new(0.0, -3.0), 1.7);
            assert!((rot - C64::from_polar(1.0, -5.1)).norm() < 1e-9, "{method:?}");
        }
    }
}
