//! Wigner function `W(alpha) = (2/pi) Tr[rho D(alpha) P D(alpha)^dagger]`
//! with `P = (-1)^{b^dagger b}`; normalized so that `∫ W d^2 alpha = 1`.
//!
//! The displacement factorizes as `D(alpha) = R exp(i |alpha| X) R^dagger`
//! with `X = b + b^dagger` and `R = exp(i (arg alpha - pi/2) n)`, so one
//! eigendecomposition of `X` serves the whole grid. [`wigner_direct`]
//! exponentiates the generator at a single point and serves as reference.

use std::f64::consts::{FRAC_2_PI, FRAC_PI_2};

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fockspace::{annihilation, creation, StateRef, StateVector};
use crate::linalg::{c, expm, hermitian_eigen, CMatrix, CVector, C64};

/// Convention label written next to serialized grids.
pub const CONVENTION: &str = "2/pi displaced parity";

/// Eigenvalues of a mixed state below this magnitude are dropped.
const EIGENVALUE_FLOOR: f64 = 1e-15;

/// Wigner values on a rectangular grid; `values[(i, j)]` sits at
/// `alpha = re_axis[j] + i im_axis[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid {
    re_axis: Vec<f64>,
    im_axis: Vec<f64>,
    values: DMatrix<f64>,
    warnings: Vec<String>,
}

impl PhaseSpaceGrid {
    pub fn re_axis(&self) -> &[f64] {
        &self.re_axis
    }

    pub fn im_axis(&self) -> &[f64] {
        &self.im_axis
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    /// `W` at `re_axis[j] + i im_axis[i]`.
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[(i, j)]
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn min(&self) -> f64 {
        self.values.min()
    }

    pub fn max(&self) -> f64 {
        self.values.max()
    }

    /// Riemann sum of `W` over the grid with midpoint cell widths.
    pub fn normalization(&self) -> f64 {
        let wx = cell_widths(&self.re_axis);
        let wy = cell_widths(&self.im_axis);
        let mut sum = 0.0;
        for (i, dy) in wy.iter().enumerate() {
            for (j, dx) in wx.iter().enumerate() {
                sum += self.values[(i, j)] * dx * dy;
            }
        }
        sum
    }
}

fn cell_widths(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    if n < 2 {
        return vec![0.0; n];
    }
    (0..n)
        .map(|k| {
            let lo = if k == 0 { axis[0] } else { 0.5 * (axis[k - 1] + axis[k]) };
            let hi = if k == n - 1 { axis[n - 1] } else { 0.5 * (axis[k] + axis[k + 1]) };
            hi - lo
        })
        .collect()
}

/// `points` samples on `[-half_width, half_width]`, exactly mirror
/// symmetric: `axis[k] == -axis[points - 1 - k]`.
pub fn symmetric_axis(half_width: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![0.0];
    }
    let m = (points - 1) as f64;
    (0..points)
        .map(|k| half_width * (2.0 * k as f64 - m) / m)
        .collect()
}

fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() || !axis.iter().all(|x| x.is_finite()) || axis.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::OutOfRange(format!(
            "{name} must be non-empty, finite and strictly increasing"
        )));
    }
    Ok(())
}

/// Pure components `(weight, amplitudes)` of the state.
fn components(state: StateRef<'_>) -> Vec<(f64, CVector)> {
    match state {
        StateRef::Pure(psi) => vec![(1.0, psi.amplitudes().clone())],
        StateRef::Mixed(rho) => {
            let (values, vectors) = hermitian_eigen(rho.elements());
            values
                .iter()
                .enumerate()
                .filter(|(_, p)| p.abs() > EIGENVALUE_FLOOR)
                .map(|(k, &p)| (p, vectors.column(k).into_owned()))
                .collect()
        }
    }
}

/// Wigner function of an oscillator state on the grid `re_axis × im_axis`.
pub fn wigner<'a>(state: impl Into<StateRef<'a>>, re_axis: &[f64], im_axis: &[f64]) -> Result<PhaseSpaceGrid> {
    let state = state.into();
    let space = state.space();
    space.require_oscillator_only()?;
    check_axis(re_axis, "re_axis")?;
    check_axis(im_axis, "im_axis")?;

    let mut warnings = Vec::new();
    let max_re = re_axis.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let max_im = im_axis.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let extent = max_re * max_re + max_im * max_im;
    if extent > space.fock_cutoff() as f64 / 4.0 {
        warnings.push(format!(
            "max |alpha|^2 = {extent:.3} exceeds cutoff/4 = {:.3}; displaced states may be truncated",
            space.fock_cutoff() as f64 / 4.0
        ));
    }

    let parts = components(state);
    let b = annihilation(space).into_elements();
    let x = &b + b.adjoint();
    let (lambda, v) = hermitian_eigen(&x);
    let vh = v.adjoint();
    let d = space.oscillator_dim();

    let rows: Vec<Vec<f64>> = im_axis
        .par_iter()
        .map(|&y| {
            let mut u = CVector::zeros(d);
            let mut w = CVector::zeros(d);
            let mut shifted = CVector::zeros(d);
            re_axis
                .iter()
                .map(|&xr| {
                    let alpha = C64::new(xr, y);
                    let radius = alpha.norm();
                    let theta = if radius == 0.0 { 0.0 } else { alpha.arg() } - FRAC_PI_2;
                    let mut total = 0.0;
                    for (p, psi) in &parts {
                        // exp(-i |alpha| X) R^dagger psi
                        for n in 0..d {
                            shifted[n] = psi[n] * C64::from_polar(1.0, -theta * n as f64);
                        }
                        vh.mul_to(&shifted, &mut u);
                        for (k, uk) in u.iter_mut().enumerate() {
                            *uk *= C64::from_polar(1.0, -radius * lambda[k]);
                        }
                        v.mul_to(&u, &mut w);
                        let parity: f64 = w
                            .iter()
                            .enumerate()
                            .map(|(n, z)| if n % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
                            .sum();
                        total += p * parity;
                    }
                    FRAC_2_PI * total
                })
                .collect()
        })
        .collect();

    let values = DMatrix::from_fn(im_axis.len(), re_axis.len(), |i, j| rows[i][j]);
    if !values.iter().all(|w| w.is_finite()) {
        return Err(Error::OutOfRange("non-finite Wigner value".to_string()));
    }
    let grid = PhaseSpaceGrid {
        re_axis: re_axis.to_vec(),
        im_axis: im_axis.to_vec(),
        values,
        warnings,
    };
    Ok(grid)
}

/// `(2/pi) Tr[rho D P D^dagger]` at one point with `D` from a direct matrix
/// exponential. The imaginary part measures round-off.
pub fn wigner_direct<'a>(state: impl Into<StateRef<'a>>, alpha: C64) -> Result<C64> {
    let state = state.into();
    let space = state.space();
    space.require_oscillator_only()?;
    let b = annihilation(space).into_elements();
    let bd = creation(space).into_elements();
    let dmat = expm(&(bd * alpha - b * alpha.conj()));
    let d = space.oscillator_dim();
    let parity = CMatrix::from_diagonal(&CVector::from_fn(d, |n, _| c(if n % 2 == 0 { 1.0 } else { -1.0 })));
    let kernel = &dmat * parity * dmat.adjoint();
    let value = match state {
        StateRef::Pure(psi) => psi.amplitudes().dotc(&(&kernel * psi.amplitudes())),
        StateRef::Mixed(rho) => (rho.elements() * kernel).trace(),
    };
    Ok(value * FRAC_2_PI)
}

/// Copy of `psi` in a larger Fock space, for grids reaching beyond the
/// state's own cutoff.
pub fn padded(psi: &StateVector, fock_cutoff: usize) -> Result<StateVector> {
    if fock_cutoff <= psi.space().fock_cutoff() {
        return Ok(psi.clone());
    }
    psi.pad_to(fock_cutoff)
}

/// Cutoff large enough for displacements up to `max |alpha|` of a state
/// living below `state_cutoff`.
pub fn cutoff_for_extent(state_cutoff: usize, max_abs_alpha: f64) -> usize {
    let reach = (2.0 * max_abs_alpha * max_abs_alpha).ceil() as usize + 20;
    (state_cutoff + reach).max(2 * state_cutoff)
}
