//! Analytic squeezed-vacuum states and the two-component squeezed code.
//!
//! The squeezed vacuum `S(xi)|0>` with `xi = r e^{i phi}` has Fock amplitudes
//!
//! ```text
//! <2n|S(xi)|0> = (-1)^n sqrt((2n)!) / (2^n n!) e^{i n phi} tanh^n(r) / sqrt(cosh r)
//! ```
//!
//! and the code words `|0_L>`, `|1_L>` are the normalized sum and difference
//! of `S(xi)|0>` and `S(-xi)|0>`, supported on `|4n>` and `|4n+2>`.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::fockspace::{
    annihilation, expectation, identity, number, HilbertSpace, OperatorMatrix, StateVector,
    DEFAULT_LEAK_THRESHOLD,
};
use crate::linalg::{CVector, C64};

/// Hard cap on the number of series terms.
pub const MAX_SERIES_TERMS: usize = 1_000_000;

/// Relative stopping tolerance used by [`moment_ratio`].
pub const MOMENT_TOLERANCE: f64 = 1e-15;

/// Complex squeezing parameter `xi = r e^{i phi}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParam {
    r: f64,
    phi: f64,
}

impl SqueezeParam {
    /// `r >= 0`; `phi` is reduced to `[0, 2 pi)`.
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r >= 0.0) || !r.is_finite() || !phi.is_finite() {
            return Err(Error::OutOfRange(format!(
                "squeezing parameter needs finite r >= 0, got r = {r}, phi = {phi}"
            )));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(SqueezeParam { r, phi })
    }

    pub fn from_complex(xi: C64) -> Result<Self> {
        Self::new(xi.norm(), if xi.norm() == 0.0 { 0.0 } else { xi.arg() })
    }

    /// `xi = 2 i g_cs t`, the parameter generated by the conditional
    /// squeezing Hamiltonian acting for time `t` on the excited qubit.
    pub fn from_conditional_squeezing(g_cs: f64, t: f64) -> Result<Self> {
        let r = 2.0 * g_cs * t;
        if r >= 0.0 {
            Self::new(r, PI / 2.0)
        } else {
            Self::new(-r, 3.0 * PI / 2.0)
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn xi(&self) -> C64 {
        C64::from_polar(self.r, self.phi)
    }

    /// `-xi`
    pub fn negated(&self) -> Self {
        SqueezeParam::new(self.r, self.phi + PI).expect("finite parameter")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicalLabel {
    ZeroL,
    OneL,
}

/// Series summary for `<(b^dagger b)^p>` in a code word.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    pub terms_used: usize,
    /// Magnitude of the last included term (including the prefactor).
    pub last_term: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub r: f64,
    pub p: u32,
    pub moment_zero: f64,
    pub moment_one: f64,
    pub ratio: f64,
    pub terms_used: usize,
    pub truncation_estimate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KlReport {
    /// `max |<0_L|E_i^dagger E_j|1_L>|` over the error set.
    pub off_diagonal_max: f64,
    /// `(p, |ratio_p - 1|)` for `p = 1..=4`.
    pub moment_mismatches: Vec<(u32, f64)>,
}

/// Iterates `(k, w_k tanh^{2k} r)` where `w_k = (2k)! / (4^k (k!)^2)`; the
/// `k`-th value is the unnormalized population of `|2k>` in `S(xi)|0>`.
struct PopulationTerms {
    k: usize,
    weight: f64,
    power: f64,
    t2: f64,
}

impl PopulationTerms {
    fn new(r: f64) -> Self {
        let t = r.tanh();
        PopulationTerms {
            k: 0,
            weight: 1.0,
            power: 1.0,
            t2: t * t,
        }
    }
}

impl Iterator for PopulationTerms {
    type Item = (usize, f64);
    fn next(&mut self) -> Option<(usize, f64)> {
        let item = (self.k, self.weight * self.power);
        self.k += 1;
        let k = self.k as f64;
        self.weight *= (2.0 * k - 1.0) / (2.0 * k);
        self.power *= self.t2;
        Some(item)
    }
}

/// Sums populations of `|2k>` for `2k > cutoff` and `k` passing `keep`.
fn population_tail(r: f64, cutoff: usize, keep: impl Fn(usize) -> bool) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let mut sum = 0.0;
    for (k, w) in PopulationTerms::new(r).skip(cutoff / 2 + 1).take(MAX_SERIES_TERMS) {
        if !keep(k) {
            continue;
        }
        sum += w;
        if w == 0.0 || w < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Norm deficiency `1 - ||psi||^2` of the squeezed vacuum truncated at
/// `cutoff`, summed directly over the discarded tail.
pub fn squeezed_vacuum_deficiency(r: f64, cutoff: usize) -> f64 {
    population_tail(r, cutoff, |_| true) / r.cosh()
}

/// Squeezed vacuum from its Fock series, using the default leak threshold.
pub fn squeezed_vacuum(xi: SqueezeParam, space: HilbertSpace) -> Result<StateVector> {
    squeezed_vacuum_with_threshold(xi, space, DEFAULT_LEAK_THRESHOLD)
}

/// Squeezed vacuum from its Fock series. Fails when the truncated norm
/// deficiency reaches `threshold`; otherwise renormalizes.
pub fn squeezed_vacuum_with_threshold(
    xi: SqueezeParam,
    space: HilbertSpace,
    threshold: f64,
) -> Result<StateVector> {
    space.require_oscillator_only()?;
    let deficiency = squeezed_vacuum_deficiency(xi.r, space.fock_cutoff());
    if deficiency >= threshold {
        return Err(Error::Truncation {
            deficiency,
            threshold,
        });
    }
    let amps = series_amplitudes(xi, space, |_| C64::new(1.0, 0.0), 1.0 / xi.r.cosh().sqrt());
    StateVector::normalized(space, amps)
}

/// Amplitudes `factor(k) * prefactor * (-1)^k sqrt(w_k) e^{ik phi} tanh^k r`
/// placed on `|2k>`.
fn series_amplitudes(
    xi: SqueezeParam,
    space: HilbertSpace,
    factor: impl Fn(usize) -> C64,
    prefactor: f64,
) -> CVector {
    let mut amps = CVector::zeros(space.total_dim());
    let t = xi.r.tanh();
    let mut root_weight = 1.0f64;
    let mut power = 1.0f64;
    for k in 0..=space.fock_cutoff() / 2 {
        if k > 0 {
            let kf = k as f64;
            root_weight *= ((2.0 * kf - 1.0) / (2.0 * kf)).sqrt();
            power *= t;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phase = C64::from_polar(1.0, k as f64 * xi.phi);
        amps[2 * k] = factor(k) * phase * (sign * prefactor * root_weight * power);
    }
    amps
}

/// `N_± = 2 [1 ± cosh^{-1/2}(2r)]`, with `N_-` evaluated without
/// cancellation at small `r`.
pub fn normalization_constants(r: f64) -> (f64, f64) {
    let c2 = (2.0 * r).cosh();
    if !c2.is_finite() {
        return (2.0, 2.0);
    }
    let inv_sqrt = 1.0 / c2.sqrt();
    let plus = 2.0 * (1.0 + inv_sqrt);
    let sinh = r.sinh();
    let minus = 4.0 * sinh * sinh / (c2 * (1.0 + inv_sqrt));
    (plus, minus)
}

fn check_label(label: LogicalLabel, r: f64) -> Result<()> {
    if label == LogicalLabel::OneL && r == 0.0 {
        return Err(Error::DegenerateState(
            "|1_L> is undefined at r = 0 (N_- = 0)".to_string(),
        ));
    }
    Ok(())
}

/// Norm deficiency of a truncated code word.
pub fn logical_deficiency(label: LogicalLabel, r: f64, cutoff: usize) -> f64 {
    let (np, nm) = normalization_constants(r);
    match label {
        LogicalLabel::ZeroL => 4.0 / (np * r.cosh()) * population_tail(r, cutoff, |k| k % 2 == 0),
        LogicalLabel::OneL => 4.0 / (nm * r.cosh()) * population_tail(r, cutoff, |k| k % 2 == 1),
    }
}

/// Code word `|0_L>` or `|1_L>` from its Fock series. Amplitudes off the
/// `{4n}` (resp. `{4n+2}`) support are exactly zero.
pub fn logical_state(label: LogicalLabel, xi: SqueezeParam, space: HilbertSpace) -> Result<StateVector> {
    space.require_oscillator_only()?;
    check_label(label, xi.r)?;
    let deficiency = logical_deficiency(label, xi.r, space.fock_cutoff());
    if deficiency >= DEFAULT_LEAK_THRESHOLD {
        return Err(Error::Truncation {
            deficiency,
            threshold: DEFAULT_LEAK_THRESHOLD,
        });
    }
    let (np, nm) = normalization_constants(xi.r);
    let (norm, parity) = match label {
        LogicalLabel::ZeroL => (np, 0),
        LogicalLabel::OneL => (nm, 1),
    };
    let prefactor = 2.0 / (norm * xi.r.cosh()).sqrt();
    let amps = series_amplitudes(
        xi,
        space,
        |k| {
            if k % 2 == parity {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        },
        prefactor,
    );
    StateVector::normalized(space, amps)
}

/// `<(b^dagger b)^p>` in a code word, summed from its series until the next
/// term drops below `tolerance` times the partial sum.
pub fn number_moment_series(label: LogicalLabel, r: f64, p: u32, tolerance: f64) -> Result<SeriesSum> {
    if !(1..=4).contains(&p) {
        return Err(Error::OutOfRange(format!("moment order p = {p} not in 1..=4")));
    }
    if !(tolerance > 0.0) {
        return Err(Error::OutOfRange(format!("tolerance must be positive, got {tolerance}")));
    }
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::OutOfRange(format!("r must be finite and >= 0, got {r}")));
    }
    check_label(label, r)?;
    if r == 0.0 {
        // |0_L> = |0>
        return Ok(SeriesSum {
            value: 0.0,
            terms_used: 1,
            last_term: 0.0,
        });
    }
    let (np, nm) = normalization_constants(r);
    let (norm, parity) = match label {
        LogicalLabel::ZeroL => (np, 0),
        LogicalLabel::OneL => (nm, 1),
    };
    let prefactor = 4.0 / (norm * r.cosh());
    let mut sum = 0.0;
    let mut prev = 0.0;
    let mut used = 0;
    for (k, w) in PopulationTerms::new(r)
        .filter(|(k, _)| k % 2 == parity)
        .take(MAX_SERIES_TERMS)
    {
        let term = prefactor * w * ((2 * k) as f64).powi(p as i32);
        if sum > 0.0 && term < tolerance * sum && term <= prev {
            return Ok(SeriesSum {
                value: sum,
                terms_used: used,
                last_term: prev,
            });
        }
        sum += term;
        prev = term;
        used += 1;
    }
    Err(Error::NonConvergence(MAX_SERIES_TERMS))
}

/// `<(b^dagger b)^p>` in a code word.
pub fn number_moment(label: LogicalLabel, r: f64, p: u32, tolerance: f64) -> Result<f64> {
    number_moment_series(label, r, p, tolerance).map(|s| s.value)
}

/// Ratio `<0_L|(b^dagger b)^p|0_L> / <1_L|(b^dagger b)^p|1_L>`.
pub fn moment_ratio(r: f64, p: u32) -> Result<MomentReport> {
    if !(r > 0.0) {
        return Err(Error::OutOfRange(format!("moment ratio needs r > 0, got {r}")));
    }
    let zero = number_moment_series(LogicalLabel::ZeroL, r, p, MOMENT_TOLERANCE)?;
    let one = number_moment_series(LogicalLabel::OneL, r, p, MOMENT_TOLERANCE)?;
    Ok(MomentReport {
        r,
        p,
        moment_zero: zero.value,
        moment_one: one.value,
        ratio: zero.value / one.value,
        terms_used: zero.terms_used.max(one.terms_used),
        truncation_estimate: zero.last_term.max(one.last_term),
    })
}

/// The error set `{I, b, b^dagger b, (b^dagger b)^2}`.
pub fn error_set(space: HilbertSpace) -> Vec<OperatorMatrix> {
    let n = number(space);
    vec![identity(space), annihilation(space), n.clone(), &n * &n]
}

/// Knill-Laflamme diagnostics for the squeezed code at `xi`.
pub fn kl_check(xi: SqueezeParam, space: HilbertSpace) -> Result<KlReport> {
    let zero = logical_state(LogicalLabel::ZeroL, xi, space)?;
    let one = logical_state(LogicalLabel::OneL, xi, space)?;
    let errors = error_set(space);
    let mut off_diagonal_max = 0.0f64;
    for ei in &errors {
        let left = ei.apply(&zero)?;
        for ej in &errors {
            let right = ej.apply(&one)?;
            off_diagonal_max = off_diagonal_max.max(left.inner(&right)?.norm());
        }
    }
    let moment_mismatches = (1..=4)
        .map(|p| moment_ratio(xi.r, p).map(|m| (p, (m.ratio - 1.0).abs())))
        .collect::<Result<Vec<_>>>()?;
    Ok(KlReport {
        off_diagonal_max,
        moment_mismatches,
    })
}

/// `<(b^dagger b)^p>` evaluated with truncated-space operators.
pub fn truncated_number_moment(state: &StateVector, p: u32) -> Result<f64> {
    let n = number(state.space());
    let mut op = identity(state.space());
    for _ in 0..p {
        op = &op * &n;
    }
    Ok(expectation(&op, state)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fockspace::fidelity;

    fn osc(n: usize) -> HilbertSpace {
        HilbertSpace::oscillator(n).unwrap()
    }

    #[test]
    fn phase_is_canonicalized() {
        let x = SqueezeParam::new(1.0, -PI / 2.0).unwrap();
        assert!((x.phi() - 1.5 * PI).abs() < 1e-15);
        assert!((x.negated().phi() - 0.5 * PI).abs() < 1e-15);
        assert!(SqueezeParam::new(-0.1, 0.0).is_err());
        let xi = SqueezeParam::from_conditional_squeezing(0.25, 2.0).unwrap();
        assert!((xi.xi() - C64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn vacuum_at_zero_squeezing() {
        let s = osc(10);
        let psi = squeezed_vacuum(SqueezeParam::new(0.0, 0.3).unwrap(), s).unwrap();
        assert_eq!(psi, StateVector::fock(s, 0).unwrap());
        let z = logical_state(LogicalLabel::ZeroL, SqueezeParam::new(0.0, 0.0).unwrap(), s).unwrap();
        assert_eq!(z, StateVector::fock(s, 0).unwrap());
    }

    #[test]
    fn odd_amplitudes_vanish() {
        let psi = squeezed_vacuum(SqueezeParam::new(0.9, 1.1).unwrap(), osc(80)).unwrap();
        for n in (1..=80).step_by(2) {
            assert_eq!(psi.amplitudes()[n], C64::new(0.0, 0.0));
        }
    }

    #[test]
    fn truncation_error_reports_deficiency() {
        match squeezed_vacuum(SqueezeParam::new(1.5, 0.0).unwrap(), osc(10)) {
            Err(Error::Truncation { deficiency, .. }) => assert!(deficiency > 1e-3),
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn normalization_constant_values() {
        assert_eq!(normalization_constants(0.0), (4.0, 0.0));
        // Frozen from a 30-digit evaluation of 2[1 ± cosh(2)^(-1/2)].
        let (p, m) = normalization_constants(1.0);
        assert!((p - 3.031_120_223_512_427_7).abs() < 1e-14);
        assert!((m - 0.968_879_776_487_572_3).abs() < 1e-14);
        assert!((p + m - 4.0).abs() < 1e-14);
        // cosh(10)^(-1/2) ~ 9.5e-3, so both sit about 0.019 from 2.
        let (p, m) = normalization_constants(5.0);
        assert!((p - 2.019_057_792_037_675).abs() < 1e-13);
        assert!((m - 1.980_942_207_962_325).abs() < 1e-13);
        let (p, m) = normalization_constants(15.0);
        assert!((p - 2.0).abs() < 1e-5 && (m - 2.0).abs() < 1e-5);
    }

    #[test]
    fn small_r_minus_constant_is_accurate() {
        // N_- ~ 2 r^2 (1 - ...) for small r; cancellation-free form.
        let r = 1e-6;
        let (_, m) = normalization_constants(r);
        assert!((m / (2.0 * r * r) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn one_l_at_zero_is_degenerate() {
        assert!(matches!(
            logical_state(LogicalLabel::OneL, SqueezeParam::new(0.0, 0.0).unwrap(), osc(8)),
            Err(Error::DegenerateState(_))
        ));
        assert!(number_moment(LogicalLabel::OneL, 0.0, 1, 1e-12).is_err());
    }

    #[test]
    fn logical_supports_are_exact() {
        let s = osc(200);
        let xi = SqueezeParam::new(1.0, 0.4).unwrap();
        let zero = logical_state(LogicalLabel::ZeroL, xi, s).unwrap();
        let one = logical_state(LogicalLabel::OneL, xi, s).unwrap();
        for n in 0..=200 {
            if n % 4 != 0 {
                assert_eq!(zero.amplitudes()[n], C64::new(0.0, 0.0));
            }
            if n % 4 != 2 {
                assert_eq!(one.amplitudes()[n], C64::new(0.0, 0.0));
            }
        }
        assert_eq!(zero.inner(&one).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn logical_state_matches_superposition_oracle() {
        let s = osc(160);
        let xi = SqueezeParam::new(0.8, 2.2).unwrap();
        let plus = squeezed_vacuum(xi, s).unwrap();
        let minus = squeezed_vacuum(xi.negated(), s).unwrap();
        let (np, nm) = normalization_constants(0.8);
        for (label, sign, norm) in [(LogicalLabel::ZeroL, 1.0, np), (LogicalLabel::OneL, -1.0, nm)] {
            let oracle = (plus.amplitudes() + minus.amplitudes() * C64::new(sign, 0.0)) / C64::new(norm.sqrt(), 0.0);
            let series = logical_state(label, xi, s).unwrap();
            let diff = (series.amplitudes() - oracle).iter().map(|z| z.norm()).fold(0.0, f64::max);
            assert!(diff < 1e-12, "{label:?}: {diff:e}");
        }
    }

    #[test]
    fn overlap_identity() {
        let s = osc(200);
        for &r in &[0.3, 0.8, 1.2] {
            let xi = SqueezeParam::new(r, 0.7).unwrap();
            let a = squeezed_vacuum(xi, s).unwrap();
            let b = squeezed_vacuum(xi.negated(), s).unwrap();
            let overlap = a.inner(&b).unwrap();
            assert!((overlap.re - (2.0 * r).cosh().powf(-0.5)).abs() < 1e-8);
            assert!(overlap.im.abs() < 1e-8);
        }
    }

    #[test]
    fn norm_deficiency_converges() {
        for &r in &[0.5, 1.0, 1.5] {
            let d200 = squeezed_vacuum_deficiency(r, 200);
            assert!(d200 < 1e-8, "r = {r}: {d200:e}");
            let d50 = squeezed_vacuum_deficiency(r, 50);
            assert!(squeezed_vacuum_deficiency(r, 100) < d50);
        }
    }

    #[test]
    fn small_r_moment_limits() {
        for p in 1..=4 {
            let z = number_moment(LogicalLabel::ZeroL, 1e-3, p, 1e-14).unwrap();
            assert!(z >= 0.0 && z < 1e-6, "p = {p}: {z:e}");
            let o = number_moment(LogicalLabel::OneL, 1e-3, p, 1e-14).unwrap();
            assert!((o - 2f64.powi(p as i32)).abs() < 1e-3, "p = {p}: {o}");
        }
        assert!(moment_ratio(0.1, 1).unwrap().ratio < 0.01);
    }

    #[test]
    fn series_matches_truncated_operator_oracle() {
        let s = osc(200);
        let zero = logical_state(LogicalLabel::ZeroL, SqueezeParam::new(1.0, 0.0).unwrap(), s).unwrap();
        let oracle = truncated_number_moment(&zero, 1).unwrap();
        let series = number_moment(LogicalLabel::ZeroL, 1.0, 1, 1e-15).unwrap();
        assert!((series - oracle).abs() < 1e-6);
    }

    #[test]
    fn ratio_oracle_at_r_1_2() {
        let s = osc(300);
        let xi = SqueezeParam::new(1.2, 0.0).unwrap();
        let zero = logical_state(LogicalLabel::ZeroL, xi, s).unwrap();
        let one = logical_state(LogicalLabel::OneL, xi, s).unwrap();
        for p in 1..=4 {
            let oracle = truncated_number_moment(&zero, p).unwrap() / truncated_number_moment(&one, p).unwrap();
            let report = moment_ratio(1.2, p).unwrap();
            assert!((report.ratio - oracle).abs() < 1e-5, "p = {p}");
            assert!(report.truncation_estimate < 1e-10 * report.moment_zero.max(report.moment_one));
        }
    }

    #[test]
    fn ratio_approaches_one() {
        for p in 1..=4 {
            let near = (moment_ratio(2.0, p).unwrap().ratio - 1.0).abs();
            let far = (moment_ratio(0.5, p).unwrap().ratio - 1.0).abs();
            assert!(near < far, "p = {p}");
        }
    }

    #[test]
    fn kl_orthogonality_and_mismatch() {
        let s = osc(200);
        let report = kl_check(SqueezeParam::new(0.5, 0.0).unwrap(), s).unwrap();
        assert!(report.off_diagonal_max <= 1e-12);
        assert!(report.moment_mismatches.iter().all(|&(_, m)| m > 0.0));
        let strong = kl_check(SqueezeParam::new(2.0, 0.0).unwrap(), HilbertSpace::oscillator(400).unwrap()).unwrap();
        assert!(strong.moment_mismatches[0].1 < report.moment_mismatches[0].1);
    }

    #[test]
    fn sinh_squared_mean_number() {
        let s = osc(120);
        let psi = squeezed_vacuum(SqueezeParam::new(1.0, 0.0).unwrap(), s).unwrap();
        let n = truncated_number_moment(&psi, 1).unwrap();
        assert!((n - 1.381_097_845_541_815_7).abs() < 1e-10);
        let _ = fidelity(&psi, &psi).unwrap();
    }
}
