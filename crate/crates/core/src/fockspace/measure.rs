use super::{DensityMatrix, HilbertSpace, OperatorMatrix, StateRef, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, CVector, C64};

/// Branch probabilities below this are treated as exactly zero.
const ZERO_PROBABILITY: f64 = 1e-14;

/// Hermiticity required of mixed inputs to [`fidelity`].
const FIDELITY_HERMITIAN_TOLERANCE: f64 = 1e-8;

/// `<psi|O|psi>` or `Tr[rho O]`.
pub fn expectation<'a>(op: &OperatorMatrix, state: impl Into<StateRef<'a>>) -> Result<C64> {
    let state = state.into();
    if op.space() != state.space() {
        return Err(Error::SpaceMismatch);
    }
    Ok(match state {
        StateRef::Pure(psi) => psi.amplitudes().dotc(&(op.elements() * psi.amplitudes())),
        StateRef::Mixed(rho) => {
            // Tr[rho O] = sum_ij rho_ij O_ji
            let r = rho.elements();
            let o = op.elements();
            let d = r.nrows();
            let mut acc = linalg::ZERO;
            for i in 0..d {
                for j in 0..d {
                    acc += r[(i, j)] * o[(j, i)];
                }
            }
            acc
        }
    })
}

/// State fidelity: `|<a|b>|^2` for pure pairs, `<a|rho|a>` for pure-mixed
/// pairs and the Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`
/// for mixed pairs.
pub fn fidelity<'a, 'b>(a: impl Into<StateRef<'a>>, b: impl Into<StateRef<'b>>) -> Result<f64> {
    let (a, b) = (a.into(), b.into());
    if a.space() != b.space() {
        return Err(Error::SpaceMismatch);
    }
    for s in [&a, &b] {
        if let StateRef::Mixed(rho) = s {
            let err = rho.hermiticity_error();
            if err > FIDELITY_HERMITIAN_TOLERANCE {
                return Err(Error::NotHermitian(err));
            }
        }
    }
    let f = match (a, b) {
        (StateRef::Pure(x), StateRef::Pure(y)) => x.inner(y)?.norm_sqr(),
        (StateRef::Pure(x), StateRef::Mixed(r)) | (StateRef::Mixed(r), StateRef::Pure(x)) => {
            let v = x.amplitudes();
            v.dotc(&(r.elements() * v)).re
        }
        (StateRef::Mixed(r), StateRef::Mixed(s)) => {
            let sr = linalg::sqrt_psd(r.elements());
            let m = &sr * s.elements() * &sr;
            let (values, _) = linalg::hermitian_eigen(&m);
            let t: f64 = values.iter().map(|&l| l.max(0.0).sqrt()).sum();
            t * t
        }
    };
    Ok(f.max(0.0))
}

/// One outcome of a projective qubit measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<S> {
    pub probability: f64,
    /// Renormalized post-measurement oscillator state; `None` when the
    /// outcome has zero probability.
    pub state: Option<S>,
}

impl<S> Branch<S> {
    pub fn is_null(&self) -> bool {
        self.state.is_none()
    }
}

/// Outcomes of a `sigma_x` measurement; `plus` is `(|e> + |g>)/sqrt(2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct XMeasurement<S> {
    pub plus: Branch<S>,
    pub minus: Branch<S>,
}

/// Projects the qubit of a composite pure state onto the `sigma_x` basis.
pub fn measure_qubit_x(state: &StateVector) -> Result<XMeasurement<StateVector>> {
    let space = state.space();
    space.require_qubit()?;
    let osc = space.oscillator_part();
    let d = space.oscillator_dim();
    let a = state.amplitudes();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let branch = |sign: f64| -> Result<Branch<StateVector>> {
        let v = CVector::from_fn(d, |n, _| (a[n] + a[d + n] * sign) * h);
        let p = v.norm_squared();
        if p < ZERO_PROBABILITY {
            return Ok(Branch {
                probability: p,
                state: None,
            });
        }
        Ok(Branch {
            probability: p,
            state: Some(StateVector::normalized(osc, v)?),
        })
    };
    Ok(XMeasurement {
        plus: branch(1.0)?,
        minus: branch(-1.0)?,
    })
}

/// Projects the qubit of a composite density matrix onto the `sigma_x` basis.
pub fn measure_qubit_x_density(rho: &DensityMatrix) -> Result<XMeasurement<DensityMatrix>> {
    let space = rho.space();
    space.require_qubit()?;
    let osc = space.oscillator_part();
    let d = space.oscillator_dim();
    let r = rho.elements();
    let ee = r.view((0, 0), (d, d));
    let eg = r.view((0, d), (d, d));
    let ge = r.view((d, 0), (d, d));
    let gg = r.view((d, d), (d, d));
    let branch = |sign: f64| -> Result<Branch<DensityMatrix>> {
        let s = linalg::c(sign);
        let block: CMatrix = (ee + gg + (eg + ge) * s) * linalg::c(0.5);
        let mut dm = DensityMatrix::unchecked(osc, block)?;
        dm.symmetrize();
        let p = dm.trace();
        if p < ZERO_PROBABILITY {
            return Ok(Branch {
                probability: p.max(0.0),
                state: None,
            });
        }
        dm.normalize()?;
        Ok(Branch {
            probability: p,
            state: Some(dm),
        })
    };
    Ok(XMeasurement {
        plus: branch(1.0)?,
        minus: branch(-1.0)?,
    })
}

/// Traces out the qubit.
pub fn partial_trace_qubit(rho: &DensityMatrix) -> Result<DensityMatrix> {
    let space = rho.space();
    space.require_qubit()?;
    let d = space.oscillator_dim();
    let r = rho.elements();
    let block: CMatrix = r.view((0, 0), (d, d)) + r.view((d, d), (d, d));
    DensityMatrix::unchecked(HilbertSpace::oscillator(space.fock_cutoff())?, block)
}
