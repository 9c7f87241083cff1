//! Lindblad master-equation generator.

use crate::error::{Error, Result};
use crate::fockspace::{annihilation, creation, pauli, DensityMatrix, HilbertSpace, OperatorMatrix, PauliAxis};
use crate::linalg::{CMatrix, I};

use super::NoiseParams;

/// One channel `rate * D[operator]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dissipator {
    pub rate: f64,
    pub operator: OperatorMatrix,
}

/// Channels of the model:
/// `(gamma_phi/2) D[sz] + gamma_1 D[s-] + gamma_m n_th D[b^dagger] + gamma_m (n_th+1) D[b]`.
/// Zero-rate channels are omitted, so an oscillator-only space is accepted
/// when both qubit rates vanish.
pub fn dissipators(noise: &NoiseParams, space: HilbertSpace) -> Result<Vec<Dissipator>> {
    noise.validate()?;
    let mut out = Vec::new();
    if noise.gamma_phi > 0.0 {
        out.push(Dissipator {
            rate: 0.5 * noise.gamma_phi,
            operator: pauli(PauliAxis::Z, space)?,
        });
    }
    if noise.gamma_1 > 0.0 {
        out.push(Dissipator {
            rate: noise.gamma_1,
            operator: pauli(PauliAxis::Minus, space)?,
        });
    }
    if noise.gamma_m > 0.0 && noise.n_m_th > 0.0 {
        out.push(Dissipator {
            rate: noise.gamma_m * noise.n_m_th,
            operator: creation(space),
        });
    }
    if noise.gamma_m > 0.0 {
        out.push(Dissipator {
            rate: noise.gamma_m * (noise.n_m_th + 1.0),
            operator: annihilation(space),
        });
    }
    Ok(out)
}

/// `-i[H, rho] + sum_k gamma_k D[L_k] rho` for the model's channels.
pub fn lindblad_rhs(h: &OperatorMatrix, noise: &NoiseParams, rho: &DensityMatrix) -> Result<CMatrix> {
    lindblad_rhs_with(h, &dissipators(noise, rho.space())?, rho)
}

/// `-i[H, rho] + sum_k gamma_k (L rho L^dagger - {L^dagger L, rho}/2)`.
pub fn lindblad_rhs_with(
    h: &OperatorMatrix,
    channels: &[Dissipator],
    rho: &DensityMatrix,
) -> Result<CMatrix> {
    let space = rho.space();
    if h.space() != space || channels.iter().any(|d| d.operator.space() != space) {
        return Err(Error::SpaceMismatch);
    }
    let r = rho.elements();
    let hm = h.elements();
    let mut out = (hm * r - r * hm) * -I;
    for ch in channels {
        let l = ch.operator.elements();
        let ld = l.adjoint();
        let ldl = &ld * l;
        out += (l * r * &ld - (&ldl * r + r * &ldl) * crate::linalg::c(0.5)) * crate::linalg::c(ch.rate);
    }
    Ok(out)
}
