//! Simulation and analysis of conditional squeezing in a qubit coupled
//! quadratically to a harmonic oscillator.
//!
//! The crate is organised bottom-up:
//!
//! - [`fockspace`]: truncated spaces, states, operators, measurement.
//! - [`squeezing`]: analytic squeezed-vacuum code words, moment series and
//!   Knill-Laflamme checks.
//! - [`hamiltonians`]: the driven model in the laboratory, interaction and
//!   rotating frames, its exact Bessel expansion and the rotating-wave limit.
//! - [`dynamics`]: Schrödinger and Lindblad integrators, propagators.
//! - [`wigner`]: displaced-parity Wigner functions.
//! - [`harness`]: experiment configuration, figure data and validation.
//!
//! All frequencies are measured in units of the oscillator frequency.

pub mod dynamics;
pub mod error;
pub mod fockspace;
pub mod hamiltonians;
pub mod harness;
pub mod linalg;
pub mod squeezing;
pub mod wigner;

pub use error::{Error, Result};
