//! Truncated Fock space and single-qubit linear algebra.
//!
//! Composite basis ordering: qubit slot first, `|e>` before `|g>`, so the
//! composite index of `|q, n>` is `q * (N + 1) + n` with `q = 0` for `|e>`.

mod measure;
mod operator;
mod space;
mod state;

pub use measure::{
    expectation, fidelity, measure_qubit_x, measure_qubit_x_density, partial_trace_qubit, Branch,
    XMeasurement,
};
pub use operator::{
    annihilation, creation, embed, identity, number, pauli, qubit_matrix, OperatorMatrix,
    PauliAxis,
};
pub use space::{HilbertSpace, Qubit};
pub use state::{DensityMatrix, StateRef, StateVector};

/// Default tolerance on `| ||psi||^2 - 1 |` for normalizing constructors.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Default ceiling on top-Fock-level population before a truncation warning.
pub const DEFAULT_LEAK_THRESHOLD: f64 = 1e-6;
