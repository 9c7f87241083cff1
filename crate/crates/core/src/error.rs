use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operands live in different Hilbert spaces")]
    SpaceMismatch,

    #[error("operation requires a qubit factor but the space is oscillator-only")]
    NoQubit,

    #[error("operation requires an oscillator-only space")]
    NotOscillatorOnly,

    #[error("matrix is not Hermitian (max |A - A^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("density matrix trace is {0}, expected 1")]
    BadTrace(f64),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("Fock truncation too small: norm deficiency {deficiency:e} >= threshold {threshold:e}")]
    Truncation { deficiency: f64, threshold: f64 },

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("series did not converge after {0} terms")]
    NonConvergence(usize),

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("norm drift {drift:e} exceeds limit {limit:e} at t = {t}")]
    NormDrift { t: f64, drift: f64, limit: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 2,
            Error::Io(_) => 2,
            _ => 3,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
