use crate::error::{Error, Result};

/// Qubit basis label. `Excited` is the `+1` eigenstate of `sigma_z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Qubit {
    Excited,
    Ground,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::Excited => 0,
            Qubit::Ground => 1,
        }
    }
}

/// Truncated oscillator space, optionally tensored with one qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HilbertSpace {
    fock_cutoff: usize,
    has_qubit: bool,
}

impl HilbertSpace {
    pub fn new(fock_cutoff: usize, has_qubit: bool) -> Result<Self> {
        if fock_cutoff < 1 {
            return Err(Error::InvalidSpace(format!(
                "fock cutoff must be at least 1, got {fock_cutoff}"
            )));
        }
        Ok(HilbertSpace {
            fock_cutoff,
            has_qubit,
        })
    }

    /// Oscillator-only space with Fock states `|0> .. |cutoff>`.
    pub fn oscillator(fock_cutoff: usize) -> Result<Self> {
        Self::new(fock_cutoff, false)
    }

    /// Qubit ⊗ oscillator space.
    pub fn composite(fock_cutoff: usize) -> Result<Self> {
        Self::new(fock_cutoff, true)
    }

    pub fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    pub fn has_qubit(&self) -> bool {
        self.has_qubit
    }

    pub fn oscillator_dim(&self) -> usize {
        self.fock_cutoff + 1
    }

    pub fn total_dim(&self) -> usize {
        if self.has_qubit {
            2 * self.oscillator_dim()
        } else {
            self.oscillator_dim()
        }
    }

    /// The oscillator factor of this space.
    pub fn oscillator_part(&self) -> HilbertSpace {
        HilbertSpace {
            fock_cutoff: self.fock_cutoff,
            has_qubit: false,
        }
    }

    /// Same cutoff with a qubit attached.
    pub fn with_qubit(&self) -> HilbertSpace {
        HilbertSpace {
            fock_cutoff: self.fock_cutoff,
            has_qubit: true,
        }
    }

    /// Composite index of `|q, n>`.
    pub fn index(&self, qubit: Qubit, n: usize) -> usize {
        debug_assert!(self.has_qubit && n <= self.fock_cutoff);
        qubit.index() * self.oscillator_dim() + n
    }

    pub(crate) fn require_qubit(&self) -> Result<()> {
        if self.has_qubit {
            Ok(())
        } else {
            Err(Error::NoQubit)
        }
    }

    pub(crate) fn require_oscillator_only(&self) -> Result<()> {
        if self.has_qubit {
            Err(Error::NotOscillatorOnly)
        } else {
            Ok(())
        }
    }
}
