//! Qubit encodings of a QUBO.
//!
//! * **Full**: one qubit per variable; basis index bit `k` is `x_k`.
//! * **Minimal**: `ceil(log2 n_c)` register qubits address a variable and one
//!   ancilla (the highest qubit) carries its value. Each variable gets the
//!   marginal `p_k = P(ancilla = 1 | register = k)` and bitstrings are drawn
//!   from the product of those marginals.

mod full;
mod minimal;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qubo::QuboError;
use crate::simulator::SimError;

pub use full::{full_cost, full_solutions_from_counts, FullEnergies};
pub use minimal::{
    minimal_cost, minimal_cost_gradient, register_stats_exact, register_stats_from_counts,
    register_stats_from_probabilities, sample_minimal_solutions, sample_minimal_with,
    RegisterStats, StatsSource, EXACT_FALLBACK_THRESHOLD,
};

#[derive(Debug, Error, PartialEq)]
pub enum EncodingError {
    #[error("an encoding needs at least one variable")]
    NoVariables,
    #[error("expected {expected} entries, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("{n_q} qubits exceed the simulator limit")]
    TooManyQubits { n_q: usize },
    #[error(transparent)]
    Qubo(#[from] QuboError),
}

impl From<SimError> for EncodingError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::TooManyQubits(n_q) => Self::TooManyQubits { n_q },
            SimError::LengthMismatch { expected, found } => {
                Self::LengthMismatch { expected, found }
            }
            _ => Self::NoVariables,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    Minimal,
    Full,
}

/// Qubits needed to encode `n_c` variables. `n_c = 0` is treated as 1.
pub fn qubits_required(n_c: usize, scheme: Scheme) -> usize {
    let n_c = n_c.max(1);
    match scheme {
        Scheme::Minimal => 1 + ceil_log2(n_c),
        Scheme::Full => n_c,
    }
}

fn ceil_log2(n: usize) -> usize {
    n.next_power_of_two().trailing_zeros() as usize
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalLayout {
    pub n_c: usize,
    pub register_qubits: usize,
}

impl MinimalLayout {
    pub fn new(n_c: usize) -> Result<Self, EncodingError> {
        if n_c == 0 {
            return Err(EncodingError::NoVariables);
        }
        Ok(Self {
            n_c,
            register_qubits: ceil_log2(n_c),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.register_qubits + 1
    }

    pub fn ancilla(&self) -> usize {
        self.register_qubits
    }

    /// Splits a basis index into `(register, ancilla bit)`.
    pub fn split(&self, index: u64) -> (usize, bool) {
        let register = (index & ((1u64 << self.register_qubits) - 1)) as usize;
        (register, (index >> self.register_qubits) & 1 == 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullLayout {
    pub n_c: usize,
}

impl FullLayout {
    pub fn new(n_c: usize) -> Result<Self, EncodingError> {
        if n_c == 0 {
            return Err(EncodingError::NoVariables);
        }
        Ok(Self { n_c })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_c
    }
}
