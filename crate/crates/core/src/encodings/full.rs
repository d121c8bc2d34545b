use super::{EncodingError, FullLayout};
use crate::qubo::{energy_table, evaluate, Bitstring, QuboProblem};
use crate::simulator::{ShotCounts, MAX_QUBITS};

/// Offset-free energy of every basis state, computed once per QUBO.
#[derive(Debug, Clone, PartialEq)]
pub struct FullEnergies {
    energies: Vec<f64>,
}

impl FullEnergies {
    pub fn new(qubo: &QuboProblem) -> Result<Self, EncodingError> {
        let n_q = qubo.n_c();
        if n_q == 0 {
            return Err(EncodingError::NoVariables);
        }
        if n_q > MAX_QUBITS {
            return Err(EncodingError::TooManyQubits { n_q });
        }
        Ok(Self {
            energies: energy_table(qubo),
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// `sum_i prob_i E_i` over a probability vector.
    pub fn expectation(&self, probs: &[f64]) -> Result<f64, EncodingError> {
        if probs.len() != self.energies.len() {
            return Err(EncodingError::LengthMismatch {
                expected: self.energies.len(),
                found: probs.len(),
            });
        }
        Ok(probs.iter().zip(&self.energies).map(|(p, e)| p * e).sum())
    }

    /// Empirical mean energy over measured shots.
    pub fn mean_over(&self, counts: &ShotCounts) -> f64 {
        if counts.total == 0 {
            return 0.0;
        }
        let sum: f64 = counts
            .iter()
            .map(|(i, c)| c as f64 * self.energies[i as usize])
            .sum();
        sum / counts.total as f64
    }
}

/// Empirical mean of `x^T A x` over the observed bitstrings, offset excluded.
pub fn full_cost(qubo: &QuboProblem, counts: &ShotCounts) -> Result<f64, EncodingError> {
    if counts.total == 0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for (index, count) in counts.iter() {
        sum += count as f64 * evaluate(qubo, &Bitstring::from_index(index, qubo.n_c()), false)?;
    }
    Ok(sum / counts.total as f64)
}

/// Decodes each observed basis index into a bitstring with its multiplicity.
pub fn full_solutions_from_counts(
    counts: &ShotCounts,
    layout: FullLayout,
) -> Vec<(Bitstring, u64)> {
    counts
        .iter()
        .map(|(i, c)| (Bitstring::from_index(i, layout.n_c), c))
        .collect()
}
