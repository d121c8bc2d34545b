use super::{SimError, StateVector, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Gate {
    H(usize),
    /// Test-only state preparation gate; never emitted by an ansatz.
    X(usize),
    Ry {
        qubit: usize,
        param: usize,
    },
    Cnot {
        control: usize,
        target: usize,
    },
}

/// Layered RY/CNOT circuit: a Hadamard on every qubit, then `layers` blocks of
/// the entangling CNOTs followed by one RY per qubit.
///
/// Parameter `layer * n_qubits + q` drives the RY on qubit `q` in `layer`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnsatzSpec {
    n_qubits: usize,
    layers: usize,
    entangler: Vec<(usize, usize)>,
}

impl AnsatzSpec {
    /// Linear CNOT chain `q0->q1, q1->q2, ...` in every layer.
    pub fn hardware_efficient(n_qubits: usize, layers: usize) -> Result<Self, SimError> {
        let chain = (1..n_qubits).map(|q| (q - 1, q)).collect();
        Self::with_entangler(n_qubits, layers, chain)
    }

    pub fn with_entangler(
        n_qubits: usize,
        layers: usize,
        entangler: Vec<(usize, usize)>,
    ) -> Result<Self, SimError> {
        if n_qubits == 0 {
            return Err(SimError::NoQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        if layers == 0 {
            return Err(SimError::NoLayers);
        }
        if let Some(&(c, t)) = entangler
            .iter()
            .find(|&&(c, t)| c == t || c >= n_qubits || t >= n_qubits)
        {
            return Err(SimError::BadEntangler(c, t));
        }
        Ok(Self {
            n_qubits,
            layers,
            entangler,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn entangler(&self) -> &[(usize, usize)] {
        &self.entangler
    }

    pub fn parameter_count(&self) -> usize {
        self.n_qubits * self.layers
    }

    /// Gates in application order. Every parameter drives exactly one RY.
    pub fn gates(&self) -> Vec<Gate> {
        let mut gates: Vec<Gate> = (0..self.n_qubits).map(Gate::H).collect();
        for layer in 0..self.layers {
            gates.extend(
                self.entangler
                    .iter()
                    .map(|&(control, target)| Gate::Cnot { control, target }),
            );
            gates.extend((0..self.n_qubits).map(|qubit| Gate::Ry {
                qubit,
                param: layer * self.n_qubits + qubit,
            }));
        }
        gates
    }

    fn check(&self, theta: &[f64]) -> Result<(), SimError> {
        if theta.len() != self.parameter_count() {
            return Err(SimError::LengthMismatch {
                expected: self.parameter_count(),
                found: theta.len(),
            });
        }
        Ok(())
    }

    /// Runs the circuit and, for every parameter `j`, also the circuits with
    /// `theta[j]` shifted by `+shift` and `-shift`.
    ///
    /// The shifted runs restart from the cached state just before the RY that
    /// `theta[j]` drives, so only the suffix of the circuit is replayed.
    /// `visit(j, plus, minus)` is called in parameter-gate order; the
    /// unshifted final state is returned.
    pub fn for_each_shift(
        &self,
        theta: &[f64],
        shift: f64,
        mut visit: impl FnMut(usize, &StateVector, &StateVector),
    ) -> Result<StateVector, SimError> {
        self.check(theta)?;
        let gates = self.gates();
        let mut running = StateVector::zero(self.n_qubits)?;
        let mut shifted = theta.to_vec();
        for (g, gate) in gates.iter().enumerate() {
            if let Gate::Ry { qubit, param } = *gate {
                let mut plus = running.clone();
                plus.apply_ry(qubit, theta[param] + shift);
                let mut minus = running.clone();
                minus.apply_ry(qubit, theta[param] - shift);
                for later in &gates[g + 1..] {
                    plus.apply(later, &shifted);
                    minus.apply(later, &shifted);
                }
                visit(param, &plus, &minus);
                shifted[param] = theta[param];
            }
            running.apply(gate, theta);
        }
        Ok(running)
    }
}

/// Applies the ansatz to `|0...0>`.
pub fn run_statevector(spec: &AnsatzSpec, theta: &[f64]) -> Result<StateVector, SimError> {
    spec.check(theta)?;
    let mut sv = StateVector::zero(spec.n_qubits)?;
    for gate in spec.gates() {
        sv.apply(&gate, theta);
    }
    Ok(sv)
}
