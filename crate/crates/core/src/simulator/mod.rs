//! Dense statevector simulation of the hardware-efficient ansatz.
//!
//! Bit order: qubit `q` is bit `q` of the basis index, so qubit 0 is the least
//! significant bit. `X` on qubit 0 of `|00>` gives index 1.

mod ansatz;
mod sampling;

use std::io::{self, Read, Write};

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub use ansatz::{run_statevector, AnsatzSpec, Gate};
pub use sampling::{sample, sample_probabilities, ShotCounts};

/// Largest register the dense simulator accepts.
pub const MAX_QUBITS: usize = 24;

/// States at least this large are updated in parallel.
const PAR_MIN_LEN: usize = 1 << 15;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("a circuit needs at least one qubit")]
    NoQubits,
    #[error("a circuit needs at least one layer")]
    NoLayers,
    #[error("{0} qubits exceed the simulator limit of {MAX_QUBITS}")]
    TooManyQubits(usize),
    #[error("entangler pair ({0}, {1}) is invalid")]
    BadEntangler(usize, usize),
    #[error("expected {expected} parameters, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    BadLength(usize),
    #[error("statevector dump: {0}")]
    Dump(#[from] io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self, SimError> {
        if n_qubits == 0 {
            return Err(SimError::NoQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amps })
    }

    /// Wraps raw amplitudes; the caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies the real 2x2 matrix `[[m00, m01], [m10, m11]]` to `qubit`.
    fn apply_real_1q(&mut self, qubit: usize, m: [f64; 4]) {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let stride = 1usize << qubit;
        let kernel = |lo: &mut [Complex64], hi: &mut [Complex64]| {
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x * m[0] + y * m[1];
                *b = x * m[2] + y * m[3];
            }
        };
        let len = self.amps.len();
        if len >= PAR_MIN_LEN {
            if 2 * stride < len {
                self.amps
                    .par_chunks_exact_mut(2 * stride)
                    .for_each(|block| {
                        let (lo, hi) = block.split_at_mut(stride);
                        kernel(lo, hi);
                    });
            } else {
                let (lo, hi) = self.amps.split_at_mut(stride);
                lo.par_chunks_mut(4096)
                    .zip(hi.par_chunks_mut(4096))
                    .for_each(|(l, h)| kernel(l, h));
            }
        } else {
            for block in self.amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                kernel(lo, hi);
            }
        }
    }

    pub fn apply_h(&mut self, qubit: usize) {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        self.apply_real_1q(qubit, [r, r, r, -r]);
    }

    /// `RY(theta) = [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]`.
    pub fn apply_ry(&mut self, qubit: usize, theta: f64) {
        let (s, c) = (theta / 2.0).sin_cos();
        self.apply_real_1q(qubit, [c, -s, s, c]);
    }

    /// Pauli X. Only used to prepare test states.
    pub fn apply_x(&mut self, qubit: usize) {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let stride = 1usize << qubit;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.swap_with_slice(hi);
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        assert!(
            control < self.n_qubits && target < self.n_qubits && control != target,
            "invalid CNOT({control}, {target})"
        );
        let (low, high) = (control.min(target), control.max(target));
        let cmask = 1usize << control;
        let tmask = 1usize << target;
        // Enumerate indices with both bits clear by inserting zeros at `low` and `high`.
        for j in 0..self.amps.len() >> 2 {
            let i = insert_zero(insert_zero(j, low), high) | cmask;
            self.amps.swap(i, i | tmask);
        }
    }

    pub fn apply(&mut self, gate: &Gate, params: &[f64]) {
        match *gate {
            Gate::H(q) => self.apply_h(q),
            Gate::X(q) => self.apply_x(q),
            Gate::Ry { qubit, param } => self.apply_ry(qubit, params[param]),
            Gate::Cnot { control, target } => self.apply_cnot(control, target),
        }
    }

    /// `|amplitude|^2` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Binary dump: `n_qubits` as little-endian u32, then interleaved
    /// little-endian f64 real/imaginary parts.
    pub fn write_dump(&self, mut w: impl Write) -> Result<(), SimError> {
        w.write_all(&(self.n_qubits as u32).to_le_bytes())?;
        for a in &self.amps {
            w.write_all(&a.re.to_le_bytes())?;
            w.write_all(&a.im.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_dump(mut r: impl Read) -> Result<Self, SimError> {
        let mut word = [0u8; 4];
        r.read_exact(&mut word)?;
        let n_qubits = u32::from_le_bytes(word) as usize;
        if n_qubits == 0 {
            return Err(SimError::NoQubits);
        }
        if n_qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits(n_qubits));
        }
        let mut amps = Vec::with_capacity(1 << n_qubits);
        let mut buf = [0u8; 8];
        for _ in 0..1usize << n_qubits {
            r.read_exact(&mut buf)?;
            let re = f64::from_le_bytes(buf);
            r.read_exact(&mut buf)?;
            let im = f64::from_le_bytes(buf);
            amps.push(Complex64::new(re, im));
        }
        Ok(Self { n_qubits, amps })
    }
}

fn insert_zero(value: usize, bit: usize) -> usize {
    let low = value & ((1 << bit) - 1);
    ((value >> bit) << (bit + 1)) | low
}

/// `|amplitude|^2` of every basis state.
pub fn basis_probabilities(sv: &StateVector) -> Vec<f64> {
    sv.probabilities()
}
