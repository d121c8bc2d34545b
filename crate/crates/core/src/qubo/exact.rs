//! Exhaustive enumeration of QUBO energies.
//!
//! Variables are split into a low block (enumerated through a precomputed
//! energy table) and a high block. For a high assignment `h` and low
//! assignment `m`, `E = E_lo(m) + E_hi(h) + 2 * cross_h(m)` where
//! `cross_h` is linear in `m` and tabulated per high assignment, so each
//! bitstring costs O(1) and no error accumulates along the scan.

use rayon::prelude::*;

use super::{evaluate, Bitstring, QuboError, QuboProblem};

pub const DEFAULT_BRUTE_FORCE_CAP: usize = 26;

const LOW_BLOCK: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteForceResult {
    pub x_min: Bitstring,
    pub c_min: f64,
    pub x_max: Bitstring,
    pub c_max: f64,
}

/// Offset-free energies `x^T A x` for every assignment of `vars`, indexed by
/// a mask whose bit `j` is the value of `vars[j]`.
fn subset_table(qubo: &QuboProblem, vars: &[usize]) -> Vec<f64> {
    let size = 1usize << vars.len();
    let mut table = vec![0.0; size];
    for mask in 1..size {
        let j = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let k = vars[j];
        let row = qubo.row(k);
        let mut cross = 0.0;
        let mut bits = rest;
        while bits != 0 {
            let b = bits.trailing_zeros() as usize;
            cross += row[vars[b]];
            bits &= bits - 1;
        }
        table[mask] = table[rest] + row[k] + 2.0 * cross;
    }
    table
}

/// `x^T A x` for every basis index `i` (bit `k` of `i` is `x_k`).
pub fn energy_table(qubo: &QuboProblem) -> Vec<f64> {
    let vars: Vec<usize> = (0..qubo.n_c()).collect();
    subset_table(qubo, &vars)
}

struct Enumerator<'a> {
    qubo: &'a QuboProblem,
    lo: usize,
    hi_vars: Vec<usize>,
    lo_table: Vec<f64>,
    hi_table: Vec<f64>,
}

impl<'a> Enumerator<'a> {
    fn new(qubo: &'a QuboProblem) -> Self {
        let n = qubo.n_c();
        let lo = n.min(LOW_BLOCK);
        let lo_vars: Vec<usize> = (0..lo).collect();
        let hi_vars: Vec<usize> = (lo..n).collect();
        Self {
            qubo,
            lo,
            lo_table: subset_table(qubo, &lo_vars),
            hi_table: subset_table(qubo, &hi_vars),
            hi_vars,
        }
    }

    fn chunks(&self) -> u64 {
        self.hi_table.len() as u64
    }

    /// Visits every index whose high block equals `h`, in increasing order.
    fn for_chunk(&self, h: u64, mut visit: impl FnMut(u64, f64)) {
        let mut f = vec![0.0; self.lo];
        for (b, &l) in self.hi_vars.iter().enumerate() {
            if (h >> b) & 1 == 1 {
                for (k, fk) in f.iter_mut().enumerate() {
                    *fk += self.qubo.entry(k, l);
                }
            }
        }
        let mut cross = vec![0.0; self.lo_table.len()];
        for m in 1..cross.len() {
            let j = m.trailing_zeros() as usize;
            cross[m] = cross[m & (m - 1)] + f[j];
        }
        let e_hi = self.hi_table[h as usize];
        let base = h << self.lo;
        for (m, (&e_lo, &c)) in self.lo_table.iter().zip(&cross).enumerate() {
            visit(base | m as u64, e_lo + e_hi + 2.0 * c);
        }
    }
}

/// Lexicographic rank of a bitstring index where `x_0` is most significant.
fn lex_key(index: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        index.reverse_bits() >> (64 - n)
    }
}

#[derive(Clone, Copy)]
struct Best {
    value: f64,
    index: u64,
}

/// True when `cand` beats `cur`: strictly better beyond a small tolerance,
/// or tied within it and lexicographically smaller.
fn beats(cand: Best, cur: Best, sign: f64, n: usize) -> bool {
    let tol = 1e-9 * cur.value.abs().max(1.0);
    let diff = sign * (cand.value - cur.value);
    if diff < -tol {
        true
    } else if diff <= tol {
        lex_key(cand.index, n) < lex_key(cur.index, n)
    } else {
        false
    }
}

/// Scans all `2^n_c` bitstrings with the default cap.
pub fn brute_force(qubo: &QuboProblem) -> Result<BruteForceResult, QuboError> {
    brute_force_with_cap(qubo, DEFAULT_BRUTE_FORCE_CAP)
}

/// Exhaustive minimum and maximum of the offset-inclusive cost. Ties go to
/// the lexicographically smallest bitstring (`x_0` compared first).
pub fn brute_force_with_cap(qubo: &QuboProblem, cap: usize) -> Result<BruteForceResult, QuboError> {
    let n = qubo.n_c();
    if n > cap || n > 63 {
        return Err(QuboError::TooLarge { n_c: n, cap });
    }
    let en = Enumerator::new(qubo);
    let per_chunk: Vec<(Best, Best)> = (0..en.chunks())
        .into_par_iter()
        .map(|h| {
            let mut lo: Option<Best> = None;
            let mut hi: Option<Best> = None;
            en.for_chunk(h, |index, value| {
                let cand = Best { value, index };
                if lo.is_none_or(|cur| beats(cand, cur, 1.0, n)) {
                    lo = Some(cand);
                }
                if hi.is_none_or(|cur| beats(cand, cur, -1.0, n)) {
                    hi = Some(cand);
                }
            });
            (
                lo.expect("chunk is non-empty"),
                hi.expect("chunk is non-empty"),
            )
        })
        .collect();

    let (mut lo, mut hi) = per_chunk[0];
    for &(l, h) in &per_chunk[1..] {
        if beats(l, lo, 1.0, n) {
            lo = l;
        }
        if beats(h, hi, -1.0, n) {
            hi = h;
        }
    }
    let x_min = Bitstring::from_index(lo.index, n);
    let x_max = Bitstring::from_index(hi.index, n);
    Ok(BruteForceResult {
        c_min: evaluate(qubo, &x_min, true)?,
        c_max: evaluate(qubo, &x_max, true)?,
        x_min,
        x_max,
    })
}

/// Offset-inclusive cost of every bitstring, indexed by basis index.
pub fn all_costs(qubo: &QuboProblem, cap: usize) -> Result<Vec<f64>, QuboError> {
    let n = qubo.n_c();
    if n > cap || n > 63 {
        return Err(QuboError::TooLarge { n_c: n, cap });
    }
    let en = Enumerator::new(qubo);
    let mut out = Vec::with_capacity(1 << n);
    for h in 0..en.chunks() {
        en.for_chunk(h, |_, e| out.push(e + qubo.offset()));
    }
    Ok(out)
}
