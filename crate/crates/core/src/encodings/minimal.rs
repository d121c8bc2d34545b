use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{EncodingError, MinimalLayout};
use crate::qubo::{Bitstring, QuboProblem};
use crate::simulator::{ShotCounts, StateVector};

/// Register probability below which an exact-mode variable falls back to 0.5.
pub const EXACT_FALLBACK_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum StatsSource {
    Shots { n_shots: u64 },
    Exact,
}

/// Per-variable projector estimates for the minimal encoding.
///
/// `totals[k]` is the weight observed with register `k` (any ancilla) and
/// `ones[k]` the part of it with ancilla 1; both are shot counts in shot mode
/// and probabilities in exact mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegisterStats {
    pub layout: MinimalLayout,
    pub totals: Vec<f64>,
    pub ones: Vec<f64>,
    pub p: Vec<f64>,
    pub fallback: Vec<bool>,
    /// Weight that landed on register indices `>= n_c`.
    pub discarded: f64,
    pub source: StatsSource,
}

impl RegisterStats {
    fn finish(
        layout: MinimalLayout,
        totals: Vec<f64>,
        ones: Vec<f64>,
        discarded: f64,
        source: StatsSource,
    ) -> Self {
        let threshold = match source {
            StatsSource::Shots { .. } => 0.0,
            StatsSource::Exact => EXACT_FALLBACK_THRESHOLD,
        };
        let fallback: Vec<bool> = totals.iter().map(|&t| t <= 0.0 || t < threshold).collect();
        let p = totals
            .iter()
            .zip(&ones)
            .zip(&fallback)
            .map(|((&t, &o), &fb)| if fb { 0.5 } else { (o / t).clamp(0.0, 1.0) })
            .collect();
        Self {
            layout,
            totals,
            ones,
            p,
            fallback,
            discarded,
            source,
        }
    }

    /// Total weight the estimates are normalized by: `n_shots` or 1.
    pub fn mass(&self) -> f64 {
        match self.source {
            StatsSource::Shots { n_shots } => n_shots as f64,
            StatsSource::Exact => 1.0,
        }
    }

    /// `(<P_k>, <P_k^1>)` for every variable.
    pub fn projector_expectations(&self) -> (Vec<f64>, Vec<f64>) {
        let m = self.mass();
        (
            self.totals.iter().map(|t| t / m).collect(),
            self.ones.iter().map(|o| o / m).collect(),
        )
    }

    pub fn fallback_count(&self) -> usize {
        self.fallback.iter().filter(|&&f| f).count()
    }

    /// Text dump: a header with the source and discard tally, then one
    /// `k,total,ones,p,fallback` row per variable.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# schema_version: 1\n");
        match self.source {
            StatsSource::Shots { n_shots } => {
                let _ = writeln!(out, "# source: shots n_shots={n_shots}");
            }
            StatsSource::Exact => out.push_str("# source: exact\n"),
        }
        let _ = writeln!(out, "# discarded: {}", self.discarded);
        out.push_str("k,total,ones,p,fallback\n");
        for k in 0..self.p.len() {
            let _ = writeln!(
                out,
                "{k},{},{},{},{}",
                self.totals[k], self.ones[k], self.p[k], self.fallback[k] as u8
            );
        }
        out
    }
}

/// Tallies measured shots per register index.
pub fn register_stats_from_counts(counts: &ShotCounts, layout: MinimalLayout) -> RegisterStats {
    let mut totals = vec![0.0; layout.n_c];
    let mut ones = vec![0.0; layout.n_c];
    let mut discarded = 0.0;
    for (index, count) in counts.iter() {
        let (register, ancilla) = layout.split(index);
        if register >= layout.n_c {
            discarded += count as f64;
            continue;
        }
        totals[register] += count as f64;
        if ancilla {
            ones[register] += count as f64;
        }
    }
    RegisterStats::finish(
        layout,
        totals,
        ones,
        discarded,
        StatsSource::Shots {
            n_shots: counts.total,
        },
    )
}

/// Exact projector expectations from basis probabilities.
pub fn register_stats_from_probabilities(
    probs: &[f64],
    layout: MinimalLayout,
) -> Result<RegisterStats, EncodingError> {
    let dim = 1usize << layout.n_qubits();
    if probs.len() != dim {
        return Err(EncodingError::LengthMismatch {
            expected: dim,
            found: probs.len(),
        });
    }
    let reg = 1usize << layout.register_qubits;
    let (low, high) = probs.split_at(reg);
    let n = layout.n_c;
    let ones = high[..n].to_vec();
    let totals = low[..n].iter().zip(&ones).map(|(a, b)| a + b).collect();
    let discarded = low[n..].iter().chain(&high[n..]).fold(0.0, |a, b| a + b);
    Ok(RegisterStats::finish(
        layout,
        totals,
        ones,
        discarded,
        StatsSource::Exact,
    ))
}

pub fn register_stats_exact(
    sv: &StateVector,
    layout: MinimalLayout,
) -> Result<RegisterStats, EncodingError> {
    register_stats_from_probabilities(&sv.probabilities(), layout)
}

fn check_len(qubo: &QuboProblem, p: &[f64]) -> Result<(), EncodingError> {
    if p.len() != qubo.n_c() {
        return Err(EncodingError::LengthMismatch {
            expected: qubo.n_c(),
            found: p.len(),
        });
    }
    Ok(())
}

/// `sum_{k != l} A_kl p_k p_l + sum_k A_kk p_k`, offset excluded.
pub fn minimal_cost(qubo: &QuboProblem, stats: &RegisterStats) -> Result<f64, EncodingError> {
    minimal_cost_gradient(qubo, &stats.p).map(|(c, _)| c)
}

/// The minimal-encoding cost of marginals `p` and its partial derivatives
/// `dC/dp_k = 2 sum_{l != k} A_kl p_l + A_kk`.
pub fn minimal_cost_gradient(
    qubo: &QuboProblem,
    p: &[f64],
) -> Result<(f64, Vec<f64>), EncodingError> {
    check_len(qubo, p)?;
    let mut cost = 0.0;
    let grad = (0..p.len())
        .map(|k| {
            let row = qubo.row(k);
            let a_kk = row[k];
            let off: f64 = row.iter().zip(p).map(|(a, q)| a * q).sum::<f64>() - a_kk * p[k];
            cost += p[k] * (off + a_kk);
            2.0 * off + a_kk
        })
        .collect();
    Ok((cost, grad))
}

/// Draws bitstrings with independent bits `P(x_k = 1) = p_k`.
pub fn sample_minimal_solutions(
    stats: &RegisterStats,
    n_samples: usize,
    seed: u64,
) -> Vec<Bitstring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_minimal_with(&stats.p, n_samples, &mut rng)
}

pub fn sample_minimal_with(p: &[f64], n_samples: usize, rng: &mut impl Rng) -> Vec<Bitstring> {
    (0..n_samples)
        .map(|_| Bitstring::new(p.iter().map(|&pk| rng.random::<f64>() < pk).collect()))
        .collect()
}
