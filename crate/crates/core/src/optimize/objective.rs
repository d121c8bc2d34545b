use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{GradientMode, OptimizeError, ShotMode};
use crate::encodings::{
    minimal_cost, minimal_cost_gradient, register_stats_from_counts,
    register_stats_from_probabilities, FullEnergies, FullLayout, MinimalLayout, RegisterStats,
    Scheme,
};
use crate::qubo::QuboProblem;
use crate::simulator::{run_statevector, sample_probabilities, AnsatzSpec, StateVector};

/// Parameter-shift offset for RY-generated expectations.
pub const SHIFT: f64 = std::f64::consts::FRAC_PI_2;

#[derive(Debug, Clone)]
enum Kind {
    Minimal(MinimalLayout),
    Full(FullLayout, FullEnergies),
}

/// Offset-free cost of one circuit evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub cost: f64,
    /// Register statistics behind a minimal-encoding cost.
    pub stats: Option<RegisterStats>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    /// Offset-free cost at the unshifted parameters.
    pub cost: f64,
    pub gradient: Vec<f64>,
    pub stats: Option<RegisterStats>,
}

/// A QUBO bound to an encoding and an ansatz.
#[derive(Debug, Clone)]
pub struct Objective<'a> {
    qubo: &'a QuboProblem,
    spec: AnsatzSpec,
    kind: Kind,
}

impl<'a> Objective<'a> {
    pub fn new(
        qubo: &'a QuboProblem,
        scheme: Scheme,
        layers: usize,
    ) -> Result<Self, OptimizeError> {
        let kind = match scheme {
            Scheme::Minimal => Kind::Minimal(MinimalLayout::new(qubo.n_c())?),
            Scheme::Full => Kind::Full(FullLayout::new(qubo.n_c())?, FullEnergies::new(qubo)?),
        };
        let n_qubits = match &kind {
            Kind::Minimal(l) => l.n_qubits(),
            Kind::Full(l, _) => l.n_qubits(),
        };
        Ok(Self {
            qubo,
            spec: AnsatzSpec::hardware_efficient(n_qubits, layers)?,
            kind,
        })
    }

    pub fn qubo(&self) -> &QuboProblem {
        self.qubo
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn scheme(&self) -> Scheme {
        match self.kind {
            Kind::Minimal(_) => Scheme::Minimal,
            Kind::Full(..) => Scheme::Full,
        }
    }

    pub fn minimal_layout(&self) -> Option<MinimalLayout> {
        match self.kind {
            Kind::Minimal(l) => Some(l),
            Kind::Full(..) => None,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.spec.n_qubits()
    }

    pub fn parameter_count(&self) -> usize {
        self.spec.parameter_count()
    }

    /// Cost of a prepared distribution. Shot mode measures `n` times with `rng`.
    pub fn evaluate_probabilities(
        &self,
        probs: &[f64],
        shots: ShotMode,
        rng: &mut ChaCha8Rng,
    ) -> Result<Evaluation, OptimizeError> {
        let counts = match shots {
            ShotMode::Exact => None,
            ShotMode::Shots(n) => Some(sample_probabilities(probs, n, rng)),
        };
        Ok(match (&self.kind, counts) {
            (Kind::Minimal(layout), None) => {
                let stats = register_stats_from_probabilities(probs, *layout)?;
                Evaluation {
                    cost: minimal_cost(self.qubo, &stats)?,
                    stats: Some(stats),
                }
            }
            (Kind::Minimal(layout), Some(c)) => {
                let stats = register_stats_from_counts(&c, *layout);
                Evaluation {
                    cost: minimal_cost(self.qubo, &stats)?,
                    stats: Some(stats),
                }
            }
            (Kind::Full(_, energies), None) => Evaluation {
                cost: energies.expectation(probs)?,
                stats: None,
            },
            (Kind::Full(_, energies), Some(c)) => Evaluation {
                cost: energies.mean_over(&c),
                stats: None,
            },
        })
    }

    /// Runs the circuit at `theta` and returns its offset-free cost.
    pub fn cost(
        &self,
        theta: &[f64],
        shots: ShotMode,
        rng: &mut ChaCha8Rng,
    ) -> Result<f64, OptimizeError> {
        let sv = run_statevector(&self.spec, theta)?;
        Ok(self
            .evaluate_probabilities(&sv.probabilities(), shots, rng)?
            .cost)
    }

    pub fn exact_cost(&self, theta: &[f64]) -> Result<f64, OptimizeError> {
        let mut unused = ChaCha8Rng::seed_from_u64(0);
        self.cost(theta, ShotMode::Exact, &mut unused)
    }

    pub fn gradient(
        &self,
        theta: &[f64],
        mode: GradientMode,
        shots: ShotMode,
        common_random_numbers: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<Vec<f64>, OptimizeError> {
        Ok(self
            .cost_and_gradient(theta, mode, shots, common_random_numbers, rng)?
            .gradient)
    }

    /// Cost at `theta` and its parameter-shift gradient.
    ///
    /// In shot mode the unshifted evaluation and every `+/-` pair get their own
    /// seed drawn from `rng`; with common random numbers both halves of a pair
    /// share it, otherwise the minus half uses a second stream.
    ///
    /// The chain rule differentiates the cost through the projector
    /// expectations. Both `dC/dtheta_j` terms are linear in the basis
    /// distribution, so they collapse into one weight per basis state and a
    /// single shifted expectation of those weights per parameter. For the full
    /// encoding the weights are the energies themselves and the two modes
    /// coincide.
    pub fn cost_and_gradient(
        &self,
        theta: &[f64],
        mode: GradientMode,
        shots: ShotMode,
        common_random_numbers: bool,
        rng: &mut ChaCha8Rng,
    ) -> Result<Step, OptimizeError> {
        let n_params = self.spec.parameter_count();
        let (center_seed, pair_seeds): (u64, Vec<u64>) = match shots {
            ShotMode::Exact => (0, vec![0; n_params]),
            ShotMode::Shots(_) => (
                rng.next_u64(),
                (0..n_params).map(|_| rng.next_u64()).collect(),
            ),
        };
        let pair_rngs = |j: usize| {
            let plus = ChaCha8Rng::seed_from_u64(pair_seeds[j]);
            let mut minus = plus.clone();
            if !common_random_numbers {
                minus.set_stream(1);
            }
            (plus, minus)
        };

        let center = run_statevector(&self.spec, theta)?;
        let center_eval = self.evaluate_probabilities(
            &center.probabilities(),
            shots,
            &mut ChaCha8Rng::seed_from_u64(center_seed),
        )?;

        let mut gradient = vec![0.0; n_params];
        let linear_weights = match (&self.kind, mode) {
            (Kind::Full(_, energies), _) => Some(energies.energies().to_vec()),
            (Kind::Minimal(layout), GradientMode::ChainRule) => {
                let stats = center_eval
                    .stats
                    .as_ref()
                    .expect("minimal evaluation has stats");
                Some(chain_rule_weights(self.qubo, *layout, stats)?)
            }
            (Kind::Minimal(_), GradientMode::NaiveShift) => None,
        };

        let mut failure = None;
        self.spec.for_each_shift(theta, SHIFT, |j, plus, minus| {
            if failure.is_some() {
                return;
            }
            let (mut rng_plus, mut rng_minus) = pair_rngs(j);
            let diff = match &linear_weights {
                Some(w) => Ok(weighted_mean(w, plus, shots, &mut rng_plus)
                    - weighted_mean(w, minus, shots, &mut rng_minus)),
                None => self
                    .evaluate_probabilities(&plus.probabilities(), shots, &mut rng_plus)
                    .and_then(|p| {
                        let m = self.evaluate_probabilities(
                            &minus.probabilities(),
                            shots,
                            &mut rng_minus,
                        )?;
                        Ok(p.cost - m.cost)
                    }),
            };
            match diff {
                Ok(d) => gradient[j] = d / 2.0,
                Err(e) => failure = Some(e),
            }
        })?;
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Step {
            cost: center_eval.cost,
            gradient,
            stats: center_eval.stats,
        })
    }
}

/// Per-basis-state weights `W` with `dC/dtheta_j = d<W>/dtheta_j` at the
/// current marginals. For a non-fallback variable `k` with
/// `g_k = dC/dp_k`, `p_k = <P_k^1>/<P_k>`:
/// register `k`, ancilla 0 gets `-g_k p_k / <P_k>`;
/// register `k`, ancilla 1 gets `g_k (1 - p_k) / <P_k>`.
fn chain_rule_weights(
    qubo: &QuboProblem,
    layout: MinimalLayout,
    stats: &RegisterStats,
) -> Result<Vec<f64>, OptimizeError> {
    let (_, dcdp) = minimal_cost_gradient(qubo, &stats.p)?;
    let (totals, ones) = stats.projector_expectations();
    let anc = 1usize << layout.register_qubits;
    let mut w = vec![0.0; 1 << layout.n_qubits()];
    for k in 0..layout.n_c {
        if stats.fallback[k] {
            continue;
        }
        let (t, o, g) = (totals[k], ones[k], dcdp[k]);
        let w_total = -g * o / (t * t);
        let w_ones = g / t;
        w[k] = w_total;
        w[anc | k] = w_total + w_ones;
    }
    Ok(w)
}

fn weighted_mean(w: &[f64], sv: &StateVector, shots: ShotMode, rng: &mut ChaCha8Rng) -> f64 {
    match shots {
        ShotMode::Exact => sv
            .amplitudes()
            .iter()
            .zip(w)
            .map(|(a, wi)| a.norm_sqr() * wi)
            .sum(),
        ShotMode::Shots(n) => {
            let counts = sample_probabilities(&sv.probabilities(), n, rng);
            counts
                .iter()
                .map(|(i, c)| c as f64 * w[i as usize])
                .sum::<f64>()
                / counts.total as f64
        }
    }
}

/// `g_j = [f(theta + (pi/2) e_j) - f(theta - (pi/2) e_j)] / 2` for any scalar
/// function of the parameters.
pub fn parameter_shift_gradient(theta: &[f64], mut f: impl FnMut(&[f64]) -> f64) -> Vec<f64> {
    let mut shifted = theta.to_vec();
    (0..theta.len())
        .map(|j| {
            shifted[j] = theta[j] + SHIFT;
            let up = f(&shifted);
            shifted[j] = theta[j] - SHIFT;
            let down = f(&shifted);
            shifted[j] = theta[j];
            (up - down) / 2.0
        })
        .collect()
}
