use std::f64::consts::TAU;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{AdamState, Objective, OptimizeError, RunConfig, ShotMode, PLATEAU_WINDOW};
use crate::encodings::{
    register_stats_from_counts, register_stats_from_probabilities, sample_minimal_with,
    RegisterStats, Scheme,
};
use crate::qubo::{
    check_feasibility, evaluate, Bitstring, CostBounds, EvaluatedSolution, QuboProblem,
};
use crate::rng::{derive_seed, PRNG_DESCRIPTION};
use crate::simulator::{run_statevector, sample_probabilities};

pub const EXPERIMENT_SCHEMA_VERSION: u32 = 1;

/// Sampling after training uses its own stream of the start seed.
const SAMPLING_STREAM: u64 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OptimizationTrace {
    pub start_seed: u64,
    pub initial_theta: Vec<f64>,
    pub final_theta: Vec<f64>,
    /// Offset-inclusive cost at the parameters of each iteration, before its update.
    pub costs: Vec<f64>,
    pub normalized_costs: Option<Vec<f64>>,
    /// Minimal-encoding variables on the 0.5 fallback at each iteration.
    pub fallback_counts: Vec<usize>,
    /// Seconds per iteration; not serialized so result files stay reproducible.
    #[serde(skip)]
    pub wall_times: Vec<f64>,
    pub prng: String,
}

/// Equality ignores wall times.
impl PartialEq for OptimizationTrace {
    fn eq(&self, other: &Self) -> bool {
        self.start_seed == other.start_seed
            && self.initial_theta == other.initial_theta
            && self.final_theta == other.final_theta
            && self.costs == other.costs
            && self.normalized_costs == other.normalized_costs
            && self.fallback_counts == other.fallback_counts
            && self.prng == other.prng
    }
}

impl OptimizationTrace {
    pub fn best_so_far(&self) -> Vec<f64> {
        self.costs
            .iter()
            .scan(f64::INFINITY, |best, &c| {
                *best = best.min(c);
                Some(*best)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StartResult {
    pub start_id: usize,
    pub trace: OptimizationTrace,
    /// Exact offset-inclusive cost at the final parameters.
    pub final_cost_exact: f64,
    /// Register statistics the minimal-encoding samples were drawn from.
    pub final_stats: Option<RegisterStats>,
    pub solutions: Vec<EvaluatedSolution>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub schema_version: u32,
    pub config: RunConfig,
    pub n_c: usize,
    pub n_qubits: usize,
    pub parameter_count: usize,
    pub offset: f64,
    pub bounds: Option<CostBounds>,
    pub prng: String,
    pub starts: Vec<StartResult>,
}

impl ExperimentResult {
    pub fn solutions(&self) -> impl Iterator<Item = &EvaluatedSolution> {
        self.starts.iter().flat_map(|s| &s.solutions)
    }

    /// Lowest-cost sampled solution; the first one wins ties.
    pub fn best_solution(&self) -> Option<&EvaluatedSolution> {
        self.solutions()
            .fold(None, |best: Option<&EvaluatedSolution>, s| match best {
                Some(b) if b.cost <= s.cost => Some(b),
                _ => Some(s),
            })
    }

    pub fn feasible_fraction(&self) -> f64 {
        let (mut feasible, mut total) = (0usize, 0usize);
        for s in self.solutions() {
            total += 1;
            feasible += s.feasible as usize;
        }
        if total == 0 {
            0.0
        } else {
            feasible as f64 / total as f64
        }
    }
}

/// Evaluates a bitstring; without route structure `feasible` is false and no
/// visits are counted.
pub fn evaluate_solution(
    qubo: &QuboProblem,
    x: &Bitstring,
) -> Result<EvaluatedSolution, OptimizeError> {
    if qubo.structure().is_some() {
        return Ok(check_feasibility(qubo, x)?);
    }
    let cost = evaluate(qubo, x, true)?;
    Ok(EvaluatedSolution {
        bits: x.clone(),
        cost,
        normalized_cost: qubo.bounds().and_then(|b| b.normalize(cost).ok()),
        visit_counts: Vec::new(),
        vehicles_used: x.ones().count(),
        feasible: false,
    })
}

fn optimize_start(
    objective: &Objective,
    config: &RunConfig,
    start_seed: u64,
) -> Result<OptimizationTrace, OptimizeError> {
    let mut rng = ChaCha8Rng::seed_from_u64(start_seed);
    let n_params = objective.parameter_count();
    let initial_theta: Vec<f64> = (0..n_params).map(|_| rng.random_range(0.0..TAU)).collect();
    let mut theta = initial_theta.clone();
    let mut adam = AdamState::new(n_params, config.adam);
    let offset = objective.qubo().offset();

    let mut costs: Vec<f64> = Vec::with_capacity(config.max_iterations);
    let mut fallback_counts = Vec::with_capacity(config.max_iterations);
    let mut wall_times = Vec::with_capacity(config.max_iterations);
    let mut calm = 0usize;
    for _ in 0..config.max_iterations {
        let clock = Instant::now();
        let step = objective.cost_and_gradient(
            &theta,
            config.gradient_mode,
            config.shots,
            config.common_random_numbers,
            &mut rng,
        )?;
        adam.step(&mut theta, &step.gradient);
        let cost = step.cost + offset;
        if let (Some(tol), Some(&prev)) = (config.plateau_tol, costs.last()) {
            calm = if (cost - prev).abs() < tol {
                calm + 1
            } else {
                0
            };
        }
        costs.push(cost);
        fallback_counts.push(step.stats.as_ref().map_or(0, |s| s.fallback_count()));
        wall_times.push(clock.elapsed().as_secs_f64());
        if calm >= PLATEAU_WINDOW {
            break;
        }
    }

    let normalized_costs = objective
        .qubo()
        .bounds()
        .and_then(|b| costs.iter().map(|&c| b.normalize(c).ok()).collect());
    Ok(OptimizationTrace {
        start_seed,
        initial_theta,
        final_theta: theta,
        costs,
        normalized_costs,
        fallback_counts,
        wall_times,
        prng: PRNG_DESCRIPTION.to_string(),
    })
}

/// Trains one start from `start_seed`: `theta_0 ~ U[0, 2pi)`, then
/// `max_iterations` ADAM steps on the parameter-shift gradient.
pub fn run_optimization(
    qubo: &QuboProblem,
    config: &RunConfig,
    start_seed: u64,
) -> Result<OptimizationTrace, OptimizeError> {
    config.validate()?;
    let objective = Objective::new(qubo, config.encoding, config.layers)?;
    optimize_start(&objective, config, start_seed)
}

fn run_start(
    objective: &Objective,
    config: &RunConfig,
    start_id: usize,
) -> Result<StartResult, OptimizeError> {
    let qubo = objective.qubo();
    let start_seed = derive_seed(config.seed, start_id as u64);
    let trace = optimize_start(objective, config, start_seed)?;

    let mut rng = ChaCha8Rng::seed_from_u64(start_seed);
    rng.set_stream(SAMPLING_STREAM);
    let probs = run_statevector(objective.spec(), &trace.final_theta)?.probabilities();
    let final_cost_exact = objective
        .evaluate_probabilities(&probs, ShotMode::Exact, &mut rng)?
        .cost
        + qubo.offset();

    let (bits, final_stats): (Vec<Bitstring>, Option<RegisterStats>) = match config.encoding {
        Scheme::Minimal => {
            let layout = objective.minimal_layout().expect("minimal objective");
            let stats = match config.shots {
                ShotMode::Exact => register_stats_from_probabilities(&probs, layout)?,
                ShotMode::Shots(n) => {
                    register_stats_from_counts(&sample_probabilities(&probs, n, &mut rng), layout)
                }
            };
            let bits = sample_minimal_with(&stats.p, config.samples_per_start, &mut rng);
            (bits, Some(stats))
        }
        Scheme::Full => {
            let counts = sample_probabilities(&probs, config.samples_per_start as u64, &mut rng);
            let bits = counts
                .iter()
                .flat_map(|(i, c)| {
                    std::iter::repeat_n(Bitstring::from_index(i, qubo.n_c()), c as usize)
                })
                .collect();
            (bits, None)
        }
    };
    let solutions = bits
        .iter()
        .map(|x| evaluate_solution(qubo, x))
        .collect::<Result<_, _>>()?;
    Ok(StartResult {
        start_id,
        trace,
        final_cost_exact,
        final_stats,
        solutions,
    })
}

/// Runs `n_starts` independent trainings (in parallel, collected in start
/// order) and samples `samples_per_start` solutions from each final state.
pub fn run_experiment(
    qubo: &QuboProblem,
    config: &RunConfig,
) -> Result<ExperimentResult, OptimizeError> {
    config.validate()?;
    let objective = Objective::new(qubo, config.encoding, config.layers)?;
    let starts = (0..config.n_starts)
        .into_par_iter()
        .map(|i| run_start(&objective, config, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExperimentResult {
        schema_version: EXPERIMENT_SCHEMA_VERSION,
        config: config.clone(),
        n_c: qubo.n_c(),
        n_qubits: objective.n_qubits(),
        parameter_count: objective.parameter_count(),
        offset: qubo.offset(),
        bounds: qubo.bounds().cloned(),
        prng: PRNG_DESCRIPTION.to_string(),
        starts,
    })
}
