use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{evaluate, Bitstring, QuboError, QuboProblem};

/// Geometric cooling from `t_hi` to `t_lo` over `sweeps` full sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealSchedule {
    pub sweeps: usize,
    pub t_hi: f64,
    pub t_lo: f64,
    pub restarts: usize,
}

impl AnnealSchedule {
    /// Starting temperature on the scale of a typical single-flip change.
    pub fn auto(qubo: &QuboProblem) -> Self {
        let n = qubo.n_c().max(1);
        let scale = (0..qubo.n_c())
            .map(|k| qubo.row(k).iter().map(|a| a.abs()).sum::<f64>())
            .sum::<f64>()
            / n as f64;
        let t_hi = if scale > 0.0 { scale } else { 1.0 };
        Self {
            sweeps: if qubo.n_c() <= 64 { 2000 } else { 600 },
            t_hi,
            t_lo: t_hi * 1e-4,
            restarts: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealResult {
    /// Lowest offset-inclusive cost found.
    pub c_min_est: f64,
    /// Highest offset-inclusive cost found.
    pub c_max_est: f64,
    pub x_best: Bitstring,
    pub x_worst: Bitstring,
    /// Always false: annealing gives no optimality guarantee.
    pub certified: bool,
}

/// Single-flip Metropolis annealing for `sign * x^T A x`, returning the best
/// assignment seen (ending with a greedy descent).
fn anneal_once(
    qubo: &QuboProblem,
    sign: f64,
    sched: &AnnealSchedule,
    rng: &mut ChaCha8Rng,
) -> Vec<bool> {
    let n = qubo.n_c();
    let mut x: Vec<bool> = (0..n).map(|_| rng.random::<bool>()).collect();
    let ones: Vec<usize> = (0..n).filter(|&k| x[k]).collect();
    let mut field = qubo.field(&ones);
    let mut energy = 0.0;
    let mut best_energy = 0.0;
    let mut best = x.clone();

    let delta = |x: &[bool], field: &[f64], k: usize| {
        let a_kk = qubo.entry(k, k);
        let s = if x[k] { -1.0 } else { 1.0 };
        let others = field[k] - if x[k] { a_kk } else { 0.0 };
        sign * s * (a_kk + 2.0 * others)
    };
    let flip = |x: &mut Vec<bool>, field: &mut Vec<f64>, k: usize| {
        let s = if x[k] { -1.0 } else { 1.0 };
        x[k] = !x[k];
        for (l, f) in field.iter_mut().enumerate() {
            *f += s * qubo.entry(l, k);
        }
    };

    let steps = sched.sweeps.max(1);
    let ratio = if sched.t_hi > 0.0 && sched.t_lo > 0.0 {
        (sched.t_lo / sched.t_hi).powf(1.0 / (steps.max(2) - 1) as f64)
    } else {
        1.0
    };
    let mut temp = sched.t_hi;
    for _ in 0..steps {
        for k in 0..n {
            let d = delta(&x, &field, k);
            if d <= 0.0 || rng.random::<f64>() < (-d / temp).exp() {
                flip(&mut x, &mut field, k);
                energy += d;
                if energy < best_energy {
                    best_energy = energy;
                    best.clone_from(&x);
                }
            }
        }
        temp *= ratio;
    }

    // Greedy descent from the best state seen.
    x.clone_from(&best);
    let ones: Vec<usize> = (0..n).filter(|&k| x[k]).collect();
    field = qubo.field(&ones);
    loop {
        let mut improved = false;
        for k in 0..n {
            if delta(&x, &field, k) < 0.0 {
                flip(&mut x, &mut field, k);
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }
    x
}

/// Estimates the cost range by annealing towards the minimum and the maximum.
/// Results are reproducible per seed but never certified.
pub fn anneal_bounds(
    qubo: &QuboProblem,
    schedule: &AnnealSchedule,
    seed: u64,
) -> Result<AnnealResult, QuboError> {
    if qubo.n_c() == 0 {
        return Err(QuboError::NoVariables);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut search = |sign: f64| -> Result<(f64, Bitstring), QuboError> {
        let mut best: Option<(f64, Bitstring)> = None;
        for _ in 0..schedule.restarts.max(1) {
            let x = Bitstring::new(anneal_once(qubo, sign, schedule, &mut rng));
            let c = evaluate(qubo, &x, true)?;
            if best.as_ref().is_none_or(|(bc, _)| sign * c < sign * bc) {
                best = Some((c, x));
            }
        }
        Ok(best.expect("at least one restart"))
    };
    let (c_min_est, x_best) = search(1.0)?;
    let (c_max_est, x_worst) = search(-1.0)?;
    Ok(AnnealResult {
        c_min_est,
        c_max_est,
        x_best,
        x_worst,
        certified: false,
    })
}
