use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use super::StateVector;

/// Measurement outcomes keyed by basis index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShotCounts {
    pub counts: BTreeMap<u64, u64>,
    pub total: u64,
}

impl ShotCounts {
    pub fn get(&self, index: u64) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i, c))
    }

    fn add(&mut self, index: u64, count: u64) {
        if count > 0 {
            *self.counts.entry(index).or_insert(0) += count;
            self.total += count;
        }
    }
}

/// Measures `sv` in the computational basis `n_shots` times.
pub fn sample(sv: &StateVector, n_shots: u64, seed: u64) -> ShotCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_probabilities(&sv.probabilities(), n_shots, &mut rng)
}

/// Draws `n_shots` outcomes from the distribution `probs` (need not be exactly
/// normalized). Outcomes with zero probability are never drawn.
///
/// Large shot counts use a chain of conditional binomials over the basis;
/// small ones draw each shot by inverse CDF. Both produce an exact
/// multinomial sample.
pub fn sample_probabilities(probs: &[f64], n_shots: u64, rng: &mut impl Rng) -> ShotCounts {
    let mut out = ShotCounts::default();
    if n_shots == 0 || probs.is_empty() {
        return out;
    }
    if n_shots as usize >= probs.len() / 4 {
        let mut suffix = vec![0.0; probs.len() + 1];
        for i in (0..probs.len()).rev() {
            suffix[i] = suffix[i + 1] + probs[i];
        }
        let last = probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(probs.len() - 1);
        let mut left = n_shots;
        for (i, &p) in probs.iter().enumerate() {
            if left == 0 {
                break;
            }
            if p <= 0.0 {
                continue;
            }
            if i == last {
                out.add(i as u64, left);
                break;
            }
            let q = (p / suffix[i]).clamp(0.0, 1.0);
            let k = Binomial::new(left, q)
                .expect("probability clamped to [0, 1]")
                .sample(rng);
            out.add(i as u64, k);
            left -= k;
        }
    } else {
        let mut cdf = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for &p in probs {
            acc += p.max(0.0);
            cdf.push(acc);
        }
        let last = probs
            .iter()
            .rposition(|&p| p > 0.0)
            .unwrap_or(probs.len() - 1);
        for _ in 0..n_shots {
            let u = rng.random::<f64>() * acc;
            let i = cdf.partition_point(|&c| c <= u).min(last);
            out.add(i as u64, 1);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ry_state(theta: f64) -> StateVector {
        let mut sv = StateVector::zero(1).unwrap();
        sv.apply_ry(0, theta);
        sv
    }

    #[test]
    fn definite_state_always_measures_the_same() {
        let sv = StateVector::zero(2).unwrap();
        let c = sample(&sv, 100, 3);
        assert_eq!(c.get(0), 100);
        assert_eq!(c.total, 100);
        assert_eq!(c.counts.len(), 1);
    }

    #[test]
    fn frequencies_within_five_sigma() {
        // RY(2pi/3)|0> has P(1) = 0.75.
        let sv = ry_state(2.0 * std::f64::consts::PI / 3.0);
        let n = 10_000u64;
        let sigma = (n as f64 * 0.75 * 0.25).sqrt();
        for seed in 0..5 {
            let c = sample(&sv, n, seed);
            assert!((c.get(1) as f64 - 7500.0).abs() < 5.0 * sigma);
        }
    }

    #[test]
    fn sparse_path_frequencies_within_five_sigma() {
        // 1024 outcomes with 100 shots goes through the inverse-CDF path.
        let mut probs = vec![0.0; 1024];
        probs[7] = 0.2;
        probs[900] = 0.8;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut hits = 0;
        for _ in 0..100 {
            let c = sample_probabilities(&probs, 100, &mut rng);
            assert_eq!(c.total, 100);
            assert_eq!(c.get(7) + c.get(900), 100);
            hits += c.get(900);
        }
        let sigma = (10_000.0f64 * 0.8 * 0.2).sqrt();
        assert!((hits as f64 - 8000.0).abs() < 5.0 * sigma);
    }

    #[test]
    fn same_seed_same_counts() {
        let sv = ry_state(1.0);
        assert_eq!(sample(&sv, 500, 42), sample(&sv, 500, 42));
    }

    proptest! {
        #[test]
        fn never_draws_impossible_outcomes(
            weights in prop::collection::vec(prop_oneof![Just(0.0), 0.01f64..1.0], 1..40),
            shots in 1u64..300,
            seed in any::<u64>(),
        ) {
            prop_assume!(weights.iter().any(|&w| w > 0.0));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = sample_probabilities(&weights, shots, &mut rng);
            prop_assert_eq!(c.total, shots);
            prop_assert_eq!(c.iter().map(|(_, k)| k).sum::<u64>(), shots);
            for (i, _) in c.iter() {
                prop_assert!(weights[i as usize] > 0.0);
            }
        }
    }
}
