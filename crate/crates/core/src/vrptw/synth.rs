//! Random VRPTW instances for experiments and tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Arc, Node, VrptwInstance};

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub customers: usize,
    /// Window opening times are drawn from `[0, horizon / 2)`.
    pub horizon: f64,
    /// Window widths are drawn uniformly from this range.
    pub window_width: (f64, f64),
    /// Integer arc costs are drawn from this inclusive range.
    pub cost_range: (u32, u32),
    /// Integer travel times are drawn from this inclusive range.
    pub travel_range: (u32, u32),
    /// Probability that a customer-to-customer arc exists. Depot arcs always exist.
    pub arc_density: f64,
}

impl SynthConfig {
    pub fn new(customers: usize) -> Self {
        Self {
            customers,
            horizon: 40.0,
            window_width: (10.0, 40.0),
            cost_range: (1, 20),
            travel_range: (1, 8),
            arc_density: 1.0,
        }
    }
}

/// Draws a random instance; identical `(config, seed)` give identical instances.
pub fn random_instance(config: &SynthConfig, seed: u64) -> VrptwInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = vec![Node::depot()];
    for id in 1..=config.customers {
        let open = (rng.random::<f64>() * config.horizon / 2.0).floor();
        let (lo, hi) = config.window_width;
        let width = (lo + rng.random::<f64>() * (hi - lo)).floor();
        nodes.push(Node::new(id, open, open + width));
    }
    let mut arcs = Vec::new();
    for from in 0..=config.customers {
        for to in 0..=config.customers {
            if from == to {
                continue;
            }
            let touches_depot = from == 0 || to == 0;
            if !touches_depot && rng.random::<f64>() >= config.arc_density {
                continue;
            }
            let cost = rng.random_range(config.cost_range.0..=config.cost_range.1);
            let time = rng.random_range(config.travel_range.0..=config.travel_range.1);
            arcs.push(Arc::new(from, to, f64::from(cost), f64::from(time)));
        }
    }
    VrptwInstance::new(format!("synth-n{}-s{seed}", config.customers), nodes, arcs)
        .expect("generated instance is well formed")
}
