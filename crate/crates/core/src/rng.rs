//! Seeding conventions shared by every stochastic routine.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Recorded in result metadata so runs can be replayed.
pub const PRNG_DESCRIPTION: &str =
    "ChaCha8Rng (rand_chacha 0.9) via seed_from_u64; child seeds = first u64 of stream i";

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Child seed `i` of `master`: the first word of ChaCha8 stream `i`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(stream);
    rng.next_u64()
}
