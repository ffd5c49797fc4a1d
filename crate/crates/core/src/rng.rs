//! Seeded random streams.
//!
//! Every randomized operation takes a master seed. Monte Carlo replicate `r`
//! draws from ChaCha stream `r` under that seed, so a replicate's output is
//! independent of scheduling and of how many other replicates run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// The generator used by single-shot operations such as `sample_er`.
pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The generator for replicate `index` under `seed`.
pub fn replicate_stream(seed: u64, index: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
