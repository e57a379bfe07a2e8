//! Seeded random number generation.
//!
//! Every randomized operation in the crate takes an explicit `u64` seed and
//! draws from a ChaCha8 stream keyed by it, so results are reproducible
//! across runs and platforms.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` independent standard normal draws from the stream for `seed`.
pub fn standard_normals(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = seeded(seed);
    (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
}
