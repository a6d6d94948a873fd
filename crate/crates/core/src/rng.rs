//! Reproducible random streams.
//!
//! Every stochastic routine takes a `(seed, stream)` pair. The generator is
//! ChaCha8 from `rand_chacha`: counter based, so each stream index selects an
//! independent 2^64-block sequence and parallel cells never share state.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator identifier written into every report.
pub const RNG_ID: &str = "chacha8/rand_chacha-0.9/seed_from_u64+set_stream";

pub type Rng = ChaCha8Rng;

/// Stream 0 of `seed`.
pub fn from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
