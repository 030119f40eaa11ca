//! Seeded random streams.
//!
//! Every generator in the crate is ChaCha8 (`rand_chacha::ChaCha8Rng`)
//! seeded with `seed_from_u64(seed)` and then moved to a fixed stream
//! number per purpose, so the instance, the random walk and eviction-victim
//! draws never share state. Repetition `i` of an experiment uses
//! `seed_base + i` as its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Instance = 0,
    RandomWalk = 1,
    Victim = 2,
}

pub fn stream_rng(seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream as u64);
    rng
}

/// Seed of repetition `rep` under the splitting rule above.
pub fn repetition_seed(seed_base: u64, rep: u64) -> u64 {
    seed_base.wrapping_add(rep)
}
