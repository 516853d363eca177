//! Seeded random streams.
//!
//! Every random draw in the crate comes from ChaCha8 (RFC 7539 block function,
//! 8 rounds) seeded through `seed_from_u64`, so results are identical across
//! platforms. Independent consumers of one seed are separated by stream id.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

/// Stream ids used to split a single seed into independent sequences.
pub mod stream {
    pub const GAME: u64 = 0;
    pub const INIT: u64 = 1;
    pub const BATCH: u64 = 2;
    pub const EVAL: u64 = 3;
    pub const DIST_SELECT: u64 = 4;
}

pub fn seeded(seed: u64, stream: u64) -> SolverRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
