//! Seeded random streams.
//!
//! Every randomized routine draws from ChaCha8 seeded with a 64-bit seed and a
//! stream selector, so independent consumers of one seed never share a
//! sequence. The identifier below is written into every run manifest.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub const RNG_ALGORITHM: &str = "chacha8 (rand_chacha 0.9, seed_from_u64 + set_stream)";

/// Stream selectors; one per consumer so their sequences never overlap.
pub mod stream {
    pub const SAMPLER: u64 = 1;
    pub const PATH_PAIRS: u64 = 2;
    pub const PIVOTS: u64 = 3;
    pub const ER: u64 = 4;
    pub const REWIRE: u64 = 5;
    pub const SCALE_FREE: u64 = 6;
    pub const REFERENCE_SUBSAMPLE: u64 = 7;
    pub const REPLICATE: u64 = 8;
}

pub fn seeded(seed: u64, stream: u64) -> Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derive a child seed for replicate `index`, so replicates are independent
/// of how many draws earlier replicates consumed.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
