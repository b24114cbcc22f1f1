//! Seed splitting. A root seed and an index map to a child seed through one
//! SplitMix64 step, so trial `i` of a run seeded `s` always sees
//! `derive_seed(s, i)` no matter how trials are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

pub fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `splitmix64(root + (index + 1)·γ)` with `γ = 0x9E3779B97F4A7C15`.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    splitmix64(root.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
