//! Per-run seed derivation and the generator used by every solver.
//!
//! Sub-seed `k` of a base seed is the `(k + 1)`-th output of a SplitMix64
//! stream started at the base seed:
//!
//! ```text
//! z = base + (k + 1) * 0x9E3779B97F4A7C15          (wrapping)
//! z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//! z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//! z ^ (z >> 31)
//! ```
//!
//! Each run then owns a `ChaCha8Rng` built with `seed_from_u64(sub_seed)`.
//! Standard normal draws use the ziggurat sampler from `rand_distr`
//! (`StandardNormal`). Both are frozen: changing either changes every seeded
//! result.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SolverRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output `index + 1` of the stream seeded with `base`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    let mut z = base.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}
