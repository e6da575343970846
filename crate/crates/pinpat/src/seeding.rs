//! Deterministic RNG derivation.
//!
//! Experiments are reproducible across thread counts because every parallel
//! work item derives its own generator from `(seed, stream)` instead of
//! sharing one sequential stream.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step, used to decorrelate seed/stream pairs.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for work item `stream` of the experiment seeded by `seed`.
///
/// Distinct `(seed, stream)` pairs give independent-looking streams, and the
/// result depends on nothing else, so a pool of N workers and a single
/// worker produce identical per-item randomness.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mixed = splitmix64(seed ^ splitmix64(stream.wrapping_add(0xa076_1d64_78bd_642f)));
    ChaCha8Rng::seed_from_u64(mixed)
}
