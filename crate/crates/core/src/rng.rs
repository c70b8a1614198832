//! Seeded random number generation.
//!
//! Every stochastic routine in the crate takes an explicit 64-bit seed and
//! builds a [`SimRng`] from it, so that runs are bit-reproducible on a given
//! build regardless of thread scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by all simulations and graph generators.
pub type SimRng = ChaCha8Rng;

/// Creates a generator from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Sub-stream for graph generation.
pub const GRAPH_STREAM: u64 = 0;
/// Sub-stream for choosing the initially infected nodes.
pub const INIT_STREAM: u64 = 1;
/// Sub-stream for the event loop.
pub const RUN_STREAM: u64 = 2;

/// Derives an independent seed for a named sub-stream of `seed`.
///
/// Used to split one replicate seed into separate streams for graph
/// generation, initial-infected selection and the event loop.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    mix64(seed.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(mix64(stream)))
}
