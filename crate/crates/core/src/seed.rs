//! Seed derivation shared by the samplers, learners and the experiment
//! harness.
//!
//! Every random stream in the crate is a ChaCha8 generator seeded with
//! `derive(parent, stream)`, where
//!
//! ```text
//! derive(s, k) = mix(s + GAMMA * (k + 1))      (wrapping u64 arithmetic)
//! mix(z)       = splitmix64 finalizer of z
//! GAMMA        = 0x9E37_79B9_7F4A_7C15
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Golden-ratio increment of splitmix64.
pub const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Stream index of the component-choice stream when sampling a mixture.
pub const MIXTURE_CHOICE_STREAM: u64 = u64::MAX;

/// The splitmix64 output finalizer.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the seed of sub-stream `stream` from `parent`.
pub fn derive(parent: u64, stream: u64) -> u64 {
    mix(parent.wrapping_add(GAMMA.wrapping_mul(stream.wrapping_add(1))))
}

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
