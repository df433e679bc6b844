//! Seeded random streams.
//!
//! Every generator draws from [`ChaCha20Rng`] (portable, stable output across
//! platforms) seeded with a 64-bit value via `seed_from_u64`. Gaussian
//! variates come from `rand_distr::StandardNormal` (ziggurat), sampled in
//! `f64` and then cast to the target scalar.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

pub type StreamRng = ChaCha20Rng;

pub fn stream(seed: u64) -> StreamRng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer. A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for a named sub-stream of `seed` (matrix, signal, noise, ...).
pub fn substream(seed: u64, tag: u64) -> u64 {
    mix64(mix64(seed) ^ mix64(tag.wrapping_add(0xA076_1D64_78BD_642F)))
}

/// Per-trial seed of a sweep cell.
///
/// `(k, trial)` is packed into one word before mixing, so for a fixed master
/// seed the map is injective as long as both fit in 32 bits.
pub fn trial_seed(master: u64, k: usize, trial: usize) -> u64 {
    debug_assert!(k <= u32::MAX as usize && trial <= u32::MAX as usize);
    let packed = ((k as u64) << 32) | (trial as u64 & 0xFFFF_FFFF);
    mix64(mix64(packed) ^ master)
}

pub(crate) const TAG_MATRIX: u64 = 1;
pub(crate) const TAG_SIGNAL: u64 = 2;
pub(crate) const TAG_NOISE: u64 = 3;
