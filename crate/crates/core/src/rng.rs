//! Counter-based seed derivation.
//!
//! Every random quantity is drawn from a ChaCha stream whose seed is a hash of
//! the base seed and a tuple of integer labels (trial, frequency, lattice
//! mode, ...). Streams therefore do not depend on evaluation order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `labels` into `base`, order-sensitively.
pub fn derive_seed(base: u64, labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(splitmix64(base), |h, &l| splitmix64(h ^ splitmix64(l)))
}

/// Seed for lattice mode `modes` under `seed`.
pub fn mode_seed(seed: u64, modes: &[i64]) -> u64 {
    let labels: Vec<u64> = modes.iter().map(|&k| k as u64).collect();
    derive_seed(seed, &labels)
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
