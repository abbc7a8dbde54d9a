//! Reproducible random streams.
//!
//! Every simulation run draws from its own `ChaCha8Rng`, seeded with a 64-bit
//! value mixed from the master seed and the run's coordinates through the
//! SplitMix64 finalizer. Streams depend only on those coordinates, never on
//! scheduling. The generator and mixing function are part of the output
//! contract: changing either changes every reported number.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of coordinates into one seed.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(splitmix64(master), |acc, &c| splitmix64(acc ^ splitmix64(c)))
}

pub fn rng_for(master: u64, coords: &[u64]) -> SimRng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, coords))
}
