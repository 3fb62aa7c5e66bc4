//! Deterministic seed derivation.
//!
//! Every random stream in a run is seeded from the master seed and a path
//! of integer labels. A child seed is obtained by folding each label into a
//! SplitMix64 state:
//!
//! ```text
//! s = master
//! for label in path: s = mix(s ^ mix(label + 0x9E3779B97F4A7C15))
//! ```
//!
//! where `mix` is the SplitMix64 output function. Streams are ChaCha8.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream identified by `path` under `master`.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(mix(master.wrapping_add(GOLDEN)), |s, &label| {
            mix(s ^ mix(label.wrapping_add(GOLDEN)))
        })
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Labels for the top-level streams of an experiment.
pub mod stream {
    pub const NETWORK: u64 = 1;
    pub const COVARIATES: u64 = 2;
    pub const OUTCOMES: u64 = 3;
    pub const SAMPLING: u64 = 4;
    pub const ESTIMATION: u64 = 5;
    pub const BOOTSTRAP: u64 = 6;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_is_stable_and_path_sensitive() {
        assert_eq!(derive_seed(7, &[1, 2]), derive_seed(7, &[1, 2]));
        assert_ne!(derive_seed(7, &[1, 2]), derive_seed(7, &[2, 1]));
        assert_ne!(derive_seed(7, &[1]), derive_seed(8, &[1]));
        assert_ne!(derive_seed(7, &[]), derive_seed(7, &[0]));
    }
}
