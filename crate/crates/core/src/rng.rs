//! Seed derivation and uniform draws.
//!
//! Replica seeds come from a stateless SplitMix64 hash of
//! `(master_seed, replica_index)`, so replica `r` sees the same stream no
//! matter how replicas are distributed over workers. Streams are ChaCha8,
//! which has a stable, portable output sequence.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Splittable counter scheme: `seed_replica = hash64(master_seed, replica)`.
pub fn replica_seed(master_seed: u64, replica: u64) -> u64 {
    splitmix64(splitmix64(master_seed) ^ replica.wrapping_mul(GOLDEN_GAMMA))
}

/// Deterministic per-path random stream.
pub struct PathRng {
    inner: ChaCha8Rng,
}

impl PathRng {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn for_replica(master_seed: u64, replica: u64) -> Self {
        Self::from_seed(replica_seed(master_seed, replica))
    }

    /// Uniform draw on the half-open-from-the-left interval (0, 1].
    ///
    /// Uses the top 53 bits shifted to `{1, ..., 2^53} * 2^-53`, so 0 is
    /// excluded and 1 is attainable.
    pub fn next_u01(&mut self) -> f64 {
        let bits = self.inner.next_u64() >> 11;
        (bits + 1) as f64 * (1.0 / 9007199254740992.0)
    }
}
