//! Replica execution.
//!
//! Every Monte Carlo experiment reduces integer count vectors over replica
//! indices. Addition of `u64` counts is exact, associative and commutative,
//! so any executor that merges per-replica counts in any order produces the
//! same result as the serial fold. A rayon-backed executor lives in the CLI
//! crate; this module ships the serial one.

use alloc::vec::Vec;

/// Runs `job(replica)` for `replica` in `0..replicas` and merges the
/// returned count vectors elementwise.
///
/// `job` must be a pure function of the replica index (seeds are derived
/// via [`crate::rng::replica_seed`]), and must return vectors of one fixed
/// length. Implementations may split the index range arbitrarily.
pub trait ReplicaExecutor: Sync {
    fn accumulate(&self, replicas: u64, job: &(dyn Fn(u64) -> Vec<u64> + Sync)) -> Vec<u64>;
}

/// Elementwise add; the accumulator adopts the job's length on first use.
pub fn merge_counts(acc: &mut Vec<u64>, part: &[u64]) {
    if acc.is_empty() {
        acc.extend_from_slice(part);
        return;
    }
    debug_assert_eq!(acc.len(), part.len());
    for (slot, add) in acc.iter_mut().zip(part) {
        *slot += add;
    }
}

/// Single-threaded reference executor.
pub struct SerialExecutor;

impl ReplicaExecutor for SerialExecutor {
    fn accumulate(&self, replicas: u64, job: &(dyn Fn(u64) -> Vec<u64> + Sync)) -> Vec<u64> {
        let mut acc = Vec::new();
        for replica in 0..replicas {
            merge_counts(&mut acc, &job(replica));
        }
        acc
    }
}
