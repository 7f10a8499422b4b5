//! Rayon-backed replica executor.
//!
//! Replica seeds are derived from the index, and the merged quantities are
//! integer counts, so splitting the range across any number of workers
//! reproduces the serial result exactly.

use oppenheim_core::exec::{merge_counts, ReplicaExecutor};
use rayon::prelude::*;

pub struct RayonExecutor {
    pool: rayon::ThreadPool,
}

impl RayonExecutor {
    pub fn new(workers: usize) -> anyhow::Result<Self> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()?;
        Ok(RayonExecutor { pool })
    }
}

impl ReplicaExecutor for RayonExecutor {
    fn accumulate(&self, replicas: u64, job: &(dyn Fn(u64) -> Vec<u64> + Sync)) -> Vec<u64> {
        self.pool.install(|| {
            (0..replicas)
                .into_par_iter()
                .map(job)
                .reduce(Vec::new, |mut acc, part| {
                    merge_counts(&mut acc, &part);
                    acc
                })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use oppenheim_core::exec::SerialExecutor;

    #[test]
    fn rayon_matches_serial_for_any_worker_count() {
        let job = |r: u64| -> Vec<u64> {
            let x = oppenheim_core::rng::replica_seed(3, r);
            vec![x.is_multiple_of(7) as u64, x % 5]
        };
        let serial = SerialExecutor.accumulate(10_000, &job);
        for workers in [1, 2, 8] {
            let parallel = RayonExecutor::new(workers)
                .unwrap()
                .accumulate(10_000, &job);
            assert_eq!(serial, parallel, "workers = {workers}");
        }
    }
}
