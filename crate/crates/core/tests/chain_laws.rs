//! Statistical checks of the sampled laws against their closed-form
//! marginals, and merge-order invariance of the replica executor.

use oppenheim_core::engine::{
    luroth_pmf, sample_luroth_iid, sample_ratios, unit_pmf, OppenheimSystem, SystemKind,
};
use oppenheim_core::exec::{merge_counts, ReplicaExecutor, SerialExecutor};

fn se(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).sqrt()
}

#[test]
fn unit_chain_marginal_matches_telescoped_mass() {
    // P(B = h) = F(1/h) - F(1/(h+1)) = 1/(h(h+1)); one long path, digits iid
    let n = 1_000_000u64;
    let kind = SystemKind::Chain(OppenheimSystem::unit());
    let ratios = sample_ratios(&kind, n, 2024).unwrap();
    let mut counts = [0u64; 22];
    for r in &ratios {
        let h = *r as usize;
        if h < counts.len() {
            counts[h] += 1;
        }
    }
    for h in 1..=20u64 {
        let expected = unit_pmf(h);
        let observed = counts[h as usize] as f64 / n as f64;
        let tol = 4.0 * se(expected, n as f64);
        assert!(
            (observed - expected).abs() <= tol,
            "h = {h}: observed {observed}, expected {expected}, tol {tol}"
        );
    }
}

#[test]
fn luroth_is_unit_ratio_shifted_by_one() {
    // two-sample comparison of the Lüroth pmf against unit-chain R + 1
    let n = 1_000_000u64;
    let luroth = sample_luroth_iid(n, 41);
    let unit = sample_ratios(&SystemKind::Chain(OppenheimSystem::unit()), n, 42).unwrap();
    let tally = |vals: &[f64], shift: f64| {
        let mut counts = vec![0u64; 23];
        for v in vals {
            let h = (*v + shift) as usize;
            if h < counts.len() {
                counts[h] += 1;
            }
        }
        counts
    };
    let counts_l = tally(&luroth, 0.0);
    let counts_u = tally(&unit, 1.0);
    for h in 2..=20usize {
        let p_l = counts_l[h] as f64 / n as f64;
        let p_u = counts_u[h] as f64 / n as f64;
        let expected = luroth_pmf(h as u64);
        let tol = 4.0 * (se(expected, n as f64) * 2.0f64.sqrt());
        assert!(
            (p_l - p_u).abs() <= tol,
            "h = {h}: luroth {p_l}, shifted unit {p_u}"
        );
    }
}

/// Executor that splits the replica range into fixed-size chunks and merges
/// chunk results in reverse order; counts must not care.
struct ChunkedExecutor {
    chunk: u64,
}

impl ReplicaExecutor for ChunkedExecutor {
    fn accumulate(&self, replicas: u64, job: &(dyn Fn(u64) -> Vec<u64> + Sync)) -> Vec<u64> {
        let mut partials = Vec::new();
        let mut start = 0;
        while start < replicas {
            let end = (start + self.chunk).min(replicas);
            let mut acc = Vec::new();
            for r in start..end {
                merge_counts(&mut acc, &job(r));
            }
            partials.push(acc);
            start = end;
        }
        let mut total = Vec::new();
        for part in partials.iter().rev() {
            merge_counts(&mut total, part);
        }
        total
    }
}

#[test]
fn executor_merge_order_is_irrelevant() {
    let kind = SystemKind::Chain(OppenheimSystem::growth());
    let job = |replica: u64| -> Vec<u64> {
        let ratios =
            sample_ratios(&kind, 20, oppenheim_core::rng::replica_seed(7, replica)).unwrap();
        let m = ratios.iter().cloned().fold(f64::MIN, f64::max);
        vec![(m > 5.0) as u64, (m > 50.0) as u64, 1]
    };
    let serial = SerialExecutor.accumulate(500, &job);
    for chunk in [1, 7, 64, 500] {
        let chunked = ChunkedExecutor { chunk }.accumulate(500, &job);
        assert_eq!(serial, chunked, "chunk = {chunk}");
    }
}

#[test]
fn ratio_sampling_is_deterministic_per_seed() {
    let kind = SystemKind::LurothIid;
    assert_eq!(
        sample_ratios(&kind, 1000, 5).unwrap(),
        sample_ratios(&kind, 1000, 5).unwrap()
    );
    let chain = SystemKind::Chain(OppenheimSystem::growth());
    assert_eq!(
        sample_ratios(&chain, 50, 5).unwrap(),
        sample_ratios(&chain, 50, 5).unwrap()
    );
}
