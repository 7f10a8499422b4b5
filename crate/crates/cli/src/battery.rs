//! Fixed verification batteries used by the `bounds` experiment and the
//! acceptance suite.

use oppenheim_core::bounds::Thm6Variant;

/// Twenty joint tail events as (per-block thresholds, multiplicities).
/// Thresholds stay small so every event keeps enough mass for a 1e5-replica
/// estimate to be informative.
pub fn lemma1_battery() -> Vec<(Vec<f64>, Vec<u64>)> {
    vec![
        (vec![1.0], vec![1]),
        (vec![1.5], vec![1]),
        (vec![2.0], vec![1]),
        (vec![2.5], vec![1]),
        (vec![3.0], vec![1]),
        (vec![4.0], vec![1]),
        (vec![1.0], vec![2]),
        (vec![2.0], vec![2]),
        (vec![2.0], vec![3]),
        (vec![3.0], vec![2]),
        (vec![1.0, 2.0], vec![1, 1]),
        (vec![1.0, 3.0], vec![1, 1]),
        (vec![2.0, 2.0], vec![1, 1]),
        (vec![2.0, 4.0], vec![1, 1]),
        (vec![1.5, 2.5], vec![1, 1]),
        (vec![1.0, 2.0], vec![2, 1]),
        (vec![1.0, 2.0], vec![1, 2]),
        (vec![2.0, 3.0], vec![1, 1]),
        (vec![1.0, 2.0, 3.0], vec![1, 1, 1]),
        (vec![1.5, 2.0, 4.0], vec![1, 1, 1]),
    ]
}

/// The band-inequality battery: (variant, a, b, n).
pub fn thm6_battery() -> Vec<(Thm6Variant, Option<f64>, Option<f64>, u64)> {
    vec![
        (Thm6Variant::III, Some(2.0), None, 3),
        (Thm6Variant::II, None, Some(2.0), 3),
        (Thm6Variant::I, Some(2.0), Some(4.0), 2),
    ]
}
