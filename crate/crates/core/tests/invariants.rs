//! Property tests for the structural invariants.

use oppenheim_core::bounds::telescoping_check;
use oppenheim_core::dist::DistributionSpec;
use oppenheim_core::engine::{conditional_digit, delta_kernel, sample_path, OppenheimSystem};
use oppenheim_core::extremes::{extreme_series, limit_cdf, LimitSpec};
use proptest::prelude::*;

fn families() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::uniform(),
        DistributionSpec::powertail(0.25).unwrap(),
        DistributionSpec::powertail(0.5).unwrap(),
        DistributionSpec::piecewise_linear(vec![[0.0, 0.0], [0.3, 0.6], [1.0, 1.0]]).unwrap(),
        DistributionSpec::table(vec![0.0, 0.1, 0.4, 0.8, 1.0]).unwrap(),
    ]
}

#[test]
fn cdf_monotone_on_ten_thousand_pairs() {
    let mut state = 0xABCDEFu64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / 9.007199254740992e15) * 3.0 - 1.0
    };
    for f in families() {
        for _ in 0..10_000 {
            let (a, b) = (next(), next());
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            assert!(f.cdf(lo) <= f.cdf(hi) + 1e-15, "{f:?} at {lo}, {hi}");
        }
    }
}

#[test]
fn slope_nonnegative_and_bounded_by_beta() {
    for f in families() {
        let beta = f.lipschitz_beta();
        for i in 0..200 {
            let a = 1.0 + i as f64 * 0.37;
            let s = f.slope(a).unwrap();
            assert!(s >= 0.0);
            if let Some(beta) = beta {
                assert!(s <= beta + 1e-12, "{f:?}: slope {s} exceeds beta {beta}");
            }
        }
    }
}

#[test]
fn telescoping_residual_on_thousand_random_vectors() {
    let mut state = 31u64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / 9.007199254740992e15
    };
    for trial in 0..1000 {
        let k = 1 + (trial % 8);
        let a: Vec<f64> = (0..k).map(|_| next()).collect();
        let b: Vec<f64> = (0..k).map(|_| next()).collect();
        let residual = telescoping_check(&a, &b).unwrap();
        assert!(residual <= 1e-12, "trial {trial}: residual {residual}");
    }
}

proptest! {
    #[test]
    fn digit_is_the_unique_bracketing_cell(
        w in 1e-6f64..=1.0,
        phi in 1u64..50,
        q in prop::sample::select(vec![0.0f64, 0.25, 0.5, 1.0, 2.0]),
    ) {
        let d = conditional_digit(phi, q, w).unwrap();
        let phi_f = phi as f64;
        prop_assert!(d.h_next >= phi);
        // right-closed bracket as evaluated in float arithmetic
        prop_assert!(w <= delta_kernel(phi_f, d.h_next as f64, q));
        prop_assert!(w > delta_kernel(phi_f, d.h_next as f64 + 1.0, q));
        prop_assert!(d.alpha_end < d.beta_end && d.beta_end <= 1.0);
    }

    #[test]
    fn extreme_series_envelope(ratios in prop::collection::vec(1.0f64..100.0, 1..200)) {
        let s = extreme_series(&ratios).unwrap();
        prop_assert_eq!(s.running_max[0], ratios[0]);
        prop_assert_eq!(s.running_min[0], ratios[0]);
        for i in 1..ratios.len() {
            prop_assert!(s.running_max[i] >= s.running_max[i - 1]);
            prop_assert!(s.running_min[i] <= s.running_min[i - 1]);
            prop_assert!(s.running_max[i] >= s.running_min[i]);
        }
    }

    #[test]
    fn limit_cdf_monotone_everywhere(
        xs in prop::collection::vec(-50.0f64..50.0, 2..40),
        ell in 0.1f64..10.0,
    ) {
        let mut sorted = xs;
        sorted.sort_by(f64::total_cmp);
        for spec in [
            LimitSpec::Frechet { ell0: ell },
            LimitSpec::Weibull { ell1: ell },
            LimitSpec::StepAtZero,
            LimitSpec::ConstOne,
            LimitSpec::StepPositive,
            LimitSpec::ConstZero,
        ] {
            for pair in sorted.windows(2) {
                prop_assert!(limit_cdf(&spec, pair[0]) <= limit_cdf(&spec, pair[1]) + 1e-15);
            }
        }
    }
}

#[test]
fn sampled_paths_satisfy_step_invariants() {
    for (seed, system) in [
        (3u64, OppenheimSystem::unit()),
        (5, OppenheimSystem::growth()),
    ] {
        let path = sample_path(&system, 200, seed).unwrap();
        assert_eq!(path.digits.len(), path.ratios.len() + 1);
        for (i, step) in path.steps.iter().enumerate() {
            assert!(step.ratio >= 1.0, "R_{i} >= 1");
            assert!(step.alpha_end < step.w && step.w <= step.beta_end);
            assert_eq!(step.ratio, 1.0 / step.beta_end);
            assert!(step.h_next.to_f64() >= 1.0);
        }
    }
}

#[test]
fn digit_never_below_phi_of_previous() {
    let growth = OppenheimSystem::growth();
    let path = sample_path(&growth, 100, 17).unwrap();
    for step in &path.steps {
        // growth rule: phi(h) = h, so digits are nondecreasing
        assert!(step.h_next.to_f64() >= step.h_prev.to_f64());
    }
}
