//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measured evidence. Tolerances are pinned here, in code.
//!
//! Run with `cargo test -p oppenheim-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::fs;
use std::process::Command;
use std::time::Instant;

use oppenheim_cli::battery::{lemma1_battery, thm6_battery};
use oppenheim_cli::parallel::RayonExecutor;
use oppenheim_core::bounds::{
    blocking_gap_experiment, blocking_layout, mixing_gap_experiment, telescoping_check,
    verify_lemma1, verify_thm6, Verdict,
};
use oppenheim_core::dist::{default_h_grid, default_probe_sequence, DistributionSpec};
use oppenheim_core::engine::{luroth_max_cdf, luroth_pmf, sample_luroth_iid, SystemKind};
use oppenheim_core::exec::SerialExecutor;
use oppenheim_core::extremes::{max_limit_experiment, Normalization};

fn binomial_se(p: f64, n: f64) -> f64 {
    (p * (1.0 - p) / n).sqrt()
}

#[test]
fn criterion_1_luroth_marginal_law() {
    let started = Instant::now();
    let n = 1_000_000u64;
    let draws = sample_luroth_iid(n, 20260801);
    let mut counts = [0u64; 22];
    for r in &draws {
        let h = *r as usize;
        if h < counts.len() {
            counts[h] += 1;
        }
    }
    for h in 2..=20u64 {
        let expected = luroth_pmf(h);
        let observed = counts[h as usize] as f64 / n as f64;
        let tol = 4.0 * binomial_se(expected, n as f64);
        assert!(
            (observed - expected).abs() <= tol,
            "h = {h}: |{observed} - {expected}| > {tol}"
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "runtime {elapsed:.2}s exceeds 10s");
    println!(
        "criterion 1 (luroth marginal law, h = 2..20 within 4 se at 1e6 draws): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_2_frechet_limit() {
    let started = Instant::now();

    // exact check without MC: P(M_1000 <= 1000) = 0.999^1000
    let exact = luroth_max_cdf(1000.0, 1000);
    assert!(
        (exact - 0.36769542477096404).abs() <= 1e-12,
        "exact finite-n value drifted: {exact}"
    );

    let grid = [0.5, 1.0, 2.0];
    let report = max_limit_experiment(
        &SystemKind::LurothIid,
        1000,
        10_000,
        &Normalization::FrechetScale { ell0: Some(1.0) },
        &grid,
        20260802,
        &SerialExecutor,
    )
    .unwrap();
    let oracle = report
        .finite_n_oracle
        .as_ref()
        .expect("luroth has a closed form");
    for i in 0..grid.len() {
        let emp = report.empirical[i].p;
        let se = report.empirical[i].se;
        assert!(
            (emp - oracle[i]).abs() <= 3.0 * se,
            "x = {}: |{emp} - {}| > 3 * {se}",
            grid[i],
            oracle[i]
        );
        assert!(
            (oracle[i] - report.theoretical[i]).abs() <= 0.01,
            "x = {}: finite-n {} vs limit {}",
            grid[i],
            oracle[i],
            report.theoretical[i]
        );
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.2}s exceeds 60s");
    println!(
        "criterion 2 (frechet limit: MC within 3 se of the finite-n oracle, oracle within 0.01 of exp(-1/x), exact 0.999^1000 check): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_3_thm6_bands() {
    let started = Instant::now();
    for preset in ["unit", "growth"] {
        let kind = SystemKind::preset(preset).unwrap();
        for (variant, a, b, n) in thm6_battery() {
            let check =
                verify_thm6(&kind, variant, a, b, n, 100_000, 20260803, &SerialExecutor).unwrap();
            assert_eq!(
                check.verdict,
                Verdict::WithinBand,
                "{preset} {variant:?}: |{} - {}| vs {} + 3*{}",
                check.p_hat,
                check.band.center.unwrap(),
                check.band.half_width,
                check.se
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed < 60.0, "runtime {elapsed:.2}s exceeds 60s");
    println!(
        "criterion 3 (band inequalities on unit and growth, 3-variant battery at 1e5 replicas): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_4_lemma1_sandwich() {
    let started = Instant::now();
    let battery = lemma1_battery();
    assert_eq!(battery.len(), 20);
    for preset in ["unit", "growth"] {
        let kind = SystemKind::preset(preset).unwrap();
        for (event_idx, (xs, mults)) in battery.iter().enumerate() {
            let check =
                verify_lemma1(&kind, xs, mults, 100_000, 20260804, &SerialExecutor).unwrap();
            assert_eq!(
                check.verdict,
                Verdict::WithinBand,
                "{preset} event {event_idx} (xs = {xs:?}, q = {mults:?}): p_hat = {}, band = [{}, {}], se = {}",
                check.p_hat,
                check.band.center.unwrap() - check.band.half_width,
                check.band.center.unwrap() + check.band.half_width,
                check.se
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 4 (product sandwich: 20-event battery on unit and growth at 1e5 replicas): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_5_delta_mixing() {
    let started = Instant::now();
    let i_indices = [1u64, 2];
    let j_indices = [8u64, 9, 10];
    for preset in ["unit", "growth"] {
        let kind = SystemKind::preset(preset).unwrap();
        for u in [5.0, 10.0, 20.0] {
            let est = mixing_gap_experiment(
                &kind,
                &i_indices,
                &j_indices,
                u,
                None,
                100_000,
                20260805,
                &SerialExecutor,
            )
            .unwrap();
            // bound must be exactly the displayed form with beta = 1, p = 2, q = 3
            let expected_bound = 2.0 * (2.0 + 3.0) / (u * u) + 2.0 * 3.0 / (u * u * u * u);
            assert!(
                (est.theoretical_bound - expected_bound).abs() <= 1e-12,
                "{preset} u = {u}: bound {}",
                est.theoretical_bound
            );
            assert!(
                est.empirical_gap.abs() <= expected_bound + 3.0 * est.standard_error,
                "{preset} u = {u}: |{}| > {} + 3*{}",
                est.empirical_gap,
                expected_bound,
                est.standard_error
            );
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 5 (distributional mixing bound at u in {{5, 10, 20}}, p = 2, q = 3, both presets): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_6_blocking_gap() {
    let started = Instant::now();

    // iid case with n = k n' exactly: the gap is zero in law
    let unit = SystemKind::preset("unit").unwrap();
    let layout = blocking_layout(8, 2, 3).unwrap();
    assert_eq!(layout.n_prime * layout.k, layout.n);
    let est = blocking_gap_experiment(
        &unit,
        &layout,
        1.0,
        None,
        100_000,
        20260806,
        &SerialExecutor,
    )
    .unwrap();
    assert!(
        est.empirical_gap.abs() <= 3.0 * est.standard_error,
        "iid gap |{}| > 3 * {}",
        est.empirical_gap,
        est.standard_error
    );

    // dependent chain against the assembled bound
    let growth = SystemKind::preset("growth").unwrap();
    let layout = blocking_layout(60, 3, 5).unwrap();
    let est = blocking_gap_experiment(
        &growth,
        &layout,
        0.45,
        None,
        100_000,
        20260807,
        &SerialExecutor,
    )
    .unwrap();
    assert_eq!(
        est.verdict,
        Verdict::WithinBand,
        "growth blocking gap {} vs bound {} (se {})",
        est.empirical_gap,
        est.theoretical_bound,
        est.standard_error
    );
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 6 (blocking gap: iid power identity within 3 se, growth within the assembled bound): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_7_degenerate_minima() {
    let started = Instant::now();
    let grid = [-1.0];

    // p = 1: threshold 1 - 1/n; ratios are >= 2 a.s., so certainty, exactly
    let report = max_limit_experiment(
        &SystemKind::LurothIid,
        1000,
        10_000,
        &Normalization::InverseMin { p: 1 },
        &grid,
        20260808,
        &SerialExecutor,
    )
    .unwrap();
    assert_eq!(
        report.empirical[0].p, 1.0,
        "p = 1 probability must be exactly 1"
    );
    assert_eq!(report.empirical[0].se, 0.0);

    // p = 2: threshold 1/2 - 1/n excludes the atom at 1/2; mass (1/2)^n
    let report = max_limit_experiment(
        &SystemKind::LurothIid,
        1000,
        10_000,
        &Normalization::InverseMin { p: 2 },
        &grid,
        20260809,
        &SerialExecutor,
    )
    .unwrap();
    assert_eq!(
        report.empirical[0].p, 0.0,
        "p = 2 probability must vanish at large n"
    );
    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 7 (degenerate minima: inverse-min probability exactly 1 at p = 1, exactly 0 at p = 2): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_8_identities_and_checkers() {
    let started = Instant::now();

    // telescoping identity on 1000 random vectors
    let mut state = 0xFEEDu64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / 9.007199254740992e15
    };
    for trial in 0..1000 {
        let k = 1 + trial % 8;
        let a: Vec<f64> = (0..k).map(|_| next()).collect();
        let b: Vec<f64> = (0..k).map(|_| next()).collect();
        let residual = telescoping_check(&a, &b).unwrap();
        assert!(residual <= 1e-12, "trial {trial}: residual {residual}");
    }

    // tail-slope recovery on the powertail family
    for alpha in [0.25, 0.5, 0.75] {
        let f = DistributionSpec::powertail(alpha).unwrap();
        let tails = f.estimate_tail_limits(&default_probe_sequence()).unwrap();
        let est = tails.ell0_plus.finite().expect("finite lower-tail slope");
        assert!(
            (est - alpha).abs() <= 1e-3,
            "alpha = {alpha}: estimate {est}"
        );
    }

    // condition checks: powertail(0.5) passes the density condition,
    // uniform fails the log condition
    let pt = DistributionSpec::powertail(0.5).unwrap();
    let rep = pt
        .check_mda_conditions(&default_h_grid(), &default_probe_sequence(), 1.0)
        .unwrap();
    assert!(rep.eq10.applicable && rep.eq10.pass);
    let uni = DistributionSpec::uniform();
    let rep = uni
        .check_mda_conditions(&default_h_grid(), &default_probe_sequence(), 1.0)
        .unwrap();
    assert!(!rep.eq8.pass);

    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 8 (telescoping residual <= 1e-12, tail slope within 1e-3, condition checkers): PASS ({elapsed:.2}s)"
    );
}

#[test]
fn criterion_9_determinism() {
    let started = Instant::now();

    // byte-identical reruns of the binary with one config
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.toml");
    fs::write(
        &config_path,
        r#"
experiment = "bounds"
master_seed = 7
replicas = 2000

[system]
preset = "unit"

[params]
battery = "thm6"
"#,
    )
    .unwrap();
    let out = dir.path().join("report.json");
    let mut captured = Vec::new();
    for _ in 0..2 {
        let status = Command::new(env!("CARGO_BIN_EXE_oppenheim"))
            .args([
                "bounds",
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success());
        captured.push(fs::read(&out).unwrap());
    }
    assert_eq!(captured[0], captured[1], "rerun bytes differ");

    // worker-count invariance: 1, 2 and 8 workers reproduce the serial run
    let grid = [0.5, 1.0, 2.0];
    let serial = max_limit_experiment(
        &SystemKind::LurothIid,
        200,
        4000,
        &Normalization::FrechetScale { ell0: Some(1.0) },
        &grid,
        20260810,
        &SerialExecutor,
    )
    .unwrap();
    for workers in [1usize, 2, 8] {
        let exec = RayonExecutor::new(workers).unwrap();
        let parallel = max_limit_experiment(
            &SystemKind::LurothIid,
            200,
            4000,
            &Normalization::FrechetScale { ell0: Some(1.0) },
            &grid,
            20260810,
            &exec,
        )
        .unwrap();
        assert_eq!(serial, parallel, "workers = {workers}");
    }

    let elapsed = started.elapsed().as_secs_f64();
    println!(
        "criterion 9 (byte-identical reruns; results invariant across 1, 2, 8 workers): PASS ({elapsed:.2}s)"
    );
}
