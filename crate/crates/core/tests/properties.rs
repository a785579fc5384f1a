//! Cross-module property and oracle checks that are too heavy for unit tests:
//! independent eigensolve and Beta-function oracles, mesh-convergence
//! behavior, and solver monotonicity scans.

mod common;

use cknlab_core::*;
use common::{bessel_j32_first_zero, lambda1_fd_uniform, s_radial_beta};
use std::f64::consts::PI;

#[test]
fn eigen_mesh_convergence_is_one_sided_from_below() {
    // With the interpolated-|u|^p mass quadrature the discrete first
    // eigenvalue approaches the continuum value from below; the estimates
    // increase monotonically and the error contracts at second order.
    let params = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap();
    let mut values = Vec::new();
    for nodes in [1024usize, 2048, 4096] {
        let grid = RadialGrid::build(3, 1.0, nodes, cknlab_core::grid::default_ratio(nodes)).unwrap();
        values.push(first_eigenpair(&params, &grid, 1e-10, 100_000).lambda1);
    }
    let exact = PI * PI;
    for v in &values {
        assert!(*v < exact, "{values:?}");
    }
    assert!(values[0] < values[1] && values[1] < values[2], "{values:?}");
    let errs: Vec<f64> = values.iter().map(|v| exact - v).collect();
    assert!(errs[1] < errs[0] / 3.0 && errs[2] < errs[1] / 3.0, "{errs:?}");
}

#[test]
fn eigen_matches_independent_fd_oracle() {
    for (n, reference) in [(3u32, PI * PI), (5u32, bessel_j32_first_zero().powi(2))] {
        let params = validate_params(n, 2.0, 0.0, 0.0, 2.0).unwrap();
        let grid = RadialGrid::default_for(n, 1.0);
        let pair = first_eigenpair(&params, &grid, 1e-10, 100_000);
        let oracle = lambda1_fd_uniform(n, 1.0, 4096);
        assert!(
            (oracle / reference - 1.0).abs() < 1e-5,
            "oracle {oracle} vs analytic {reference}"
        );
        assert!(
            (pair.lambda1 / oracle - 1.0).abs() < 2e-4,
            "descent {} vs oracle {oracle}",
            pair.lambda1
        );
    }
}

#[test]
fn s_radial_matches_beta_closed_form_across_parameters() {
    // The whole-line quadrature against the Beta-function values of the two
    // extremal norms; spans a<0, fractional p, and b in the interior.
    for (n, p, a, b) in [
        (3u32, 2.0, 0.0, 0.0),
        (5, 2.0, 0.0, 0.0),
        (4, 2.5, 0.2, 0.5),
        (3, 1.5, -0.2, 0.3),
        (4, 3.0, 0.1, 0.6),
        (6, 2.0, -0.5, 0.0),
    ] {
        let params = validate_params(n, p, a, b, 1.0).unwrap();
        let s = s_radial(&params).unwrap();
        let oracle = s_radial_beta(n, p, a, b);
        assert!(
            (s / oracle - 1.0).abs() < 1e-7,
            "({n},{p},{a},{b}): {s} vs {oracle}"
        );
    }
}

#[test]
fn ground_state_quotient_is_monotone_in_lambda() {
    let params = validate_params(5, 2.0, 0.0, 0.0, 2.0).unwrap();
    let grid = RadialGrid::build(5, 1.0, 1024, cknlab_core::grid::default_ratio(1024)).unwrap();
    let lambda1 = first_eigenpair(&params, &grid, 1e-10, 100_000).lambda1;
    let mut quotients = Vec::new();
    for frac in [0.2, 0.5, 0.8] {
        let report = ground_state(&params, &grid, frac * lambda1, 1e-10, 60_000).unwrap();
        assert!(report.converged, "λ/λ1 = {frac}: {:?}", report.status);
        quotients.push(report.quotient);
    }
    assert!(
        quotients[0] > quotients[1] && quotients[1] > quotients[2],
        "{quotients:?}"
    );
}

#[test]
fn vanishing_lambda_triggers_concentration_status() {
    // Just above λ = 0 the gap collapses and the minimizing direction is a
    // bubble: the solver must report concentration, not a solution.
    let params = validate_params(5, 2.0, 0.0, 0.0, 2.0).unwrap();
    let grid = RadialGrid::build(5, 1.0, 1024, cknlab_core::grid::default_ratio(1024)).unwrap();
    let lambda1 = first_eigenpair(&params, &grid, 1e-10, 100_000).lambda1;
    let report = ground_state(&params, &grid, 2e-2 * lambda1, 1e-10, 60_000).unwrap();
    assert_eq!(report.status, SolveStatus::Concentration);
    assert!(!report.converged);
    assert!(report.concentration_fraction > 0.99);
}

#[test]
fn threshold_is_continuous_along_b() {
    // No jumps larger than 1% per 1e-3 step in b.
    let mut prev: Option<f64> = None;
    for k in 0..5 {
        let b = 1e-3 * k as f64;
        let params = validate_params(3, 2.0, 0.0, b, 2.0).unwrap();
        let t = threshold(&params).unwrap();
        if let Some(p) = prev {
            assert!((t / p - 1.0).abs() < 0.01, "jump at b = {b}: {p} -> {t}");
        }
        prev = Some(t);
    }
}

#[test]
fn probe_levels_track_the_best_constant() {
    // λ = 0 on the unit ball: the quotient floor sits at S_R (within 2%)
    // and tightens with refinement.
    let params = validate_params(5, 2.0, 0.0, 0.0, 2.0).unwrap();
    let grid = RadialGrid::build(5, 1.0, 2048, cknlab_core::grid::default_ratio(2048)).unwrap();
    let s = s_radial(&params).unwrap();
    let probe = nonexistence_probe(&params, &grid, 0.0, 2).unwrap();
    for level in &probe.levels {
        assert!(
            (level.best_quotient / s - 1.0).abs() < 0.02,
            "quotient {} vs S_R {s}",
            level.best_quotient
        );
        assert!(level.best_quotient >= s * (1.0 - 0.01));
    }
}

#[test]
fn cross_module_quotient_consistency_at_coarse_scale() {
    // rayleigh_ckn of a mid-radius hat exceeds S_R strictly (minimality).
    let params = validate_params(3, 2.0, 0.0, 0.0, 2.0).unwrap();
    let grid = RadialGrid::default_for(3, 1.0);
    let s = s_radial(&params).unwrap();
    let hat = RadialField::from_fn(grid, |r| (1.0 - (4.0 * (r - 0.5)).abs()).max(0.0)).unwrap();
    let q = rayleigh_ckn(&params, &hat).unwrap();
    assert!(q > s * 1.05, "hat quotient {q} vs S_R {s}");
}
