mod common;

use std::f64::consts::PI;

use common::*;
use torsion_core::closed_form::*;
use torsion_core::domains::{measure, unit_ball_volume};
use torsion_core::solver::solve_torsion_1d;
use torsion_core::{DomainSpec, PotentialSpec};

#[test]
fn ball_norms_by_direct_integration() {
    let (l1, sup) = ball_torsion_norms(1, 1.0);
    assert!((l1 - simpson(|x| (1.0 - x * x) / 2.0, -1.0, 1.0, 64)).abs() < 1e-14);
    assert_eq!(sup, 0.5);
    let (l1, sup) = ball_torsion_norms(2, 1.0);
    let polar = 2.0 * PI * simpson(|r| (1.0 - r * r) / 4.0 * r, 0.0, 1.0, 64);
    assert!((l1 - polar).abs() < 1e-14 && (l1 - PI / 8.0).abs() < 1e-15);
    assert_eq!(sup, 0.25);
    for m in 1..=8 {
        let (l1, sup) = ball_torsion_norms(m, 1.7);
        let ratio = l1 / (unit_ball_volume(m) * 1.7f64.powi(m as i32) * sup);
        assert!((ratio - 2.0 / (m as f64 + 2.0)).abs() < 1e-14);
        assert!(ratio >= 2.0 / (m as f64 * (m as f64 + 2.0)));
    }
}

#[test]
fn well_plateau_matches_fine_solve() {
    let (nu, eps) = (10.0, 0.1);
    let gamma = example1_coefficients(nu, eps).unwrap().gamma;
    let d = DomainSpec::interval(-1.0, 1.0).unwrap();
    let p = solve_torsion_1d(&d, &PotentialSpec::SymmetricWell { nu, eps }, 40_001).unwrap();
    assert!((p.values[20_000] - gamma).abs() < 1e-8, "{} vs {gamma}", p.values[20_000]);
    // matching with the boundary layer at x = 1 shifts gamma by -2 q / nu^2
    let q = (-nu * (1.0 - eps)).exp();
    let approx = eps * eps / 2.0 + eps / nu + (1.0 - 2.0 * q) / (nu * nu);
    assert!((gamma - approx).abs() < 1e-3 * q / (nu * nu));
}

#[test]
fn well_profile_shape() {
    for nu in [10.0, 40.0, 300.0] {
        let eps = 0.25;
        let xs: Vec<f64> = (0..=1000).map(|i| i as f64 / 1000.0).collect();
        let v: Vec<f64> = xs.iter().map(|&x| example1_torsion(nu, eps, x).unwrap()).collect();
        // at nu = 300 the outer profile is flat to roundoff away from the ends
        if nu < 100.0 {
            assert!(v.windows(2).all(|w| w[1] < w[0]));
        } else {
            assert!(v.windows(2).all(|w| w[1] <= w[0]));
        }
        for &x in &xs[..1000] {
            assert!(example1_torsion(nu, eps, x).unwrap() > 0.0);
            assert_eq!(example1_torsion(nu, eps, -x).unwrap(), example1_torsion(nu, eps, x).unwrap());
        }
        assert!(example1_torsion(nu, eps, 1.0).unwrap().abs() < 1e-12);
    }
}

#[test]
fn well_mass_asymptotics() {
    let c: f64 = 1.0;
    for nu in [1e3f64, 1e4, 1e5] {
        let eps = c * nu.powf(-2.0 / 3.0);
        let (inner, outer) = example1_mass_split(nu, eps).unwrap();
        let lead = c.powi(3) / (3.0 * nu * nu) + 1.0 / (nu * nu);
        assert!(((inner + outer) - lead).abs() < 5.0 * nu.powf(-7.0 / 3.0), "nu={nu}");
    }
    // the n^(-1/3) correction is still about 0.057 at nu = 1000
    let (inner, outer) = example1_mass_split(1e3, 1e-2).unwrap();
    assert!((inner / (inner + outer) - 0.25).abs() < 0.06);
}

#[test]
fn finite_mass_ratios_approach_their_limits() {
    let ratio = |n: f64| {
        let (inner, outer) = example1_mass_split(n, n.powf(-2.0 / 3.0)).unwrap();
        inner / (inner + outer)
    };
    assert!((ratio(1e4) - 0.25).abs() < (ratio(1e2) - 0.25).abs());
    for m in 1..=3 {
        let beta = example2_critical_beta(m, 1.0);
        let frac = |n: f64| {
            let (total, big) = example2_norms(m, n, 1.0, beta, 1.0).unwrap();
            big / total
        };
        assert!((frac(1e4) - 0.5).abs() <= (frac(1e2) - 0.5).abs());
    }
}

#[test]
fn union_norms_sum_ball_by_ball() {
    let (total, big) = example2_norms(1, 1.0, 1.0, 1.0, 1.0).unwrap();
    assert!((total - 4.0 / 3.0).abs() < 1e-15 && (big - 2.0 / 3.0).abs() < 1e-15);
    let (m, n, alpha, beta, c) = (3, 7usize, 1.0, 0.9, 0.8);
    let d = example2_domain(m, n, alpha, beta, c).unwrap();
    let DomainSpec::BallUnion { balls, .. } = &d else { panic!() };
    let sum: f64 = balls.iter().map(|b| ball_torsion_norms(m, b.radius).0).sum();
    let (total, _) = example2_norms(m, n as f64, alpha, beta, c).unwrap();
    assert!((sum - total).abs() < 1e-14 * total);
    let (_, vol) = example2_volumes(m, n as f64, alpha, beta, c).unwrap();
    assert!((measure(&d).unwrap() - vol).abs() < 1e-14 * vol);
}

#[test]
fn union_kappa_cases() {
    assert_eq!(example2_kappa(2, 1.0, 0.75, 1.0).unwrap(), 0.5);
    assert_eq!(example2_kappa(3, 1.0, 0.9, 1.0).unwrap(), 0.0);
    assert_eq!(example2_kappa(1, 1.0, 0.5, 1.0).unwrap(), 1.0);
    assert!(example2_norms(2, 10.0, 1.0, 0.4, 1.0).is_err());
}

#[test]
fn box_eigen_efficiency_by_sine_integration() {
    let (lambda, e) = box_first_eigen(&[2.0]).unwrap();
    assert!((lambda - PI * PI / 4.0).abs() < 1e-14);
    let l1 = simpson(|x| (PI * x / 2.0).sin(), 0.0, 2.0, 2000);
    assert!((e - l1 / 2.0).abs() < 1e-12);
    let (lambda, e) = box_first_eigen(&[1.0, 5.0]).unwrap();
    assert!((lambda - PI * PI * (1.0 + 1.0 / 25.0)).abs() < 1e-13);
    assert!((e - 4.0 / (PI * PI)).abs() < 1e-15);
}

#[test]
fn rectangle_torsion_against_double_series() {
    for (a, b) in [(1.0, 1.0), (1.0, 3.0), (1.0, 20.0)] {
        let (l1, sup) = box_torsion_norms(&[a, b]).unwrap();
        let kmax = (201.0 * b) as usize;
        let (sl1, ssup) = rectangle_torsion_norms(a, b, 401, kmax);
        // the truncated double series is itself only good to about 1e-8
        assert!((l1 - sl1).abs() < 1e-7 * sl1, "{a}x{b}: {l1} vs {sl1}");
        assert!((sup - ssup).abs() < 1e-6 * ssup, "{a}x{b}: {sup} vs {ssup}");
    }
}
