mod common;

use std::f64::consts::{LN_2, PI};

use common::bessel_first_zero;
use torsion_core::bounds::*;
use torsion_core::domains::Grid;
use torsion_core::obstacle::{l_of_theta, obstacle_solution};
use torsion_core::solver::Profile;
use torsion_core::{DomainSpec, PotentialSpec};

fn ball(m: usize) -> DomainSpec {
    DomainSpec::ball(m, 1.0).unwrap()
}

fn all_hold(r: &[BoundReport]) -> bool {
    r.iter().all(|b| b.applicable && b.satisfied && b.slack > 0.0)
}

#[test]
fn lemma1_on_the_disc_and_a_well() {
    let r = check_lemma1(&ball(2), &PotentialSpec::Zero, 4096).unwrap();
    let j = bessel_first_zero(0.0);
    assert!((r[0].lhs - j * j / 4.0).abs() < 1e-3);
    assert!((r[1].rhs - (4.0 + 6.0 * LN_2)).abs() < 1e-14);
    assert!(all_hold(&r));
    let d = DomainSpec::interval(-1.0, 1.0).unwrap();
    let r = check_lemma1(&d, &PotentialSpec::SymmetricWell { nu: 20.0, eps: 0.2 }, 4096).unwrap();
    assert!(all_hold(&r));
}

#[test]
fn constant_potential_sandwich() {
    let r = check_thm1_constant(&DomainSpec::interval(0.0, 1.0).unwrap(), 5.0, 4096).unwrap();
    assert_eq!(r.len(), 3);
    assert!(all_hold(&r));
    let r = check_thm1_constant(&ball(3), PI * PI, 4096).unwrap();
    assert!(all_hold(&r));
}

#[test]
fn bounded_potential_families() {
    let zero: Vec<_> = (1..=3).map(|n| (DomainSpec::interval(0.0, n as f64).unwrap(), PotentialSpec::Zero)).collect();
    assert!(all_hold(&check_thm1_eta(&zero, 0.0, 1024).unwrap()));
    let eta = 0.5;
    let fam: Vec<_> = (1..=4)
        .map(|n| {
            let l = n as f64;
            (DomainSpec::interval(0.0, l).unwrap(), PotentialSpec::Constant { c: PI * PI / (l * l) * eta / 2.0 })
        })
        .collect();
    assert!(all_hold(&check_thm1_eta(&fam, eta, 1024).unwrap()));
    let wells: Vec<_> = [2.0, 8.0, 32.0]
        .iter()
        .map(|&nu| (DomainSpec::interval(-1.0, 1.0).unwrap(), PotentialSpec::SymmetricWell { nu, eps: 0.2 }))
        .collect();
    let r = check_thm1_eta(&wells, 2.0, 1024).unwrap();
    let applicable: Vec<bool> = r.iter().step_by(2).map(|b| b.applicable).collect();
    assert_eq!(applicable, vec![true, false, false]);
}

#[test]
fn boundary_decay_bound() {
    let r = check_e50(&DomainSpec::interval(0.0, 1.0).unwrap(), 0.0, 1024).unwrap();
    assert!((r[1].rhs - (1.0 - 2f64.powf(2.5))).abs() < 1e-12);
    let r = check_e50(&DomainSpec::interval(0.0, 1.0).unwrap(), 1e4, 4096).unwrap();
    let exact = 1.0 - 2f64.powf(2.5) * (1.0 - (-25f64).exp()) / 25.0;
    assert!((r[1].rhs - exact).abs() < 1e-9);
    assert!(all_hold(&r));
    assert!(all_hold(&check_e50(&ball(2), 1e3, 4096).unwrap()));
    assert!(check_e50(&DomainSpec::boxed(vec![1.0, 1.0]).unwrap(), 1.0, 64).is_err());
}

#[test]
fn efficiency_against_eigen_efficiency() {
    assert!((remark0_constant(2).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    for m in [2, 3, 4, 6] {
        assert!(all_hold(&[check_remark0(&ball(m), 4096).unwrap()]), "m={m}");
    }
    let union = DomainSpec::ball_union(
        2,
        vec![
            torsion_core::domains::BallSpec { center: vec![0.0, 0.0], radius: 1.0 },
            torsion_core::domains::BallSpec { center: vec![3.0, 0.0], radius: 0.5 },
        ],
    )
    .unwrap();
    assert!(check_remark0(&union, 256).is_err());
}

#[test]
fn geometric_bounds() {
    let r = check_thm9(&ball(2), 4096).unwrap();
    assert!((r[0].rhs - 0.5).abs() < 1e-14 && (r[0].lhs - 0.25).abs() < 1e-14);
    assert!(all_hold(&r));
    let r = check_thm9(&DomainSpec::boxed(vec![1.0, 7.0]).unwrap(), 64).unwrap();
    assert!(all_hold(&r));
    assert!(r[2].lhs >= PI * PI);
}

fn ball_torsion_profile(m: usize, scale: f64) -> Profile {
    let grid = Grid::radial(m, 0.0, 1.0, 4096).unwrap();
    let values = grid.nodes.iter().map(|r| scale * (1.0 - r * r) / (2.0 * m as f64)).collect();
    Profile { grid, values, domain: ball(m) }
}

#[test]
fn raw_inequality_equality_case_and_scaling() {
    for m in 2..=6 {
        let r = check_raw_p22(&ball_torsion_profile(m, 1.0)).unwrap();
        assert!(r.applicable && r.slack.abs() < 1e-6, "m={m}: {r:?}");
        let s = check_raw_p22(&ball_torsion_profile(m, 7.0)).unwrap();
        // slack is already a relative margin, near zero here
        assert!((s.slack - r.slack).abs() < 1e-12);
    }
    let u = obstacle_solution(2, l_of_theta(2, 0.6).unwrap(), 4096).unwrap();
    let r = check_raw_p22(&u.profile).unwrap();
    assert!(r.applicable && r.slack > 0.0);
    let s = check_raw_p22(&u.profile.scaled(0.3)).unwrap();
    assert!((s.slack - r.slack).abs() < 1e-10 * r.slack);
}

#[test]
fn convex_efficiency_floor() {
    for m in 1..=6 {
        let r = check_e70(&ball(m), 64).unwrap();
        assert!((r.lhs - 2.0 / (m as f64 + 2.0)).abs() < 1e-14 && r.satisfied);
    }
    let r = check_e70(&DomainSpec::interval(0.0, 1.0).unwrap(), 64).unwrap();
    assert!(r.slack.abs() < 1e-14 && r.satisfied);
    let r = check_e70(&DomainSpec::boxed(vec![1.0, 20.0]).unwrap(), 64).unwrap();
    assert!(r.lhs >= 0.25 && r.satisfied);
    assert!(check_e70(&DomainSpec::annulus(2, 0.5, 1.0).unwrap(), 64).is_err());
}

#[test]
fn elongated_boxes() {
    let r = check_remark2(2, &[1.0, 10.0, 100.0]).unwrap();
    assert!(all_hold(&r));
    let at10 = r.iter().find(|b| b.name == "remark2_eigen" && b.context.ends_with("n=10")).unwrap();
    assert!((at10.rhs - (1.0 - 4.0 / (PI * PI)) * PI * PI * 10.0).abs() < 1e-9);
    let growth = r.iter().filter(|b| b.name.ends_with("growth")).count();
    assert_eq!(growth, 4);
    assert!(check_remark2(1, &[1.0]).is_err());
}

#[test]
fn eigenfunction_mass_check() {
    let d = DomainSpec::interval(-1.0, 1.0).unwrap();
    for nu in [5.0, 20.0] {
        let r = check_e68(&d, &PotentialSpec::SymmetricWell { nu, eps: 0.2 }, 4096).unwrap();
        assert!(all_hold(&[r]));
    }
}

#[test]
fn tolerance_override() {
    let r = check_e70(&DomainSpec::interval(0.0, 1.0).unwrap(), 64).unwrap();
    assert!(r.clone().with_tolerance(0.0).satisfied);
    assert!(!r.with_tolerance(-1e-3).satisfied);
}
