//! Exact formulas: ball torsion, the symmetric-well family, unions of balls
//! and boxes.

use std::f64::consts::PI;

use serde::Serialize;

use crate::domains::{unit_ball_volume, BallSpec, DomainSpec};
use crate::error::{param, Error, Result};

/// Tolerance used to decide that an exponent sits exactly at a critical value.
const CRITICAL_TOL: f64 = 1e-12;

/// `omega_m / (m (m + 2))`: L1 norm of the torsion function of the unit ball.
pub fn torsional_rigidity_constant(m: usize) -> f64 {
    let mf = m as f64;
    unit_ball_volume(m) / (mf * (mf + 2.0))
}

/// Torsion function of the ball of radius `R` at radius `r`.
pub fn ball_torsion(m: usize, radius: f64, r: f64) -> Result<f64> {
    if m == 0 || !(radius > 0.0) {
        return Err(param("ball torsion needs m >= 1 and R > 0"));
    }
    if !(0.0..=radius).contains(&r) {
        return Err(param(format!("radius {r} outside [0, {radius}]")));
    }
    Ok((radius * radius - r * r) / (2.0 * m as f64))
}

/// `(||v||_1, ||v||_inf)` for the torsion function of a ball.
pub fn ball_torsion_norms(m: usize, radius: f64) -> (f64, f64) {
    (
        torsional_rigidity_constant(m) * radius.powi(m as i32 + 2),
        radius * radius / (2.0 * m as f64),
    )
}

/// Coefficients of the torsion function for the symmetric well on (-1, 1).
///
/// The raw `alpha` and `beta` under- or overflow for large `nu`; evaluation
/// goes through the scaled forms `alpha e^nu` and `beta e^(-nu eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Example1Coefficients {
    pub nu: f64,
    pub eps: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub alpha_scaled: f64,
    pub beta_scaled: f64,
}

fn check_well(nu: f64, eps: f64) -> Result<()> {
    if !(nu.is_finite() && nu > 1.0) {
        return Err(param(format!("well depth needs nu > 1, got {nu}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param(format!("well width needs 0 < eps < 1, got {eps}")));
    }
    Ok(())
}

pub fn example1_coefficients(nu: f64, eps: f64) -> Result<Example1Coefficients> {
    check_well(nu, eps)?;
    let q = (-nu * (1.0 - eps)).exp();
    let d = 1.0 + q * q;
    let nu2 = nu * nu;
    let alpha_scaled = (1.0 + nu * eps * q) / (nu2 * d);
    let beta_scaled = (eps / nu - q / nu2) / d;
    let gamma = eps * eps / 2.0 + eps / nu + 1.0 / nu2 - 2.0 * q * (1.0 + nu * eps * q) / (nu2 * d);
    Ok(Example1Coefficients {
        nu,
        eps,
        alpha: alpha_scaled * (-nu).exp(),
        beta: beta_scaled * (nu * eps).exp(),
        gamma,
        alpha_scaled,
        beta_scaled,
    })
}

impl Example1Coefficients {
    /// Inner piece `-x^2/2 + gamma`.
    pub fn v1(&self, x: f64) -> f64 {
        -0.5 * x * x + self.gamma
    }

    pub fn v1_prime(&self, x: f64) -> f64 {
        -x
    }

    /// Outer piece `1/nu^2 - alpha e^(nu x) + beta e^(-nu x)`.
    pub fn v2(&self, x: f64) -> f64 {
        let nu = self.nu;
        1.0 / (nu * nu) - self.alpha_scaled * (nu * (x - 1.0)).exp()
            + self.beta_scaled * (-nu * (x - self.eps)).exp()
    }

    pub fn v2_prime(&self, x: f64) -> f64 {
        let nu = self.nu;
        -nu * self.alpha_scaled * (nu * (x - 1.0)).exp()
            - nu * self.beta_scaled * (-nu * (x - self.eps)).exp()
    }

    /// Residuals of the three defining conditions: continuity and C1 at eps,
    /// zero at 1.
    pub fn residuals(&self) -> [f64; 3] {
        [
            self.v1(self.eps) - self.v2(self.eps),
            self.v1_prime(self.eps) - self.v2_prime(self.eps),
            self.v2(1.0),
        ]
    }

    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax <= self.eps {
            self.v1(ax)
        } else {
            self.v2(ax)
        }
    }
}

/// Torsion function of the symmetric well on (-1, 1).
pub fn example1_torsion(nu: f64, eps: f64, x: f64) -> Result<f64> {
    if x.abs() > 1.0 {
        return Err(Error::OutsideDomain(vec![x]));
    }
    Ok(example1_coefficients(nu, eps)?.eval(x))
}

/// Integrals of the torsion function over `[0, eps]` and `[eps, 1]`.
pub fn example1_mass_split(nu: f64, eps: f64) -> Result<(f64, f64)> {
    check_well(nu, eps)?;
    let q = (-nu * (1.0 - eps)).exp();
    let d = 1.0 + q * q;
    let nu2 = nu * nu;
    let inner = eps.powi(3) / 3.0 + eps * eps / nu + eps / nu2
        - 2.0 * eps * q * (1.0 + nu * eps * q) / (nu2 * d);
    let outer = 1.0 / nu2 - 2.0 * eps * q / (nu2 * d) - (1.0 - q * q) / (nu2 * nu * d);
    Ok((inner, outer))
}

/// Limiting mass fraction captured by `(-eps_n, eps_n)` with `eps_n = c n^(-a)`.
pub fn example1_kappa(alpha_exp: f64, c: f64) -> Result<f64> {
    if !(alpha_exp > 0.0 && alpha_exp < 1.0) || !(c > 0.0) {
        return Err(param("need 0 < alpha < 1 and c > 0"));
    }
    let crit = 2.0 / 3.0;
    Ok(if (alpha_exp - crit).abs() <= CRITICAL_TOL {
        let t = c.powi(3) / 3.0;
        t / (1.0 + t)
    } else if alpha_exp > crit {
        0.0
    } else {
        1.0
    })
}

fn check_eb1(m: usize, alpha: f64, beta: f64, c: f64) -> Result<()> {
    if m == 0 || !(c > 0.0) {
        return Err(param("need m >= 1 and c > 0"));
    }
    let floor = alpha - 1.0 / m as f64;
    if !(floor >= -CRITICAL_TOL && beta > floor) {
        return Err(param(format!(
            "exponents violate beta > alpha - 1/m >= 0 (alpha={alpha}, beta={beta}, m={m})"
        )));
    }
    Ok(())
}

/// `(total ||v||_1, contribution of the distinguished ball)` for the union of
/// one ball of radius `c n^-beta` and `n` balls of radius `n^-alpha`.
pub fn example2_norms(m: usize, n: f64, alpha: f64, beta: f64, c: f64) -> Result<(f64, f64)> {
    check_eb1(m, alpha, beta, c)?;
    if !(n >= 1.0) {
        return Err(param("n must be at least 1"));
    }
    let rho = torsional_rigidity_constant(m);
    let p = m as f64 + 2.0;
    let big = rho * c.powf(p) * n.powf(-p * beta);
    let small = rho * n.powf(1.0 - p * alpha);
    Ok((big + small, big))
}

/// `(|distinguished ball|, |union|)`.
pub fn example2_volumes(m: usize, n: f64, alpha: f64, beta: f64, c: f64) -> Result<(f64, f64)> {
    check_eb1(m, alpha, beta, c)?;
    let w = unit_ball_volume(m);
    let mf = m as f64;
    let big = w * c.powf(mf) * n.powf(-mf * beta);
    Ok((big, big + w * n.powf(1.0 - mf * alpha)))
}

/// Limiting mass fraction of the distinguished ball.
pub fn example2_kappa(m: usize, alpha: f64, beta: f64, c: f64) -> Result<f64> {
    check_eb1(m, alpha, beta, c)?;
    let crit = alpha - 1.0 / (m as f64 + 2.0);
    Ok(if (beta - crit).abs() <= CRITICAL_TOL {
        let t = c.powi(m as i32 + 2);
        t / (1.0 + t)
    } else if beta > crit {
        0.0
    } else {
        1.0
    })
}

/// Exponent `beta` at which the union family is critical.
pub fn example2_critical_beta(m: usize, alpha: f64) -> f64 {
    alpha - 1.0 / (m as f64 + 2.0)
}

/// Upper bound on the fraction of torsion mass any set `A` with volume
/// fraction `vol_frac` can hold, for general exponents.
pub fn example2_mass_bound(m: usize, n: f64, alpha: f64, beta: f64, c: f64, vol_frac: f64) -> Result<f64> {
    let (total, big) = example2_norms(m, n, alpha, beta, c)?;
    let mf = m as f64;
    let rho = torsional_rigidity_constant(m);
    let corr = unit_ball_volume(m) / (2.0 * mf * rho)
        * vol_frac
        * (c.powf(mf) * n.powf(mf * (alpha - beta) - 1.0) + 1.0);
    Ok(big / total + corr)
}

/// Explicit union of balls for the family at a given integer `n`, laid out
/// along the first axis.
pub fn example2_domain(m: usize, n: usize, alpha: f64, beta: f64, c: f64) -> Result<DomainSpec> {
    check_eb1(m, alpha, beta, c)?;
    let nf = n as f64;
    let big_r = c * nf.powf(-beta);
    let r = nf.powf(-alpha);
    let at = |x: f64| {
        let mut v = vec![0.0; m];
        v[0] = x;
        v
    };
    let mut balls = vec![BallSpec { center: at(0.0), radius: big_r }];
    let mut x = big_r + 2.0 * r;
    for _ in 0..n {
        balls.push(BallSpec { center: at(x), radius: r });
        x += 3.0 * r;
    }
    DomainSpec::ball_union(m, balls)
}

/// `(lambda_1, E)` of the box with the given sides.
pub fn box_first_eigen(sides: &[f64]) -> Result<(f64, f64)> {
    check_sides(sides)?;
    let lambda = PI * PI * sides.iter().map(|l| 1.0 / (l * l)).sum::<f64>();
    Ok((lambda, (2.0 / PI).powi(sides.len() as i32)))
}

/// L1 norm of the L2-normalised first eigenfunction of a box.
pub fn box_eigen_l1(sides: &[f64]) -> Result<f64> {
    check_sides(sides)?;
    Ok(sides.iter().map(|l| (2.0 / PI) * (2.0 * l).sqrt()).product())
}

fn check_sides(sides: &[f64]) -> Result<()> {
    if sides.is_empty() || sides.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
        return Err(param("box sides must be positive"));
    }
    Ok(())
}

/// Odd mode counts per cross-section dimension.
fn modes_for(cross_dim: usize) -> usize {
    match cross_dim {
        1 => 20000,
        2 => 400,
        _ => 60,
    }
}

/// `(||v||_1, ||v||_inf)` for the torsion function of a box, dimensions 1 to 4.
///
/// The box is split as cross-section times its longest side `b`. With
/// `v = v_C - w`, the harmonic correction `w` is summed in closed form along
/// the long direction, leaving a series over cross-section modes whose sup
/// part converges exponentially and whose L1 part decays like `j^-5`.
pub fn box_torsion_norms(sides: &[f64]) -> Result<(f64, f64)> {
    check_sides(sides)?;
    if sides.len() > 4 {
        return Err(Error::Unsupported("box torsion series beyond dimension 4".into()));
    }
    let mut s = sides.to_vec();
    s.sort_by(|a, b| a.total_cmp(b));
    Ok(box_norms_sorted(&s))
}

fn box_norms_sorted(s: &[f64]) -> (f64, f64) {
    if s.len() == 1 {
        let l = s[0];
        return (l.powi(3) / 12.0, l * l / 8.0);
    }
    let (cross, b) = (&s[..s.len() - 1], s[s.len() - 1]);
    let (c_l1, c_sup) = box_norms_sorted(cross);
    let k = cross.len();
    let jmax = modes_for(k);
    let mut l1_corr = 0.0;
    let mut sup_corr = 0.0;
    let mut idx = vec![1usize; k];
    loop {
        let mut mu = 0.0;
        let mut pl1 = 1.0;
        let mut psup = 1.0;
        for (i, &j) in idx.iter().enumerate() {
            let jf = j as f64;
            mu += (jf / cross[i]).powi(2);
            pl1 *= 8.0 * cross[i] / (PI * PI * jf * jf);
            let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
            psup *= sign * 4.0 / (PI * jf);
        }
        mu *= PI * PI;
        let t = mu.sqrt() * b / 2.0;
        l1_corr += pl1 * 2.0 * t.tanh() / mu.powf(1.5);
        if t < 700.0 {
            sup_corr += psup / (t.cosh() * mu);
        }
        // odometer over odd indices
        let mut d = 0;
        loop {
            if d == k {
                return (b * c_l1 - l1_corr, c_sup - sup_corr);
            }
            idx[d] += 2;
            if idx[d] < 2 * jmax {
                break;
            }
            idx[d] = 1;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ball_torsion_values() {
        assert_relative_eq!(ball_torsion(2, 1.0, 0.0).unwrap(), 0.25);
        assert_eq!(ball_torsion(5, 1.3, 1.3).unwrap(), 0.0);
        assert_relative_eq!(ball_torsion(3, 2.0, 1.0).unwrap(), 0.5);
        assert!(ball_torsion(3, 2.0, 2.5).is_err());
    }

    #[test]
    fn ball_norms() {
        let (l1, sup) = ball_torsion_norms(1, 1.0);
        assert_relative_eq!(l1, 2.0 / 3.0, max_relative = 1e-15);
        assert_eq!(sup, 0.5);
        let (l1, sup) = ball_torsion_norms(2, 1.0);
        assert_relative_eq!(l1, PI / 8.0, max_relative = 1e-15);
        assert_eq!(sup, 0.25);
    }

    #[test]
    fn well_conditions_hold() {
        for &(nu, eps) in &[(20.0, 0.2), (10.0, 0.1), (1.5, 0.9), (1000.0, 0.01)] {
            let c = example1_coefficients(nu, eps).unwrap();
            let [r0, r1, r2] = c.residuals();
            assert!(r0.abs() <= 1e-12 * c.gamma, "{nu} {eps} {r0}");
            assert!(r1.abs() <= 1e-12 * nu, "{nu} {eps} {r1}");
            assert!(r2.abs() <= 1e-12, "{nu} {eps} {r2}");
        }
    }

    #[test]
    fn well_leading_alpha() {
        let c = example1_coefficients(20.0, 0.2).unwrap();
        let bound = 10.0 * (-20.0f64 * 0.8).exp();
        assert!((c.alpha_scaled * 400.0 - 1.0).abs() < bound);
    }

    #[test]
    fn well_mass_split_matches_quadrature() {
        for &(nu, eps) in &[(20.0, 0.2), (5.0, 0.5), (100.0, 0.05)] {
            let c = example1_coefficients(nu, eps).unwrap();
            let (inner, outer) = example1_mass_split(nu, eps).unwrap();
            let qi = crate::domains::simpson(|x| c.v1(x), 0.0, eps, 2000);
            let qo = crate::domains::simpson(|x| c.v2(x), eps, 1.0, 200000);
            assert_relative_eq!(inner, qi, max_relative = 1e-11);
            assert_relative_eq!(outer, qo, max_relative = 1e-10);
        }
    }

    #[test]
    fn well_kappa_limits() {
        assert_eq!(example1_kappa(0.9, 1.0).unwrap(), 0.0);
        assert_eq!(example1_kappa(0.3, 5.0).unwrap(), 1.0);
        assert_relative_eq!(example1_kappa(2.0 / 3.0, 1.0).unwrap(), 0.25);
    }

    #[test]
    fn union_norms() {
        let (total, big) = example2_norms(1, 1.0, 1.0, 1.0, 1.0).unwrap();
        assert_relative_eq!(total, 4.0 / 3.0, max_relative = 1e-15);
        assert_relative_eq!(big, 2.0 / 3.0, max_relative = 1e-15);
        assert!(example2_norms(2, 10.0, 1.0, 0.4, 1.0).is_err());
        for m in 1..=3 {
            let beta = example2_critical_beta(m, 1.0);
            assert_relative_eq!(example2_kappa(m, 1.0, beta, 1.0).unwrap(), 0.5);
        }
        assert_eq!(example2_kappa(3, 1.0, 0.9, 1.0).unwrap(), 0.0);
        assert_eq!(example2_kappa(1, 1.0, 0.1, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn union_domain_matches_volumes() {
        let d = example2_domain(2, 7, 1.0, 0.75, 1.0).unwrap();
        let (_, vol) = example2_volumes(2, 7.0, 1.0, 0.75, 1.0).unwrap();
        assert_relative_eq!(crate::domains::measure(&d).unwrap(), vol, max_relative = 1e-14);
    }

    #[test]
    fn box_eigen() {
        let (l, e) = box_first_eigen(&[1.0]).unwrap();
        assert_relative_eq!(l, PI * PI);
        assert_relative_eq!(e, 2.0 / PI);
        let (l, e) = box_first_eigen(&[1.0, 4.0]).unwrap();
        assert_relative_eq!(l, PI * PI * (1.0 + 1.0 / 16.0));
        assert_relative_eq!(e, 4.0 / (PI * PI));
    }

    #[test]
    fn box_torsion_cube_and_limits() {
        // unit square; reference values from a converged double sine series
        let (l1, sup) = box_torsion_norms(&[1.0, 1.0]).unwrap();
        assert_relative_eq!(sup, 0.073_671_353_281_4, max_relative = 1e-10);
        assert_relative_eq!(l1, 0.035_144_253_738_79, max_relative = 1e-10);
        // long strip approaches the 1D profile
        let (l1, sup) = box_torsion_norms(&[1.0, 200.0]).unwrap();
        assert_relative_eq!(sup, 0.125, max_relative = 1e-12);
        assert_relative_eq!(l1 / 200.0, 1.0 / 12.0, max_relative = 1e-2);
    }
}
