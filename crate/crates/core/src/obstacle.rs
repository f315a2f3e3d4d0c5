//! Radial obstacle problem on the unit ball: minimise the Dirichlet energy
//! over radial profiles `0 <= u <= 1`, `u(1) = 0`, with prescribed mean
//! `theta`. The minimiser equals 1 on a plateau `r <= l` and solves
//! `-Δu = c` outside it.
//!
//! Closed-form quantities are evaluated in terms of
//! `P = 1/c`, `A = int_l^1 u r^(m-1) dr / c` and `T = (1 - theta)/c`.
//! Near `l = 1` these vanish like `s^2`, `s^3`, `s^3` with `s = 1 - l`, so
//! they are expanded as power series in `s` there.

use serde::Serialize;

use crate::domains::{unit_ball_volume, DomainSpec, Grid};
use crate::error::{param, Error, Result};
use crate::solver::Profile;

/// Below this `s = 1 - l` the truncated series replace direct formulas.
const SERIES_SWITCH: f64 = 0.1;
const SERIES_TERMS: usize = 48;

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(param(format!("obstacle problem needs m >= 2, got {m}")));
    }
    Ok(())
}

fn check_l(l: f64) -> Result<()> {
    if !(0.0..1.0).contains(&l) {
        return Err(param(format!("plateau radius must lie in [0, 1), got {l}")));
    }
    Ok(())
}

/// Lower bound of the admissible means, `2/(m+2)`.
pub fn theta_min(m: usize) -> f64 {
    2.0 / (m as f64 + 2.0)
}

/// `x ln x`-safe product `l^k ln l`.
fn lk_ln(l: f64, k: i32) -> f64 {
    if l == 0.0 {
        0.0
    } else {
        l.powi(k) * l.ln()
    }
}

/// Direct `(P, A)`.
fn pa_direct(m: usize, l: f64) -> (f64, f64) {
    let mf = m as f64;
    let lm = l.powi(m as i32);
    if m == 2 {
        let p = (1.0 - l * l) / 4.0 + 0.5 * lk_ln(l, 2);
        let a = (1.0 - l * l).powi(2) / 16.0 - l * l * (1.0 - l * l) / 8.0 - lk_ln(l, 4) / 4.0;
        (p, a)
    } else {
        let p = 1.0 / (2.0 * mf) + lm / (mf * (mf - 2.0)) - l * l / (2.0 * (mf - 2.0));
        let a = lm * (l * l - 1.0) / (2.0 * mf * (mf - 2.0))
            + (lm * l * l - 1.0) / (2.0 * mf * (mf + 2.0))
            + lm * (1.0 - lm) / (mf * mf * (mf - 2.0))
            + (1.0 - lm) / (2.0 * mf * mf);
        (p, a)
    }
}

/// Truncated power series in `s`.
#[derive(Clone)]
struct Series(Vec<f64>);

impl Series {
    fn constant(c: f64) -> Self {
        let mut v = vec![0.0; SERIES_TERMS];
        v[0] = c;
        Series(v)
    }

    /// `(1 - s)^k`.
    fn l_pow(k: usize) -> Self {
        let mut v = vec![0.0; SERIES_TERMS];
        let mut b = 1.0;
        for (j, slot) in v.iter_mut().enumerate().take(k.min(SERIES_TERMS - 1) + 1) {
            *slot = if j % 2 == 0 { b } else { -b };
            b = b * (k - j) as f64 / (j + 1) as f64;
        }
        Series(v)
    }

    /// `ln(1 - s)`.
    fn ln_l() -> Self {
        let mut v = vec![0.0; SERIES_TERMS];
        for (j, slot) in v.iter_mut().enumerate().skip(1) {
            *slot = -1.0 / j as f64;
        }
        Series(v)
    }

    fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    fn scale(&self, c: f64) -> Series {
        Series(self.0.iter().map(|a| a * c).collect())
    }

    fn mul(&self, o: &Series) -> Series {
        let mut v = vec![0.0; SERIES_TERMS];
        for (i, a) in self.0.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in o.0.iter().enumerate().take(SERIES_TERMS - i) {
                v[i + j] += a * b;
            }
        }
        Series(v)
    }

    /// Evaluates `sum_{j >= skip} a_j s^(j - skip)`.
    fn eval_reduced(&self, s: f64, skip: usize) -> f64 {
        self.0[skip..].iter().rev().fold(0.0, |acc, a| acc * s + a)
    }
}

/// Series of `P`, `A`, `T` in `s`.
fn pat_series(m: usize) -> (Series, Series, Series) {
    let mf = m as f64;
    let one = Series::constant(1.0);
    let lm = Series::l_pow(m);
    let l2 = Series::l_pow(2);
    let (p, a) = if m == 2 {
        let ln = Series::ln_l();
        let l4 = Series::l_pow(4);
        let one_minus_l2 = one.add(&l2.scale(-1.0));
        let p = one_minus_l2.scale(0.25).add(&l2.mul(&ln).scale(0.5));
        let a = one_minus_l2
            .mul(&one_minus_l2)
            .scale(1.0 / 16.0)
            .add(&l2.mul(&one_minus_l2).scale(-1.0 / 8.0))
            .add(&l4.mul(&ln).scale(-0.25));
        (p, a)
    } else {
        let lm2 = Series::l_pow(m + 2);
        let one_minus_lm = one.add(&lm.scale(-1.0));
        let p = Series::constant(1.0 / (2.0 * mf))
            .add(&lm.scale(1.0 / (mf * (mf - 2.0))))
            .add(&l2.scale(-1.0 / (2.0 * (mf - 2.0))));
        let a = lm
            .mul(&l2.add(&one.scale(-1.0)))
            .scale(1.0 / (2.0 * mf * (mf - 2.0)))
            .add(&lm2.add(&one.scale(-1.0)).scale(1.0 / (2.0 * mf * (mf + 2.0))))
            .add(&lm.mul(&one_minus_lm).scale(1.0 / (mf * mf * (mf - 2.0))))
            .add(&one_minus_lm.scale(1.0 / (2.0 * mf * mf)));
        (p, a)
    };
    let t = one.add(&lm.scale(-1.0)).mul(&p).add(&a.scale(-mf));
    (p, a, t)
}

/// Reduced values `(P/s^2, A/s^3, T/s^3)` for small `s`.
fn pat_reduced(m: usize, s: f64) -> (f64, f64, f64) {
    let (p, a, t) = pat_series(m);
    (p.eval_reduced(s, 2), a.eval_reduced(s, 3), t.eval_reduced(s, 3))
}

/// Lagrange multiplier `c(l)` fixed by `u(l) = 1`.
pub fn obstacle_c_of_l(m: usize, l: f64) -> Result<f64> {
    check_m(m)?;
    check_l(l)?;
    let s = 1.0 - l;
    Ok(if s < SERIES_SWITCH {
        1.0 / (s * s * pat_reduced(m, s).0)
    } else {
        1.0 / pa_direct(m, l).0
    })
}

/// Value at radius `r` of the obstacle solution with plateau radius `l`.
pub fn obstacle_profile(m: usize, l: f64, r: f64) -> Result<f64> {
    check_m(m)?;
    check_l(l)?;
    if !(0.0..=1.0).contains(&r) {
        return Err(param(format!("radius {r} outside [0, 1]")));
    }
    if r <= l {
        return Ok(1.0);
    }
    let c = obstacle_c_of_l(m, l)?;
    let mf = m as f64;
    let u = if m == 2 {
        c / 4.0 * (1.0 - r * r) + l * l * c / 2.0 * r.ln()
    } else {
        c / (2.0 * mf) * (1.0 - r * r)
            + l.powi(m as i32) * c / (mf * (mf - 2.0)) * (1.0 - r.powi(2 - m as i32))
    };
    Ok(u.clamp(0.0, 1.0))
}

/// Mean over the unit ball of the obstacle solution with plateau radius `l`.
pub fn theta_of_l(m: usize, l: f64) -> Result<f64> {
    check_m(m)?;
    check_l(l)?;
    let s = 1.0 - l;
    let mf = m as f64;
    Ok(if s < SERIES_SWITCH {
        let (p, _, t) = pat_reduced(m, s);
        1.0 - s * t / p
    } else {
        let (p, a) = pa_direct(m, l);
        l.powi(m as i32) + mf * a / p
    })
}

/// `1 - theta(l)`, accurate near `l = 1`.
fn one_minus_theta(m: usize, l: f64) -> f64 {
    let s = 1.0 - l;
    if s < SERIES_SWITCH {
        let (p, _, t) = pat_reduced(m, s);
        s * t / p
    } else {
        let (p, a) = pa_direct(m, l);
        1.0 - l.powi(m as i32) - m as f64 * a / p
    }
}

/// Plateau radius with the given mean, by bisection.
pub fn l_of_theta(m: usize, theta: f64) -> Result<f64> {
    check_m(m)?;
    let t0 = theta_min(m);
    // admit roundoff just below the left endpoint
    if !(theta >= t0 - 1e-14 && theta < 1.0) {
        return Err(param(format!("mean {theta} outside [{t0}, 1)")));
    }
    if theta <= t0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0 - 1e-9);
    if theta_of_l(m, hi)? <= theta {
        return Ok(hi);
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if theta_of_l(m, mid)? < theta {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `g(l) = (1 - theta(l)) * energy(l)`.
pub fn g_of_l(m: usize, l: f64) -> Result<f64> {
    check_m(m)?;
    check_l(l)?;
    let s = 1.0 - l;
    let mw = m as f64 * unit_ball_volume(m);
    Ok(if s < SERIES_SWITCH {
        let (p, a, t) = pat_reduced(m, s);
        mw * t * a / (p * p * p)
    } else {
        let (p, a) = pa_direct(m, l);
        let t = (1.0 - l.powi(m as i32)) * p - m as f64 * a;
        mw * t * a / (p * p * p)
    })
}

/// Dirichlet energy of the minimiser with plateau radius `l`.
pub fn energy_of_l(m: usize, l: f64) -> Result<f64> {
    check_m(m)?;
    check_l(l)?;
    let s = 1.0 - l;
    let mw = m as f64 * unit_ball_volume(m);
    Ok(if s < SERIES_SWITCH {
        let (p, a, _) = pat_reduced(m, s);
        mw * a / (s * p * p)
    } else {
        let (p, a) = pa_direct(m, l);
        mw * a / (p * p)
    })
}

/// `f(theta) = (1 - theta) F*(theta)`.
pub fn f_of_theta(m: usize, theta: f64) -> Result<f64> {
    g_of_l(m, l_of_theta(m, theta)?)
}

/// Explicit quotients for `g` in dimensions 2, 3 and 4.
pub fn g_closed_form(m: usize, l: f64) -> Option<f64> {
    if !(0.0..1.0).contains(&l) {
        return None;
    }
    let pi = std::f64::consts::PI;
    let (l2, l3, l4, l5) = (l * l, l.powi(3), l.powi(4), l.powi(5));
    match m {
        2 => {
            let num = (1.0 / 16.0 - l2 / 4.0 + 3.0 * l4 / 16.0 - lk_ln(l, 4) / 4.0)
                * (1.0 / 8.0 - l4 / 8.0 + lk_ln(l, 2) / 2.0);
            let den = (0.25 - l2 / 4.0 + lk_ln(l, 2) / 2.0).powi(3);
            Some(2.0 * pi * num / den)
        }
        3 => {
            let a = 5.0 * (1.0 - l3) + 10.0 * l3 * (1.0 - l3) - 15.0 * l3 * (1.0 - l2) - 3.0 * (1.0 - l5);
            let b = 1.0 - l5 + 5.0 * (l3 - l2);
            let den = (2.0 * l3 + 1.0 - 3.0 * l2).powi(3);
            Some(24.0 * pi / 25.0 * a * b / den)
        }
        4 => Some(unit_ball_volume(4) * (16.0 * l2 / 3.0 + 16.0 / 9.0)),
        _ => None,
    }
}

/// `(m + sqrt(m^2 + 8m)) / (2(m + 2))`.
pub fn theta_star(m: usize) -> Result<f64> {
    check_m(m)?;
    let mf = m as f64;
    Ok((mf + (mf * mf + 8.0 * mf).sqrt()) / (2.0 * (mf + 2.0)))
}

/// `f(2/(m+2)) = 4 m^2 omega_m / (m+2)^2`, the value the lower bound targets.
pub fn f_minimum(m: usize) -> f64 {
    let mf = m as f64;
    4.0 * mf * mf * unit_ball_volume(m) / ((mf + 2.0) * (mf + 2.0))
}

/// `(eta, energy)` of the two-piece competitor that is constant on `B_r0`
/// and harmonic outside.
pub fn eta_lower_bound(m: usize, theta: f64, r0: f64) -> Result<(f64, f64)> {
    if m < 3 {
        return Err(Error::Unsupported("two-piece competitor needs m >= 3".into()));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(param(format!("mean {theta} outside (0, 1)")));
    }
    let mf = m as f64;
    if !(r0 > 0.0 && r0 <= theta.powf(1.0 / mf)) {
        return Err(param(format!("need 0 < r0 <= theta^(1/m), got r0 = {r0}")));
    }
    let rm = r0.powi(m as i32);
    let eta = (theta - rm) / (1.0 - rm);
    let energy = mf * (mf - 2.0) * unit_ball_volume(m) * eta * eta / (r0.powi(2 - m as i32) - 1.0);
    Ok((eta, energy))
}

/// Lower bound on `f(theta)` from the competitor with `r0 = theta^(k/m)`.
pub fn f_lower_bound_power(m: usize, theta: f64, k: f64) -> Result<f64> {
    let (_, energy) = eta_lower_bound(m, theta, theta.powf(k / m as f64))?;
    Ok((1.0 - theta) * energy)
}

/// The `k = 3` bound before dropping the dimension-dependent exponent:
/// `m(m-2) omega_m (theta(1+theta)/(1+theta+theta^2))^2 (1-theta)/(theta^(3(2-m)/m) - 1)`.
pub fn f_lower_bound_cubic(m: usize, theta: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::Unsupported("cubic bound needs m >= 3".into()));
    }
    let mf = m as f64;
    let q = theta * (1.0 + theta) / (1.0 + theta + theta * theta);
    Ok(mf * (mf - 2.0) * unit_ball_volume(m) * q * q * (1.0 - theta)
        / (theta.powf(3.0 * (2.0 - mf) / mf) - 1.0))
}

/// Final simplified form `m(m-2) omega_m theta^5 (1+theta)^2 / (1+theta+theta^2)^3`.
pub fn f_lower_bound_simplified(m: usize, theta: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::Unsupported("simplified bound needs m >= 3".into()));
    }
    let mf = m as f64;
    Ok(mf * (mf - 2.0) * unit_ball_volume(m) * theta.powi(5) * (1.0 + theta).powi(2)
        / (1.0 + theta + theta * theta).powi(3))
}

/// A solution of the radial obstacle problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ObstacleSolution {
    pub m: usize,
    pub l: f64,
    pub c: f64,
    pub theta: f64,
    pub profile: Profile,
    pub energy: f64,
    pub f_value: f64,
}

/// Row of an obstacle curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObstacleCurvePoint {
    pub m: usize,
    pub l: f64,
    pub c: f64,
    pub theta: f64,
    pub f_value: f64,
    pub g_closed_form: Option<f64>,
}

pub fn obstacle_curve_point(m: usize, l: f64) -> Result<ObstacleCurvePoint> {
    Ok(ObstacleCurvePoint {
        m,
        l,
        c: obstacle_c_of_l(m, l)?,
        theta: theta_of_l(m, l)?,
        f_value: g_of_l(m, l)?,
        g_closed_form: g_closed_form(m, l),
    })
}

/// The exact solution sampled on a uniform radial grid.
pub fn obstacle_solution(m: usize, l: f64, n_nodes: usize) -> Result<ObstacleSolution> {
    let grid = Grid::radial(m, 0.0, 1.0, n_nodes)?;
    let values = grid
        .nodes
        .iter()
        .map(|&r| obstacle_profile(m, l, r))
        .collect::<Result<Vec<_>>>()?;
    let theta = theta_of_l(m, l)?;
    let energy = energy_of_l(m, l)?;
    Ok(ObstacleSolution {
        m,
        l,
        c: obstacle_c_of_l(m, l)?,
        theta,
        profile: Profile { grid, values, domain: DomainSpec::ball(m, 1.0)? },
        energy,
        f_value: one_minus_theta(m, l) * energy,
    })
}

/// Discrete radial problem: P1 energy with exact segment weights, lumped mass.
struct Discrete {
    /// `m omega_m int_seg r^(m-1) dr / h^2` per segment.
    seg: Vec<f64>,
    /// Lumped mass per node.
    w: Vec<f64>,
    target: f64,
}

impl Discrete {
    fn new(m: usize, n: usize, theta: f64) -> Self {
        let grid = Grid::radial(m, 0.0, 1.0, n).expect("valid grid");
        let h = grid.spacing();
        let s = m as f64 * unit_ball_volume(m);
        let seg = (0..n - 1)
            .map(|i| {
                let (a, b) = (grid.nodes[i], grid.nodes[i + 1]);
                s * (b.powi(m as i32) - a.powi(m as i32)) / (m as f64 * h * h)
            })
            .collect();
        Discrete { seg, w: grid.weights, target: theta * unit_ball_volume(m) }
    }

    fn energy(&self, u: &[f64]) -> f64 {
        self.seg.iter().enumerate().map(|(i, k)| k * (u[i + 1] - u[i]).powi(2)).sum()
    }

    /// `K u` where energy = `u^T K u`.
    fn stiffness(&self, u: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; u.len()];
        for (i, k) in self.seg.iter().enumerate() {
            let d = k * (u[i + 1] - u[i]);
            g[i] -= d;
            g[i + 1] += d;
        }
        g
    }

    /// Projection in the lumped-mass metric onto `0 <= u <= 1`,
    /// `u_last = 0`, `sum w u = target`.
    fn project(&self, y: &mut [f64]) {
        let n = y.len();
        let mass = |mu: f64, y: &[f64]| -> f64 {
            (0..n - 1).map(|i| self.w[i] * (y[i] - mu).clamp(0.0, 1.0)).sum()
        };
        let (mut lo, mut hi): (f64, f64) = (-2.0, 2.0);
        let ymax = y.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b));
        let ymin = y.iter().fold(f64::INFINITY, |a, b| a.min(*b));
        lo = lo.min(ymin - 1.0);
        hi = hi.max(ymax);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mass(mid, y) > self.target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-16 * (1.0 + mid.abs()) {
                break;
            }
        }
        let mu = 0.5 * (lo + hi);
        for v in y[..n - 1].iter_mut() {
            *v = (*v - mu).clamp(0.0, 1.0);
        }
        y[n - 1] = 0.0;
    }

    /// Accelerated projected gradient with backtracking and adaptive restart.
    fn minimise(&self, u0: Vec<f64>, max_iter: usize) -> Result<(Vec<f64>, usize)> {
        let n = u0.len();
        let mut x = u0;
        self.project(&mut x);
        let mut y = x.clone();
        let mut t_k: f64 = 1.0;
        // Gershgorin bound on the largest eigenvalue of 2 M^-1 K
        let lip = (0..n)
            .map(|i| {
                let left = if i > 0 { self.seg[i - 1] } else { 0.0 };
                let right = if i + 1 < n { self.seg[i] } else { 0.0 };
                4.0 * (left + right) / self.w[i]
            })
            .fold(0.0, f64::max);
        let step = 1.0 / lip;
        let mut e_prev = self.energy(&x);
        let mut quiet = 0;
        let mut change = f64::INFINITY;
        for it in 1..=max_iter {
            let ky = self.stiffness(&y);
            let mut z: Vec<f64> = (0..n).map(|i| y[i] - step * 2.0 * ky[i] / self.w[i]).collect();
            self.project(&mut z);
            let e = self.energy(&z);
            // restart momentum when the energy goes up beyond roundoff
            if e > e_prev + 1e-13 * e_prev.max(1.0) {
                t_k = 1.0;
                y = x.clone();
                continue;
            }
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t_k * t_k).sqrt());
            let beta = (t_k - 1.0) / t_next;
            y = (0..n).map(|i| z[i] + beta * (z[i] - x[i])).collect();
            x = z;
            t_k = t_next;
            change = (e_prev - e).abs();
            e_prev = e;
            if change < 1e-12 * e.max(1.0) {
                quiet += 1;
                if quiet >= 50 {
                    return Ok((x, it));
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::NonConvergence { iterations: max_iter, last_change: change })
    }
}

fn interpolate_to(u: &[f64], n: usize) -> Vec<f64> {
    let k = u.len() - 1;
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64 * k as f64;
            let j = (t.floor() as usize).min(k - 1);
            let f = t - j as f64;
            u[j] * (1.0 - f) + u[j + 1] * f
        })
        .collect()
}

/// Solves the discrete obstacle problem by accelerated projected gradient
/// on a sequence of refined grids, without using the plateau structure.
pub fn numeric_obstacle_solve(m: usize, theta: f64, n_nodes: usize) -> Result<ObstacleSolution> {
    check_m(m)?;
    let t0 = theta_min(m);
    if !(theta >= t0 && theta < 1.0) {
        return Err(param(format!("mean {theta} outside [{t0}, 1)")));
    }
    if n_nodes < 16 {
        return Err(param("need at least 16 nodes"));
    }
    let mut levels = vec![n_nodes];
    while *levels.last().unwrap() > 129 {
        let last = *levels.last().unwrap();
        levels.push((last - 1) / 2 + 1);
    }
    levels.reverse();
    // linear start: 1 - r scaled toward the requested mean
    let mut u: Vec<f64> = (0..levels[0]).map(|i| 1.0 - i as f64 / (levels[0] - 1) as f64).collect();
    let mut disc = Discrete::new(m, levels[0], theta);
    for (k, &n) in levels.iter().enumerate() {
        if k > 0 {
            u = interpolate_to(&u, n);
            disc = Discrete::new(m, n, theta);
        }
        u = disc.minimise(u, 400_000)?.0;
    }
    let grid = Grid::radial(m, 0.0, 1.0, n_nodes)?;
    let energy = disc.energy(&u);
    let top = u.iter().rposition(|v| *v >= 1.0 - 1e-9);
    let l = top.map_or(0.0, |i| grid.nodes[i]);
    // multiplier from the free nodes, where (K u)_i = c w_i
    let ku = disc.stiffness(&u);
    let mut ests: Vec<f64> = (1..n_nodes - 1)
        .filter(|&i| u[i] > 1e-6 && u[i] < 1.0 - 1e-6)
        .map(|i| ku[i] / disc.w[i])
        .collect();
    ests.sort_by(|a, b| a.total_cmp(b));
    let c = ests.get(ests.len() / 2).copied().unwrap_or(f64::NAN);
    Ok(ObstacleSolution {
        m,
        l,
        c,
        theta,
        profile: Profile { grid, values: u, domain: DomainSpec::ball(m, 1.0)? },
        energy,
        f_value: (1.0 - theta) * energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn multiplier_at_zero_plateau() {
        assert_relative_eq!(obstacle_c_of_l(2, 0.0).unwrap(), 4.0);
        for m in 3..=7 {
            assert_relative_eq!(obstacle_c_of_l(m, 0.0).unwrap(), 2.0 * m as f64, max_relative = 1e-14);
        }
        assert!(obstacle_c_of_l(3, 1.0).is_err());
    }

    #[test]
    fn series_and_direct_agree_at_switch() {
        for m in 2..=7 {
            let l = 1.0 - SERIES_SWITCH;
            let (p, a) = pa_direct(m, l);
            let s = SERIES_SWITCH;
            let (pr, ar, _) = pat_reduced(m, s);
            assert_relative_eq!(p, pr * s * s, max_relative = 1e-12);
            assert_relative_eq!(a, ar * s * s * s, max_relative = 1e-11);
        }
    }

    #[test]
    fn profile_boundary_values() {
        for m in 2..=5 {
            assert_eq!(obstacle_profile(m, 0.4, 1.0).unwrap(), 0.0);
            assert_relative_eq!(obstacle_profile(m, 0.4, 0.4).unwrap(), 1.0, max_relative = 1e-14);
            assert_eq!(obstacle_profile(m, 0.4, 0.1).unwrap(), 1.0);
        }
        assert!(obstacle_profile(2, 0.4, 1.1).is_err());
    }

    #[test]
    fn theta_endpoints() {
        assert_relative_eq!(theta_of_l(2, 0.0).unwrap(), 0.5, max_relative = 1e-15);
        assert_relative_eq!(theta_of_l(4, 0.0).unwrap(), 1.0 / 3.0, max_relative = 1e-14);
        assert!(theta_of_l(3, 1.0 - 1e-6).unwrap() > 0.999);
    }

    #[test]
    fn theta_star_values() {
        assert_relative_eq!(theta_star(4).unwrap(), (1.0 + 3f64.sqrt()) / 3.0, max_relative = 1e-15);
        assert_relative_eq!(theta_star(2).unwrap(), (1.0 + 5f64.sqrt()) / 4.0, max_relative = 1e-15);
        assert!(theta_star(5).unwrap() >= 13.0 / 14.0);
    }

    #[test]
    fn eta_degenerate_and_m2() {
        let (eta, e) = eta_lower_bound(4, 0.5f64, 0.5f64.powf(0.25)).unwrap();
        assert!(eta.abs() < 1e-15 && e.abs() < 1e-14);
        assert!(eta_lower_bound(2, 0.5, 0.3).is_err());
        assert!(eta_lower_bound(4, 0.5, 0.9).is_err());
    }

    #[test]
    fn cubic_bound_at_m5() {
        let theta = 13.0 / 14.0;
        let w5 = unit_ball_volume(5);
        let bracket = f_lower_bound_cubic(5, theta).unwrap() / (15.0 * w5);
        assert!(bracket >= 0.206, "{bracket}");
        assert!(f_lower_bound_cubic(5, theta).unwrap() >= f_minimum(5));
    }
}
