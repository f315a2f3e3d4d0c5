//! Independent reference values used across the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Gamma at a positive integer or half-integer.
pub fn gamma_half_integer(x: f64) -> f64 {
    let twice = (2.0 * x).round();
    assert!((2.0 * x - twice).abs() < 1e-12 && x > 0.0);
    let (mut g, mut t) = if twice as i64 % 2 == 0 { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    while t < x - 1e-12 {
        g *= t;
        t += 1.0;
    }
    g
}

/// `J_nu(x)` by its power series; fine for `x` below about 15.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    let h = x / 2.0;
    let mut term = h.powf(nu) / gamma_half_integer(nu + 1.0);
    let mut sum = term;
    for k in 1..200 {
        let k = k as f64;
        term *= -h * h / (k * (k + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

/// First positive zero of `J_nu`, by scanning and bisection.
pub fn bessel_first_zero(nu: f64) -> f64 {
    let mut a = 0.5;
    let mut b = a + 0.05;
    while bessel_j(nu, a).signum() == bessel_j(nu, b).signum() {
        a = b;
        b += 0.05;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if bessel_j(nu, a).signum() == bessel_j(nu, mid).signum() {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// Torsion function of the annulus `a < r < b` in `R^m`, zero on both spheres.
pub fn annulus_torsion(m: usize, a: f64, b: f64, r: f64) -> f64 {
    let mf = m as f64;
    let q = |r: f64| -r * r / (2.0 * mf);
    let g = |r: f64| if m == 2 { r.ln() } else { r.powf(2.0 - mf) };
    let big_a = (q(b) - q(a)) / (g(a) - g(b));
    let big_b = -q(a) - big_a * g(a);
    q(r) + big_a * g(r) + big_b
}

/// Torsion function of `-v'' + c v = 1` on (0, 1).
pub fn interval_torsion_constant(c: f64, x: f64) -> f64 {
    let k = c.sqrt();
    (1.0 - (k * (x - 0.5)).cosh() / (k / 2.0).cosh()) / c
}

/// `(||v||_1, ||v||_inf)` for the rectangle `(0,a) x (0,b)` by the double
/// sine series over odd modes.
pub fn rectangle_torsion_norms(a: f64, b: f64, jmax: usize, kmax: usize) -> (f64, f64) {
    let (mut l1, mut sup) = (0.0, 0.0);
    for j in (1..=jmax).step_by(2) {
        for k in (1..=kmax).step_by(2) {
            let (jf, kf) = (j as f64, k as f64);
            let lam = PI * PI * (jf * jf / (a * a) + kf * kf / (b * b));
            let coef = 16.0 / (PI * PI * jf * kf * lam);
            l1 += coef * 4.0 * a * b / (PI * PI * jf * kf);
            let sign = if ((j - 1) / 2 + (k - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
            sup += coef * sign;
        }
    }
    (l1, sup)
}

/// Shoots `-(r^(m-1) u')' = c r^(m-1)` outward from `u(l) = 1`, `u'(l) = 0`
/// with classical RK4 and returns `u(r_end)`.
pub fn shoot_radial(m: usize, c: f64, l: f64, r_end: f64, steps: usize) -> f64 {
    let k = (m - 1) as f64;
    let f = |r: f64, y: [f64; 2]| [y[1], -c - k / r * y[1]];
    let h = (r_end - l) / steps as f64;
    let mut y = [1.0, 0.0];
    let mut r = l;
    for _ in 0..steps {
        let k1 = f(r, y);
        let k2 = f(r + h / 2.0, [y[0] + h / 2.0 * k1[0], y[1] + h / 2.0 * k1[1]]);
        let k3 = f(r + h / 2.0, [y[0] + h / 2.0 * k2[0], y[1] + h / 2.0 * k2[1]]);
        let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r += h;
    }
    y[0]
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Observed order ratio `e(h) / e(h/2)` for a sequence of errors.
pub fn ratios(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| w[0] / w[1]).collect()
}
