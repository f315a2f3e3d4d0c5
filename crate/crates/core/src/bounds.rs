//! Inequality harness: both sides of each bound on concrete instances.

use std::f64::consts::{E, LN_2, PI};

use serde::Serialize;
use statrs::function::gamma::gamma;

use crate::closed_form::{box_first_eigen, box_torsion_norms};
use crate::domains::{boundary_decay_integral, measure, unit_ball_volume, DomainSpec, GridKind, PotentialSpec};
use crate::error::{param, Error, Result};
use crate::functionals::{analyze, efficiency_torsion_with, Analysis};
use crate::solver::{solve_torsion_1d, solve_torsion_radial, Profile};

/// Default allowance for discretisation error in a slack.
pub const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub name: String,
    pub context: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Margin in the direction the bound asserts, relative to the larger side.
    pub slack: f64,
    pub satisfied: bool,
    /// False when a hypothesis of the bound fails; no claim is made then.
    pub applicable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// `lhs >= rhs`
    Ge,
    /// `lhs <= rhs`
    Le,
}

impl BoundReport {
    pub fn new(name: &str, context: &str, lhs: f64, rhs: f64, dir: Direction) -> Self {
        let scale = lhs.abs().max(rhs.abs());
        let raw = match dir {
            Direction::Ge => lhs - rhs,
            Direction::Le => rhs - lhs,
        };
        let slack = if scale > 0.0 { raw / scale } else { 0.0 };
        BoundReport {
            name: name.to_string(),
            context: context.to_string(),
            lhs,
            rhs,
            slack,
            satisfied: slack >= -DEFAULT_TOL,
            applicable: true,
        }
    }

    pub fn inapplicable(mut self) -> Self {
        self.applicable = false;
        self
    }

    /// Re-evaluates `satisfied` against another tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.satisfied = self.slack >= -tol;
        self
    }

    /// An applicable bound that fails.
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.satisfied
    }
}

fn ctx(d: &DomainSpec, v: &PotentialSpec) -> String {
    format!("{} {}", d.label(), v.label())
}

/// `4 + 3 m log 2`.
pub fn lemma1_constant(m: usize) -> f64 {
    4.0 + 3.0 * m as f64 * LN_2
}

/// `1 < lambda_1 ||v||_inf <= 4 + 3 m log 2`, as lower and upper reports.
pub fn check_lemma1(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<Vec<BoundReport>> {
    let a = analyze(d, v, nodes)?;
    Ok(lemma1_reports(&a, &ctx(d, v)))
}

fn lemma1_reports(a: &Analysis, context: &str) -> Vec<BoundReport> {
    let prod = a.lambda1 * a.torsion_sup;
    vec![
        BoundReport::new("lemma1_lower", context, prod, 1.0, Direction::Ge),
        BoundReport::new("lemma1_upper", context, prod, lemma1_constant(a.dim), Direction::Le),
    ]
}

/// Factor `F` with `v_{Omega,c} >= F v_Omega`, and the time `T` that
/// optimises the underlying heat-semigroup estimate. `F = 1` at `c = 0`.
pub fn lemma2_factor(m: usize, c: f64, lambda1: f64) -> Result<(f64, f64)> {
    if !(c >= 0.0) || !(lambda1 > 0.0) || m == 0 {
        return Err(param("need c >= 0, lambda1 > 0, m >= 1"));
    }
    if c == 0.0 {
        return Ok((1.0, f64::INFINITY));
    }
    let mf = m as f64;
    let r = c / lambda1;
    let ln_f = -2.0 * (3.0 * mf + 4.0) * r * LN_2 - (1.0 + 8.0 * r).ln()
        + 8.0 * r * (8.0 * r / (8.0 * r + 1.0)).ln();
    let t = 8.0 / lambda1 * ((3.0 * mf + 4.0) / 4.0 * LN_2 + (1.0 + 1.0 / (8.0 * r)).ln());
    Ok((ln_f.exp(), t))
}

/// Torsion profiles with and without a constant potential on a shared grid.
fn paired_profiles(d: &DomainSpec, c: f64, nodes: usize) -> Result<Option<(Profile, Profile)>> {
    let zero = PotentialSpec::Zero;
    let pot = PotentialSpec::Constant { c };
    Ok(match d {
        DomainSpec::Interval { .. } => Some((solve_torsion_1d(d, &zero, nodes)?, solve_torsion_1d(d, &pot, nodes)?)),
        DomainSpec::Ball { .. } | DomainSpec::Annulus { .. } => {
            Some((solve_torsion_radial(d, &zero, nodes)?, solve_torsion_radial(d, &pot, nodes)?))
        }
        _ => None,
    })
}

/// Upper and lower bounds on `Phi(Omega, c)` in terms of `Phi(Omega)`, plus
/// the pointwise comparison `v_{Omega,c} >= F v_Omega` where profiles exist.
pub fn check_thm1_constant(d: &DomainSpec, c: f64, nodes: usize) -> Result<Vec<BoundReport>> {
    let pot = PotentialSpec::Constant { c };
    let context = ctx(d, &pot);
    let base = analyze(d, &PotentialSpec::Zero, nodes)?;
    let phi_c = efficiency_torsion_with(d, &pot, nodes)?;
    let (f, _) = lemma2_factor(d.dim(), c, base.lambda1)?;
    let mut out = vec![
        BoundReport::new("thm1_upper", &context, phi_c, base.phi() / f, Direction::Le),
        BoundReport::new("thm1_lower", &context, phi_c, f * base.phi(), Direction::Ge),
    ];
    if let Some((v0, vc)) = paired_profiles(d, c, nodes)? {
        // smallest ratio over nodes where v_Omega is not negligible
        let vmax = v0.sup();
        let ratio = v0
            .values
            .iter()
            .zip(&vc.values)
            .filter(|(a, _)| **a > 1e-8 * vmax)
            .map(|(a, b)| b / a)
            .fold(f64::INFINITY, f64::min);
        out.push(BoundReport::new("thm1_pointwise", &context, ratio, f, Direction::Ge));
    }
    Ok(out)
}

/// Sandwich of `Phi(Omega_n, V_n)` between multiples of `Phi(Omega_n)` for
/// a family with `||V_n||_inf <= eta lambda_1(Omega_n)`. Members that break
/// the hypothesis are reported as inapplicable.
pub fn check_thm1_eta(family: &[(DomainSpec, PotentialSpec)], eta: f64, nodes: usize) -> Result<Vec<BoundReport>> {
    if !(eta >= 0.0) {
        return Err(param("eta must be non-negative"));
    }
    let mut out = Vec::new();
    for (d, v) in family {
        let base = analyze(d, &PotentialSpec::Zero, nodes)?;
        let phi_v = efficiency_torsion_with(d, v, nodes)?;
        let m = d.dim() as f64;
        let k = E * 2f64.powf(2.0 * (3.0 * m + 4.0) * eta) * (1.0 + 8.0 * eta);
        let ok = v.sup_norm() / base.lambda1 <= eta;
        let context = format!("{} eta={eta}", ctx(d, v));
        let mut lo = BoundReport::new("thm1_eta_lower", &context, phi_v, base.phi() / k, Direction::Ge);
        let mut hi = BoundReport::new("thm1_eta_upper", &context, phi_v, base.phi() * k, Direction::Le);
        if !ok {
            lo = lo.inapplicable();
            hi = hi.inapplicable();
        }
        out.push(lo);
        out.push(hi);
    }
    Ok(out)
}

/// `1 > Phi(Omega, c) >= 1 - 2^((m+4)/2) |Omega|^-1 int exp(-sqrt(c) d(x)/2)`.
pub fn check_e50(d: &DomainSpec, c: f64, nodes: usize) -> Result<Vec<BoundReport>> {
    let pot = PotentialSpec::Constant { c };
    let context = ctx(d, &pot);
    let phi = efficiency_torsion_with(d, &pot, nodes)?;
    let m = d.dim() as f64;
    let decay = boundary_decay_integral(d, c)?;
    let rhs = 1.0 - 2f64.powf((m + 4.0) / 2.0) * decay / measure(d)?;
    Ok(vec![
        BoundReport::new("e50_upper", &context, phi, 1.0, Direction::Le),
        BoundReport::new("e50_lower", &context, phi, rhs, Direction::Ge),
    ])
}

/// Constant of the efficiency comparison: `2 (8 pi)^(-m/4) Gamma((4-m)/4)`
/// for `m = 2, 3`, and
/// `pi^-1 (m-2)^-1 m^(-1/(m-1)) Gamma((m+2)/2)^(2/m)` for `m >= 4`.
pub fn remark0_constant(m: usize) -> Result<f64> {
    let mf = m as f64;
    match m {
        0 | 1 => Err(param("constant defined for m >= 2")),
        2 | 3 => Ok(2.0 * (8.0 * PI).powf(-mf / 4.0) * gamma((4.0 - mf) / 4.0)),
        _ => Ok(1.0 / PI / (mf - 2.0) * mf.powf(-1.0 / (mf - 1.0)) * gamma((mf + 2.0) / 2.0).powf(2.0 / mf)),
    }
}

/// Lower bound on `Phi(Omega)` in terms of `E(Omega)` and `lambda_1(Omega)`.
pub fn check_remark0(d: &DomainSpec, nodes: usize) -> Result<BoundReport> {
    if !d.is_connected() {
        return Err(Error::Unsupported(format!("{} is disconnected", d.label())));
    }
    let a = analyze(d, &PotentialSpec::Zero, nodes)?;
    remark0_report(&a, &ctx(d, &PotentialSpec::Zero))
}

fn remark0_report(a: &Analysis, context: &str) -> Result<BoundReport> {
    let m = a.dim;
    let k = remark0_constant(m)?;
    let e = a.eigen_efficiency();
    let mf = m as f64;
    let denom = if m <= 3 {
        1.0 + k * a.lambda1.powf(mf / 4.0) * a.measure.sqrt() * (1.0 - e).sqrt()
    } else {
        1.0 + k * a.lambda1 * a.measure.powf(2.0 / mf) * (1.0 - e).powf(1.0 / (mf - 1.0))
    };
    Ok(BoundReport::new("remark0", context, a.phi(), e / denom, Direction::Ge))
}

/// Bounds on `||v||_inf` and `lambda_1` in terms of `Phi` and `E`.
pub fn check_thm9(d: &DomainSpec, nodes: usize) -> Result<Vec<BoundReport>> {
    let a = analyze(d, &PotentialSpec::Zero, nodes)?;
    thm9_reports(&a, &ctx(d, &PotentialSpec::Zero))
}

fn thm9_reports(a: &Analysis, context: &str) -> Result<Vec<BoundReport>> {
    if a.dim < 2 {
        return Err(param("bounds stated for m >= 2"));
    }
    let mf = a.dim as f64;
    let w = unit_ball_volume(a.dim);
    let q = 4.0 * mf * mf / ((mf + 2.0) * (mf + 2.0));
    let vol = (a.measure / w).powf(2.0 / mf);
    let mut c = BoundReport::new("p22c", context, a.lambda1, q / vol / (1.0 - a.eigen_efficiency()), Direction::Ge);
    if !(a.connected && a.eigen_simple) {
        c = c.inapplicable();
    }
    Ok(vec![
        BoundReport::new("p22a", context, a.torsion_sup, vol * (1.0 - a.phi()) / q, Direction::Le),
        BoundReport::new("p22b", context, a.lambda1, q / vol / (1.0 - a.phi()), Direction::Ge),
        c,
    ])
}

/// Dirichlet energy of the piecewise linear interpolant of a profile.
pub fn dirichlet_energy(u: &Profile) -> f64 {
    let x = &u.grid.nodes;
    let f = &u.values;
    let surface = match u.grid.kind {
        GridKind::Line => None,
        GridKind::Radial { dim } => Some((dim, dim as f64 * unit_ball_volume(dim))),
    };
    (0..x.len() - 1)
        .map(|i| {
            let h = x[i + 1] - x[i];
            let g2 = ((f[i + 1] - f[i]) / h).powi(2);
            match surface {
                None => g2 * h,
                Some((m, s)) => g2 * s * (x[i + 1].powi(m as i32) - x[i].powi(m as i32)) / m as f64,
            }
        })
        .sum()
}

/// `(omega_m/|Omega|)^((m-2)/m) (||u||_inf - mean u) int |grad u|^2
///   >= 4 m^2/(m+2)^2 omega_m ||u||_inf^3`
/// for profiles whose mean is at least `2 ||u||_inf/(m+2)`.
pub fn check_raw_p22(u: &Profile) -> Result<BoundReport> {
    let m = u.domain.dim();
    let mf = m as f64;
    let vol = measure(&u.domain)?;
    let w = unit_ball_volume(m);
    let sup = u.sup();
    if !(sup > 0.0) {
        return Err(param("zero profile"));
    }
    let mean = u.l1() / vol;
    let lhs = (w / vol).powf((mf - 2.0) / mf) * (sup - mean) * dirichlet_energy(u);
    let rhs = 4.0 * mf * mf / ((mf + 2.0) * (mf + 2.0)) * w * sup.powi(3);
    let r = BoundReport::new("p22_raw", &u.domain.label(), lhs, rhs, Direction::Ge);
    Ok(if mean >= 2.0 * sup / (mf + 2.0) * (1.0 - DEFAULT_TOL) { r } else { r.inapplicable() })
}

/// `Phi(Omega) >= 2/(m(m+2))` on convex domains.
pub fn check_e70(d: &DomainSpec, nodes: usize) -> Result<BoundReport> {
    if !d.is_convex() {
        return Err(Error::Unsupported(format!("{} is not convex", d.label())));
    }
    let phi = efficiency_torsion_with(d, &PotentialSpec::Zero, nodes)?;
    let m = d.dim() as f64;
    Ok(BoundReport::new("e70", &ctx(d, &PotentialSpec::Zero), phi, 2.0 / (m * (m + 2.0)), Direction::Ge))
}

/// On boxes `(0,1)^(m-1) x (0,n)`: growth of `lambda_1 (1-E) |Omega|^(2/m)`
/// and `lambda_1 (1-Phi) |Omega|^(2/m)`, and `Phi <= 2/3`.
pub fn check_remark2(m: usize, n_values: &[f64]) -> Result<Vec<BoundReport>> {
    if m < 2 {
        return Err(param("needs m >= 2"));
    }
    let mf = m as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64, f64)> = None;
    for &n in n_values {
        let mut sides = vec![1.0; m - 1];
        sides.push(n);
        let (lambda, e) = box_first_eigen(&sides)?;
        let (l1, sup) = box_torsion_norms(&sides)?;
        let phi = l1 / (n * sup);
        let scale = n.powf(2.0 / mf);
        let ge = lambda * (1.0 - e) * scale;
        let gt = lambda * (1.0 - phi) * scale;
        let context = format!("box m={m} n={n}");
        out.push(BoundReport::new(
            "remark2_eigen",
            &context,
            ge,
            (mf - 1.0) * (1.0 - (2.0 / PI).powi(m as i32)) * PI * PI * scale,
            Direction::Ge,
        ));
        out.push(BoundReport::new("remark2_torsion", &context, gt, (mf - 1.0) * PI * PI * scale / 3.0, Direction::Ge));
        out.push(BoundReport::new("remark2_phi", &context, phi, 2.0 / 3.0, Direction::Le));
        if let Some((pn, pe, pt)) = prev {
            let c = format!("box m={m} n={pn}->{n}");
            out.push(BoundReport::new("remark2_eigen_growth", &c, ge, pe, Direction::Ge));
            out.push(BoundReport::new("remark2_torsion_growth", &c, gt, pt, Direction::Ge));
        }
        prev = Some((n, ge, gt));
    }
    Ok(out)
}

/// `(4 + 3 m log 2) Phi(Omega, V) >= (int phi_1)^2 / |Omega|`.
pub fn check_e68(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<BoundReport> {
    let a = analyze(d, v, nodes)?;
    e68_report(&a, &ctx(d, v))
}

fn e68_report(a: &Analysis, context: &str) -> Result<BoundReport> {
    if !a.eigen_simple {
        return Err(Error::Unsupported("degenerate first eigenvalue".into()));
    }
    Ok(BoundReport::new(
        "e68",
        context,
        lemma1_constant(a.dim) * a.phi(),
        a.eigen_l1 * a.eigen_l1 / a.measure,
        Direction::Ge,
    ))
}

/// Every check that applies to a domain with potential `v`, from one analysis.
pub fn standard_checks(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<Vec<BoundReport>> {
    let a = analyze(d, v, nodes)?;
    let context = ctx(d, v);
    let mut out = lemma1_reports(&a, &context);
    if a.eigen_simple {
        out.push(e68_report(&a, &context)?);
    }
    if v.as_constant() == Some(0.0) {
        if a.dim >= 2 {
            out.extend(thm9_reports(&a, &context)?);
            if a.connected {
                out.push(remark0_report(&a, &context)?);
            }
        }
        if d.is_convex() {
            out.push(BoundReport::new(
                "e70",
                &context,
                a.phi(),
                2.0 / (a.dim as f64 * (a.dim as f64 + 2.0)),
                Direction::Ge,
            ));
        }
    }
    Ok(out)
}

/// One entry of the standard battery.
#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    /// Lemma 1, the eigenfunction mass check and, for `V = 0`, the
    /// geometric bounds.
    Standard(DomainSpec, PotentialSpec),
    ConstantPotential(DomainSpec, f64),
    EtaFamily(Vec<(DomainSpec, PotentialSpec)>, f64),
    Decay(DomainSpec, f64),
    Boxes(usize, Vec<f64>),
    /// Ball torsion in dimension `m` multiplied by a scale.
    BallTorsionP22(usize, f64),
    /// Obstacle profile with plateau radius `l`.
    ObstacleP22(usize, f64),
    /// Plateau eigenfunction profile on the unit disc.
    PlateauP22(f64),
    /// `f(theta)` against its minimum and, for `m >= 3`, the two-piece relaxation.
    ObstacleCurve(usize, Vec<f64>),
}

impl Instance {
    pub fn evaluate(&self, nodes: usize) -> Result<Vec<BoundReport>> {
        match self {
            Instance::Standard(d, v) => standard_checks(d, v, nodes),
            Instance::ConstantPotential(d, c) => check_thm1_constant(d, *c, nodes),
            Instance::EtaFamily(f, eta) => check_thm1_eta(f, *eta, nodes),
            Instance::Decay(d, c) => check_e50(d, *c, nodes),
            Instance::Boxes(m, n) => check_remark2(*m, n),
            Instance::BallTorsionP22(m, s) => {
                let grid = crate::Grid::radial(*m, 0.0, 1.0, nodes)?;
                let values = grid.nodes.iter().map(|r| s * (1.0 - r * r) / (2.0 * *m as f64)).collect();
                let r = check_raw_p22(&Profile { grid, values, domain: DomainSpec::ball(*m, 1.0)? })?;
                Ok(vec![with_context(r, format!("ball torsion m={m} scale={s}"))])
            }
            Instance::ObstacleP22(m, l) => {
                let r = check_raw_p22(&crate::obstacle::obstacle_solution(*m, *l, nodes)?.profile)?;
                Ok(vec![with_context(r, format!("obstacle profile m={m} l={l}"))])
            }
            Instance::PlateauP22(eps) => {
                let r = check_raw_p22(&crate::solver::theorem7_profile(2, *eps, nodes)?.profile)?;
                Ok(vec![with_context(r, format!("plateau eigenfunction m=2 eps={eps}"))])
            }
            Instance::ObstacleCurve(m, thetas) => {
                use crate::obstacle::{f_lower_bound_power, f_minimum, f_of_theta};
                let mut out = Vec::new();
                for &t in thetas {
                    let f = f_of_theta(*m, t)?;
                    let context = format!("obstacle m={m} theta={t}");
                    out.push(BoundReport::new("f_minimum", &context, f, f_minimum(*m), Direction::Ge));
                    if *m >= 3 {
                        let relaxed = f_lower_bound_power(*m, t, 3.0)?;
                        out.push(BoundReport::new("f_relaxation", &context, f, relaxed, Direction::Ge));
                    }
                }
                Ok(out)
            }
        }
    }
}

fn with_context(mut r: BoundReport, context: String) -> BoundReport {
    r.context = context;
    r
}

/// Deterministic enumeration of the standard battery.
pub fn battery_instances() -> Result<Vec<Instance>> {
    use crate::closed_form::{example2_critical_beta, example2_domain};
    use Instance::*;
    let zero = PotentialSpec::Zero;
    let mut out = Vec::new();
    let mut standard = |d: DomainSpec, v: PotentialSpec| out.push(Standard(d, v));

    standard(DomainSpec::interval(0.0, 1.0)?, zero.clone());
    standard(DomainSpec::interval(-1.0, 2.0)?, zero.clone());
    for m in 1..=6 {
        standard(DomainSpec::ball(m, 1.0)?, zero.clone());
    }
    standard(DomainSpec::ball(2, 2.5)?, zero.clone());
    standard(DomainSpec::annulus(2, 0.5, 1.0)?, zero.clone());
    standard(DomainSpec::annulus(3, 0.25, 1.0)?, zero.clone());
    standard(DomainSpec::annulus(4, 0.5, 1.5)?, zero.clone());
    for sides in [vec![1.0, 1.0], vec![1.0, 20.0], vec![1.0, 1.0, 1.0], vec![1.0, 2.0, 3.0], vec![1.0; 4]] {
        standard(DomainSpec::boxed(sides)?, zero.clone());
    }
    for m in 1..=3 {
        let d = example2_domain(m, 20, 1.0, example2_critical_beta(m, 1.0), 1.0)?;
        standard(d, zero.clone());
    }
    for c in [5.0, 100.0] {
        standard(DomainSpec::interval(0.0, 1.0)?, PotentialSpec::Constant { c });
    }
    for nu in [5.0, 10.0, 20.0] {
        standard(DomainSpec::interval(-1.0, 1.0)?, PotentialSpec::SymmetricWell { nu, eps: 0.2 });
    }
    standard(
        DomainSpec::interval(0.0, 1.0)?,
        PotentialSpec::PiecewiseConstant { breakpoints: vec![0.3, 0.7], values: vec![0.0, 50.0, 5.0] },
    );
    standard(DomainSpec::ball(3, 1.0)?, PotentialSpec::Constant { c: 10.0 });

    for c in [0.0, 5.0, 100.0] {
        out.push(ConstantPotential(DomainSpec::interval(0.0, 1.0)?, c));
    }
    out.push(ConstantPotential(DomainSpec::ball(3, 1.0)?, PI * PI));
    out.push(ConstantPotential(DomainSpec::ball(2, 1.0)?, 3.0));
    out.push(ConstantPotential(DomainSpec::annulus(2, 0.5, 1.0)?, 20.0));

    let eta = 0.5;
    let intervals = (1..=5)
        .map(|n| {
            let len = n as f64;
            let c = PI * PI / (len * len) * eta / 2.0;
            Ok((DomainSpec::interval(0.0, len)?, PotentialSpec::Constant { c }))
        })
        .collect::<Result<Vec<_>>>()?;
    out.push(EtaFamily(intervals, eta));
    let balls = [1.0, 2.0, 4.0]
        .iter()
        .map(|&r| Ok((DomainSpec::ball(2, r)?, PotentialSpec::Zero)))
        .collect::<Result<Vec<_>>>()?;
    out.push(EtaFamily(balls, eta));
    let wells = [1.5, 2.0, 5.0, 10.0]
        .iter()
        .map(|&nu| Ok((DomainSpec::interval(-1.0, 1.0)?, PotentialSpec::SymmetricWell { nu, eps: 0.2 })))
        .collect::<Result<Vec<_>>>()?;
    out.push(EtaFamily(wells, 2.0));

    for c in [0.0, 1e2, 1e4] {
        out.push(Decay(DomainSpec::interval(0.0, 1.0)?, c));
    }
    out.push(Decay(DomainSpec::ball(2, 1.0)?, 10.0));
    out.push(Decay(DomainSpec::ball(2, 1.0)?, 1e3));
    out.push(Decay(DomainSpec::ball(3, 1.0)?, 1e3));
    out.push(Decay(DomainSpec::annulus(2, 0.5, 1.0)?, 100.0));
    out.push(Decay(example2_domain(2, 5, 1.0, example2_critical_beta(2, 1.0), 1.0)?, 1e3));

    out.push(Boxes(2, vec![1.0, 2.0, 5.0, 10.0, 20.0]));
    out.push(Boxes(3, vec![1.0, 2.0, 5.0, 10.0]));

    for m in 2..=6 {
        out.push(BallTorsionP22(m, 1.0));
    }
    out.push(BallTorsionP22(3, 7.0));
    out.push(ObstacleP22(2, crate::obstacle::l_of_theta(2, 0.6)?));
    out.push(ObstacleP22(3, 0.3));
    out.push(PlateauP22(0.2));

    for m in 2..=6 {
        let t0 = crate::obstacle::theta_min(m);
        let thetas = (0..6).map(|k| t0 + (1.0 - t0) * k as f64 / 6.0).collect();
        out.push(ObstacleCurve(m, thetas));
    }
    Ok(out)
}

/// Runs the standard battery; report order follows instance order.
pub fn run_battery(mode: crate::ExecutionMode, nodes: usize) -> Result<Vec<BoundReport>> {
    let instances = battery_instances()?;
    let results = crate::exec::map_ordered(mode, &instances, |i| i.evaluate(nodes));
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok(out)
}
