//! Efficiency functionals and finite-n localisation estimates.

use std::f64::consts::PI;

use serde::Serialize;
use statrs::function::beta::beta;

use crate::closed_form::{
    ball_torsion_norms, box_eigen_l1, box_first_eigen, box_torsion_norms, example1_coefficients,
    example1_mass_split, example2_norms, example2_volumes,
};
use crate::domains::{measure, simpson, unit_ball_volume, DomainSpec, PotentialSpec, DEFAULT_GRID_NODES};
use crate::error::{param, Error, Result};
use crate::exec::{map_ordered, ExecutionMode};
use crate::solver::{
    first_eigenpair_1d, first_eigenpair_radial, solve_torsion_1d, solve_torsion_radial, Profile,
    RadialBc,
};

/// `||f||_1 / (|Omega| ||f||_inf)`.
pub fn mean_to_max(f: &Profile) -> Result<f64> {
    let sup = f.sup();
    if !(sup > 0.0) {
        return Err(param("mean-to-max of a zero profile"));
    }
    Ok(f.l1() / (measure(&f.domain)? * sup))
}

/// Norms of the torsion function and the first eigenfunction of one instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub measure: f64,
    pub dim: usize,
    pub connected: bool,
    pub torsion_l1: f64,
    pub torsion_sup: f64,
    pub lambda1: f64,
    /// L1 and sup norms of the L2-normalised first eigenfunction.
    pub eigen_l1: f64,
    pub eigen_sup: f64,
    /// False when the bottom of the spectrum is degenerate (several largest balls).
    pub eigen_simple: bool,
}

impl Analysis {
    pub fn phi(&self) -> f64 {
        self.torsion_l1 / (self.measure * self.torsion_sup)
    }

    pub fn eigen_efficiency(&self) -> f64 {
        self.eigen_l1 / (self.measure * self.eigen_sup)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct EigenData {
    lambda1: f64,
    l1: f64,
    sup: f64,
    simple: bool,
}

fn constant_or_unsupported(d: &DomainSpec, v: &PotentialSpec) -> Result<f64> {
    v.as_constant().ok_or_else(|| {
        Error::Unsupported(format!("{} on {} (non-constant potential)", v.label(), d.label()))
    })
}

fn is_unit_symmetric(a: f64, b: f64) -> bool {
    a == -1.0 && b == 1.0
}

/// `(||v||_1, ||v||_inf)` for the torsion function of `(d, v)`.
pub fn torsion_norms(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<(f64, f64)> {
    d.validate()?;
    v.validate()?;
    match d {
        DomainSpec::Interval { a, b } => {
            let len = b - a;
            if v.as_constant() == Some(0.0) {
                return Ok((len.powi(3) / 12.0, len * len / 8.0));
            }
            if let (PotentialSpec::SymmetricWell { nu, eps }, true) = (v, is_unit_symmetric(*a, *b)) {
                let (inner, outer) = example1_mass_split(*nu, *eps)?;
                return Ok((2.0 * (inner + outer), example1_coefficients(*nu, *eps)?.gamma));
            }
            let p = solve_torsion_1d(d, v, nodes)?;
            Ok((p.l1(), p.sup()))
        }
        DomainSpec::Ball { dim, radius } => {
            let c = constant_or_unsupported(d, v)?;
            if c == 0.0 {
                return Ok(ball_torsion_norms(*dim, *radius));
            }
            let p = solve_torsion_radial(d, v, nodes)?;
            Ok((p.l1(), p.sup()))
        }
        DomainSpec::Annulus { .. } => {
            constant_or_unsupported(d, v)?;
            let p = solve_torsion_radial(d, v, nodes)?;
            Ok((p.l1(), p.sup()))
        }
        DomainSpec::BallUnion { dim, balls } => {
            let mut l1 = 0.0;
            let mut sup: f64 = 0.0;
            for b in balls {
                let (bl, bs) = torsion_norms(&DomainSpec::ball(*dim, b.radius)?, v, nodes)?;
                l1 += bl;
                sup = sup.max(bs);
            }
            Ok((l1, sup))
        }
        DomainSpec::Box { sides, .. } => {
            if constant_or_unsupported(d, v)? != 0.0 {
                return Err(Error::Unsupported("box torsion with a potential".into()));
            }
            box_torsion_norms(sides)
        }
    }
}

fn eigen_data(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<EigenData> {
    d.validate()?;
    v.validate()?;
    match d {
        DomainSpec::Interval { a, b } => {
            if let Some(c) = v.as_constant() {
                let len = b - a;
                let amp = (2.0 / len).sqrt();
                return Ok(EigenData {
                    lambda1: PI * PI / (len * len) + c,
                    l1: amp * 2.0 * len / PI,
                    sup: amp,
                    simple: true,
                });
            }
            let e = first_eigenpair_1d(d, v, nodes)?;
            Ok(EigenData {
                lambda1: e.lambda1,
                l1: e.eigenfunction.l1(),
                sup: e.eigenfunction.sup(),
                simple: true,
            })
        }
        DomainSpec::Ball { .. } | DomainSpec::Annulus { .. } => {
            constant_or_unsupported(d, v)?;
            let e = first_eigenpair_radial(d, v, RadialBc::DirichletAll, nodes)?;
            Ok(EigenData {
                lambda1: e.lambda1,
                l1: e.eigenfunction.l1(),
                sup: e.eigenfunction.sup(),
                simple: true,
            })
        }
        DomainSpec::BallUnion { dim, balls } => {
            let r_max = balls.iter().map(|b| b.radius).fold(0.0, f64::max);
            let count = balls.iter().filter(|b| b.radius == r_max).count();
            let e = eigen_data(&DomainSpec::ball(*dim, r_max)?, v, nodes)?;
            Ok(EigenData { simple: count == 1, ..e })
        }
        DomainSpec::Box { sides, .. } => {
            let c = constant_or_unsupported(d, v)?;
            let (lambda, _) = box_first_eigen(sides)?;
            Ok(EigenData {
                lambda1: lambda + c,
                l1: box_eigen_l1(sides)?,
                sup: sides.iter().map(|l| (2.0 / l).sqrt()).product(),
                simple: true,
            })
        }
    }
}

/// Torsion and eigen norms, by closed form where one exists.
pub fn analyze(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<Analysis> {
    let (torsion_l1, torsion_sup) = torsion_norms(d, v, nodes)?;
    let e = eigen_data(d, v, nodes)?;
    Ok(Analysis {
        measure: measure(d)?,
        dim: d.dim(),
        connected: d.is_connected(),
        torsion_l1,
        torsion_sup,
        lambda1: e.lambda1,
        eigen_l1: e.l1,
        eigen_sup: e.sup,
        eigen_simple: e.simple,
    })
}

/// Torsion efficiency `Phi(Omega, V)`.
pub fn efficiency_torsion(d: &DomainSpec, v: &PotentialSpec) -> Result<f64> {
    efficiency_torsion_with(d, v, DEFAULT_GRID_NODES)
}

pub fn efficiency_torsion_with(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<f64> {
    let (l1, sup) = torsion_norms(d, v, nodes)?;
    Ok(l1 / (measure(d)? * sup))
}

/// Eigenfunction efficiency `E(Omega, V)`; connected domains only.
pub fn efficiency_eigen(d: &DomainSpec, v: &PotentialSpec) -> Result<f64> {
    efficiency_eigen_with(d, v, DEFAULT_GRID_NODES)
}

pub fn efficiency_eigen_with(d: &DomainSpec, v: &PotentialSpec, nodes: usize) -> Result<f64> {
    if !d.is_connected() {
        return Err(Error::Unsupported(format!(
            "eigen efficiency on disconnected {}",
            d.label()
        )));
    }
    let e = eigen_data(d, v, nodes)?;
    Ok(e.l1 / (measure(d)? * e.sup))
}

/// Mass and volume of a candidate set inside one member of a family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MassSample {
    pub set_mass: f64,
    pub total_mass: f64,
    pub set_volume: f64,
    pub total_volume: f64,
}

/// A sequence of profiles `f_n` with candidate sets `A_n`.
pub trait LocalisationFamily: Sync {
    fn id(&self) -> String;
    /// `int_{A_n} |f_n|^p`, `||f_n||_p^p` and the two volumes.
    fn sample(&self, n: f64, p: f64) -> Result<MassSample>;
}

/// Torsion functions of the symmetric well with `nu = n`, `eps = c n^-alpha`,
/// and `A_n = (-eps, eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Example1Family {
    pub alpha_exp: f64,
    pub c: f64,
}

impl Example1Family {
    pub fn eps(&self, n: f64) -> f64 {
        self.c * n.powf(-self.alpha_exp)
    }
}

impl LocalisationFamily for Example1Family {
    fn id(&self) -> String {
        format!("well(alpha={},c={})", self.alpha_exp, self.c)
    }

    fn sample(&self, n: f64, p: f64) -> Result<MassSample> {
        let eps = self.eps(n);
        if !(eps < 1.0) {
            return Err(param(format!("well width {eps} >= 1 at n={n}")));
        }
        let (inner, outer) = if p == 1.0 {
            example1_mass_split(n, eps)?
        } else {
            let co = example1_coefficients(n, eps)?;
            let layer = (eps + 50.0 / n).min(1.0);
            let inner = simpson(|x| co.v1(x).powf(p), 0.0, eps, 2000);
            let outer = simpson(|x| co.v2(x).max(0.0).powf(p), eps, layer, 4000)
                + if layer < 1.0 { simpson(|x| co.v2(x).max(0.0).powf(p), layer, 1.0, 4000) } else { 0.0 };
            (inner, outer)
        };
        Ok(MassSample {
            set_mass: 2.0 * inner,
            total_mass: 2.0 * (inner + outer),
            set_volume: 2.0 * eps,
            total_volume: 2.0,
        })
    }
}

/// Torsion functions of the union of one ball of radius `c n^-beta` and `n`
/// balls of radius `n^-alpha`, with `A_n` the distinguished ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Example2Family {
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

/// `int_B v_B^p` for the torsion function of a ball of radius `r` in R^m.
pub fn ball_torsion_lp_pow(m: usize, r: f64, p: f64) -> f64 {
    let mf = m as f64;
    mf * unit_ball_volume(m) * (2.0 * mf).powf(-p) * r.powf(2.0 * p + mf) * beta(mf / 2.0, p + 1.0) / 2.0
}

impl LocalisationFamily for Example2Family {
    fn id(&self) -> String {
        format!("balls(m={},alpha={},beta={},c={})", self.m, self.alpha, self.beta, self.c)
    }

    fn sample(&self, n: f64, p: f64) -> Result<MassSample> {
        let (big_vol, total_vol) = example2_volumes(self.m, n, self.alpha, self.beta, self.c)?;
        let (set_mass, total_mass) = if p == 1.0 {
            let (total, big) = example2_norms(self.m, n, self.alpha, self.beta, self.c)?;
            (big, total)
        } else {
            let big = ball_torsion_lp_pow(self.m, self.c * n.powf(-self.beta), p);
            let small = n * ball_torsion_lp_pow(self.m, n.powf(-self.alpha), p);
            (big, big + small)
        };
        Ok(MassSample { set_mass, total_mass, set_volume: big_vol, total_volume: total_vol })
    }
}

/// Family built from closures: a profile per `n` and the candidate set as a
/// list of `[lo, hi]` pieces in the profile's coordinate (radial shells on
/// radial grids).
pub struct ProfileFamily<F, S> {
    pub id: String,
    pub profile: F,
    pub sets: S,
}

impl<F, S> LocalisationFamily for ProfileFamily<F, S>
where
    F: Fn(f64) -> Result<Profile> + Sync,
    S: Fn(f64) -> Vec<(f64, f64)> + Sync,
{
    fn id(&self) -> String {
        self.id.clone()
    }

    fn sample(&self, n: f64, p: f64) -> Result<MassSample> {
        let prof = (self.profile)(n)?;
        let pieces = (self.sets)(n);
        let set_mass = pieces.iter().map(|(lo, hi)| prof.integrate_between(*lo, *hi, p)).sum();
        let set_volume = pieces
            .iter()
            .map(|(lo, hi)| match prof.grid.kind {
                crate::domains::GridKind::Line => hi - lo,
                crate::domains::GridKind::Radial { dim } => {
                    unit_ball_volume(dim) * (hi.powi(dim as i32) - lo.max(0.0).powi(dim as i32))
                }
            })
            .sum();
        Ok(MassSample {
            set_mass,
            total_mass: prof.lp_norm_pow(p),
            set_volume,
            total_volume: measure(&prof.domain)?,
        })
    }
}

/// Outcome of a localisation estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classification {
    NoLocalisation,
    KappaLocalisation(f64),
    Localisation,
}

impl Classification {
    pub fn tag(&self) -> &'static str {
        match self {
            Classification::NoLocalisation => "none",
            Classification::KappaLocalisation(_) => "kappa",
            Classification::Localisation => "full",
        }
    }
}

impl Serialize for Classification {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.tag())
    }
}

/// Default threshold for [`classify_localisation`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalisationEntry {
    pub n: f64,
    pub mass_fraction: f64,
    pub volume_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalisationReport {
    pub family_id: String,
    pub p: f64,
    pub entries: Vec<LocalisationEntry>,
    pub kappa_hat: f64,
    /// Fitted decay exponent of the correction, when the fit succeeded.
    pub fitted_exponent: Option<f64>,
    pub low_confidence: bool,
    pub classification: Classification,
}

/// Result of the three-point power-law fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerLawFit {
    /// The last three values agree; the sequence has settled.
    Settled(f64),
    Fitted { kappa: f64, q: f64 },
    /// No exponent in `(0, 3]` explains the data.
    Failed(f64),
}

impl PowerLawFit {
    pub fn kappa(&self) -> f64 {
        match self {
            PowerLawFit::Settled(k) | PowerLawFit::Failed(k) => *k,
            PowerLawFit::Fitted { kappa, .. } => *kappa,
        }
    }
}

/// Fits `f(n) = kappa + a n^-q` through the last three points.
pub fn power_law_extrapolate(n: &[f64], f: &[f64]) -> PowerLawFit {
    let k = n.len();
    let last = f[k - 1];
    if k < 3 {
        return PowerLawFit::Failed(last);
    }
    let (n1, n2, n3) = (n[k - 3], n[k - 2], n[k - 1]);
    let (d12, d23) = (f[k - 3] - f[k - 2], f[k - 2] - f[k - 1]);
    let scale = f[k - 3].abs().max(last.abs()).max(f64::MIN_POSITIVE);
    if d12.abs() <= 1e-13 * scale && d23.abs() <= 1e-13 * scale {
        return PowerLawFit::Settled(last);
    }
    if d23 == 0.0 || d12 / d23 <= 0.0 {
        return PowerLawFit::Failed(last);
    }
    let target = d12 / d23;
    let g = |q: f64| (n1.powf(-q) - n2.powf(-q)) / (n2.powf(-q) - n3.powf(-q)) - target;
    let (mut lo, mut hi) = (1e-9, 3.0);
    let glo = g(lo);
    if glo.signum() == g(hi).signum() {
        return PowerLawFit::Failed(last);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == glo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q = 0.5 * (lo + hi);
    let a = d23 / (n2.powf(-q) - n3.powf(-q));
    PowerLawFit::Fitted { kappa: last - a * n3.powf(-q), q }
}

/// Thresholds an estimate into the three localisation regimes.
pub fn classify_kappa(kappa_hat: f64, tol: f64) -> Classification {
    if kappa_hat < tol {
        Classification::NoLocalisation
    } else if kappa_hat > 1.0 - tol {
        Classification::Localisation
    } else {
        Classification::KappaLocalisation(kappa_hat)
    }
}

pub fn classify_localisation(report: &LocalisationReport, tol: f64) -> Result<Classification> {
    if report.entries.len() < 3 {
        return Err(param("classification needs at least three entries"));
    }
    Ok(classify_kappa(report.kappa_hat, tol))
}

/// Mass and volume fractions along `n_values`, with an extrapolated limit.
pub fn kappa_estimate(
    family: &dyn LocalisationFamily,
    p: f64,
    n_values: &[f64],
    mode: ExecutionMode,
) -> Result<LocalisationReport> {
    if !(p >= 1.0) {
        return Err(param(format!("need p >= 1, got {p}")));
    }
    if n_values.is_empty() || n_values.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(param("n values must be strictly increasing"));
    }
    let samples = map_ordered(mode, n_values, |&n| family.sample(n, p));
    let mut entries = Vec::with_capacity(n_values.len());
    for (&n, s) in n_values.iter().zip(samples) {
        let s = s?;
        entries.push(LocalisationEntry {
            n,
            mass_fraction: (s.set_mass / s.total_mass).clamp(0.0, 1.0),
            volume_fraction: (s.set_volume / s.total_volume).clamp(0.0, 1.0),
        });
    }
    if entries.windows(2).any(|w| !(w[1].volume_fraction < w[0].volume_fraction)) {
        return Err(Error::InvalidSetSequence(
            "volume fractions must decrease along n".into(),
        ));
    }
    let mass: Vec<f64> = entries.iter().map(|e| e.mass_fraction).collect();
    let fit = power_law_extrapolate(n_values, &mass);
    let kappa_hat = fit.kappa().clamp(0.0, 1.0);
    Ok(LocalisationReport {
        family_id: family.id(),
        p,
        entries,
        kappa_hat,
        fitted_exponent: match fit {
            PowerLawFit::Fitted { q, .. } => Some(q),
            _ => None,
        },
        low_confidence: matches!(fit, PowerLawFit::Failed(_)),
        classification: classify_kappa(kappa_hat, DEFAULT_CLASSIFY_TOL),
    })
}
