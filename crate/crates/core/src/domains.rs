//! Domains, potentials, measures and quadrature grids.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Default number of nodes per linear or radial direction.
pub const DEFAULT_GRID_NODES: usize = 4096;

/// Volume of the unit ball in R^m.
pub fn unit_ball_volume(m: usize) -> f64 {
    match m {
        1 => 2.0,
        2 => std::f64::consts::PI,
        _ => {
            let h = m as f64 / 2.0;
            (h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0)).exp()
        }
    }
}

/// A ball inside a [`DomainSpec::BallUnion`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawDomain {
    Interval { a: f64, b: f64 },
    Ball { dim: usize, radius: f64 },
    Annulus { dim: usize, inner: f64, outer: f64 },
    BallUnion { dim: usize, balls: Vec<BallSpec> },
    Box { dim: usize, sides: Vec<f64> },
}

/// Geometric domain. Deserialization validates the geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDomain", into = "RawDomain")]
pub enum DomainSpec {
    Interval { a: f64, b: f64 },
    Ball { dim: usize, radius: f64 },
    Annulus { dim: usize, inner: f64, outer: f64 },
    BallUnion { dim: usize, balls: Vec<BallSpec> },
    /// Box `(0, L_1) x ... x (0, L_m)`.
    Box { dim: usize, sides: Vec<f64> },
}

impl TryFrom<RawDomain> for DomainSpec {
    type Error = Error;
    fn try_from(raw: RawDomain) -> Result<Self> {
        let d = match raw {
            RawDomain::Interval { a, b } => DomainSpec::Interval { a, b },
            RawDomain::Ball { dim, radius } => DomainSpec::Ball { dim, radius },
            RawDomain::Annulus { dim, inner, outer } => DomainSpec::Annulus { dim, inner, outer },
            RawDomain::BallUnion { dim, balls } => DomainSpec::BallUnion { dim, balls },
            RawDomain::Box { dim, sides } => DomainSpec::Box { dim, sides },
        };
        d.validate()?;
        Ok(d)
    }
}

impl From<DomainSpec> for RawDomain {
    fn from(d: DomainSpec) -> Self {
        match d {
            DomainSpec::Interval { a, b } => RawDomain::Interval { a, b },
            DomainSpec::Ball { dim, radius } => RawDomain::Ball { dim, radius },
            DomainSpec::Annulus { dim, inner, outer } => RawDomain::Annulus { dim, inner, outer },
            DomainSpec::BallUnion { dim, balls } => RawDomain::BallUnion { dim, balls },
            DomainSpec::Box { dim, sides } => RawDomain::Box { dim, sides },
        }
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidDomain(msg.into())
}

fn finite_pos(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl DomainSpec {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        let d = DomainSpec::Interval { a, b };
        d.validate()?;
        Ok(d)
    }

    pub fn ball(dim: usize, radius: f64) -> Result<Self> {
        let d = DomainSpec::Ball { dim, radius };
        d.validate()?;
        Ok(d)
    }

    pub fn annulus(dim: usize, inner: f64, outer: f64) -> Result<Self> {
        let d = DomainSpec::Annulus { dim, inner, outer };
        d.validate()?;
        Ok(d)
    }

    pub fn ball_union(dim: usize, balls: Vec<BallSpec>) -> Result<Self> {
        let d = DomainSpec::BallUnion { dim, balls };
        d.validate()?;
        Ok(d)
    }

    pub fn boxed(sides: Vec<f64>) -> Result<Self> {
        let d = DomainSpec::Box { dim: sides.len(), sides };
        d.validate()?;
        Ok(d)
    }

    /// Checks the geometric invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            DomainSpec::Interval { a, b } => {
                if !(a.is_finite() && b.is_finite() && a < b) {
                    return Err(bad(format!("interval needs a < b, got ({a}, {b})")));
                }
            }
            DomainSpec::Ball { dim, radius } => {
                if *dim == 0 {
                    return Err(bad("dimension must be positive"));
                }
                if !finite_pos(*radius) {
                    return Err(bad(format!("ball radius must be positive, got {radius}")));
                }
            }
            DomainSpec::Annulus { dim, inner, outer } => {
                if *dim < 2 {
                    return Err(bad("annulus needs dimension at least 2"));
                }
                if !(finite_pos(*inner) && outer.is_finite() && inner < outer) {
                    return Err(bad(format!("annulus needs 0 < inner < outer, got ({inner}, {outer})")));
                }
            }
            DomainSpec::BallUnion { dim, balls } => {
                if *dim == 0 {
                    return Err(bad("dimension must be positive"));
                }
                if balls.is_empty() {
                    return Err(bad("ball union is empty"));
                }
                for (i, b) in balls.iter().enumerate() {
                    if b.center.len() != *dim {
                        return Err(bad(format!("ball {i} center has wrong dimension")));
                    }
                    if !finite_pos(b.radius) || b.center.iter().any(|c| !c.is_finite()) {
                        return Err(bad(format!("ball {i} has invalid center or radius")));
                    }
                }
                for i in 0..balls.len() {
                    for j in i + 1..balls.len() {
                        let dist = euclid(&balls[i].center, &balls[j].center);
                        if dist <= balls[i].radius + balls[j].radius {
                            return Err(bad(format!("balls {i} and {j} overlap")));
                        }
                    }
                }
            }
            DomainSpec::Box { dim, sides } => {
                if *dim == 0 || sides.len() != *dim {
                    return Err(bad("box needs one side per dimension"));
                }
                if sides.iter().any(|s| !finite_pos(*s)) {
                    return Err(bad("box sides must be positive"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            DomainSpec::Interval { .. } => 1,
            DomainSpec::Ball { dim, .. }
            | DomainSpec::Annulus { dim, .. }
            | DomainSpec::BallUnion { dim, .. }
            | DomainSpec::Box { dim, .. } => *dim,
        }
    }

    pub fn is_connected(&self) -> bool {
        match self {
            DomainSpec::BallUnion { balls, .. } => balls.len() == 1,
            DomainSpec::Annulus { dim, .. } => *dim >= 2,
            _ => true,
        }
    }

    pub fn is_convex(&self) -> bool {
        matches!(
            self,
            DomainSpec::Interval { .. } | DomainSpec::Ball { .. } | DomainSpec::Box { .. }
        )
    }

    /// Short human-readable label used in reports.
    pub fn label(&self) -> String {
        match self {
            DomainSpec::Interval { a, b } => format!("interval({a},{b})"),
            DomainSpec::Ball { dim, radius } => format!("ball(m={dim},R={radius})"),
            DomainSpec::Annulus { dim, inner, outer } => {
                format!("annulus(m={dim},{inner},{outer})")
            }
            DomainSpec::BallUnion { dim, balls } => {
                format!("ball_union(m={dim},k={})", balls.len())
            }
            DomainSpec::Box { sides, .. } => {
                let s: Vec<String> = sides.iter().map(|x| x.to_string()).collect();
                format!("box({})", s.join("x"))
            }
        }
    }
}

fn euclid(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
}

/// Lebesgue measure of the domain.
pub fn measure(d: &DomainSpec) -> Result<f64> {
    d.validate()?;
    Ok(match d {
        DomainSpec::Interval { a, b } => b - a,
        DomainSpec::Ball { dim, radius } => unit_ball_volume(*dim) * radius.powi(*dim as i32),
        DomainSpec::Annulus { dim, inner, outer } => {
            unit_ball_volume(*dim) * (outer.powi(*dim as i32) - inner.powi(*dim as i32))
        }
        DomainSpec::BallUnion { dim, balls } => {
            let w = unit_ball_volume(*dim);
            balls.iter().map(|b| w * b.radius.powi(*dim as i32)).sum()
        }
        DomainSpec::Box { sides, .. } => sides.iter().product(),
    })
}

/// Distance from `x` to the complement of the domain.
pub fn distance_to_boundary(d: &DomainSpec, x: &[f64]) -> Result<f64> {
    d.validate()?;
    if x.len() != d.dim() {
        return Err(Error::InvalidParameter(format!(
            "point has dimension {}, domain has {}",
            x.len(),
            d.dim()
        )));
    }
    let outside = || Error::OutsideDomain(x.to_vec());
    let dist = match d {
        DomainSpec::Interval { a, b } => (x[0] - a).min(b - x[0]),
        DomainSpec::Ball { radius, .. } => radius - norm(x),
        DomainSpec::Annulus { inner, outer, .. } => {
            let r = norm(x);
            (r - inner).min(outer - r)
        }
        DomainSpec::BallUnion { balls, .. } => balls
            .iter()
            .map(|b| b.radius - euclid(x, &b.center))
            .find(|s| *s > 0.0)
            .ok_or_else(outside)?,
        DomainSpec::Box { sides, .. } => x
            .iter()
            .zip(sides)
            .map(|(xi, l)| xi.min(l - xi))
            .fold(f64::INFINITY, f64::min),
    };
    if dist > 0.0 {
        Ok(dist)
    } else {
        Err(outside())
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Composite Simpson rule with `n` subintervals (rounded up to even).
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let n = (n.max(2) + 1) & !1;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Simpson on `[a, b]` split at the interior `breaks`.
fn simpson_pieces<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, breaks: &[f64], n: usize) -> f64 {
    let mut pts = vec![a];
    pts.extend(breaks.iter().copied().filter(|t| *t > a && *t < b));
    pts.push(b);
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| simpson(f, w[0], w[1], n))
        .sum()
}

const DECAY_PANEL: usize = 8192;

/// Integral over the domain of `exp(-sqrt(c) d(x) / 2)`.
pub fn boundary_decay_integral(d: &DomainSpec, c: f64) -> Result<f64> {
    d.validate()?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay rate must be >= 0, got {c}")));
    }
    if c == 0.0 {
        return measure(d);
    }
    let k = c.sqrt() / 2.0;
    // Boundary layer width beyond which the integrand is below e^-50.
    let layer = 50.0 / k;
    let ball = |m: usize, r_max: f64| {
        let s = m as f64 * unit_ball_volume(m);
        let f = |r: f64| s * r.powi(m as i32 - 1) * (-k * (r_max - r)).exp();
        simpson_pieces(&f, 0.0, r_max, &[r_max - layer], DECAY_PANEL)
    };
    Ok(match d {
        DomainSpec::Interval { a, b } => {
            let f = |x: f64| (-k * (x - a).min(b - x)).exp();
            let mid = 0.5 * (a + b);
            simpson_pieces(&f, *a, *b, &[a + layer, mid, b - layer], DECAY_PANEL)
        }
        DomainSpec::Ball { dim, radius } => ball(*dim, *radius),
        DomainSpec::BallUnion { dim, balls } => balls.iter().map(|b| ball(*dim, b.radius)).sum(),
        DomainSpec::Annulus { dim, inner, outer } => {
            let m = *dim;
            let s = m as f64 * unit_ball_volume(m);
            let f = |r: f64| s * r.powi(m as i32 - 1) * (-k * (r - inner).min(outer - r)).exp();
            let mid = 0.5 * (inner + outer);
            simpson_pieces(&f, *inner, *outer, &[inner + layer, mid, outer - layer], DECAY_PANEL)
        }
        DomainSpec::Box { .. } => {
            return Err(Error::Unsupported(
                "boundary decay integral on boxes".into(),
            ))
        }
    })
}

/// Non-negative potential.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant { c: f64 },
    /// One-dimensional step function: `values[i]` on the i-th piece cut by `breakpoints`.
    PiecewiseConstant { breakpoints: Vec<f64>, values: Vec<f64> },
    /// `nu^2` outside `(-eps, eps)`, zero inside.
    SymmetricWell { nu: f64, eps: f64 },
}

fn bad_pot(msg: impl Into<String>) -> Error {
    Error::InvalidPotential(msg.into())
}

impl PotentialSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            PotentialSpec::Zero => {}
            PotentialSpec::Constant { c } => {
                if !(c.is_finite() && *c >= 0.0) {
                    return Err(bad_pot(format!("constant must be >= 0, got {c}")));
                }
            }
            PotentialSpec::PiecewiseConstant { breakpoints, values } => {
                if values.len() != breakpoints.len() + 1 {
                    return Err(bad_pot("need exactly one more value than breakpoints"));
                }
                if breakpoints.windows(2).any(|w| !(w[0] < w[1]))
                    || breakpoints.iter().any(|b| !b.is_finite())
                {
                    return Err(bad_pot("breakpoints must be finite and increasing"));
                }
                if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return Err(bad_pot("values must be finite and non-negative"));
                }
            }
            PotentialSpec::SymmetricWell { nu, eps } => {
                if !(nu.is_finite() && *nu > 1.0) {
                    return Err(bad_pot(format!("well needs nu > 1, got {nu}")));
                }
                if !(*eps > 0.0 && *eps < 1.0) {
                    return Err(bad_pot(format!("well needs 0 < eps < 1, got {eps}")));
                }
            }
        }
        Ok(())
    }

    /// Pointwise value at a 1D coordinate (radial coordinate for constant potentials).
    pub fn value(&self, x: f64) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { c } => *c,
            PotentialSpec::PiecewiseConstant { breakpoints, values } => {
                values[breakpoints.partition_point(|b| *b <= x)]
            }
            PotentialSpec::SymmetricWell { nu, eps } => {
                if x.abs() < *eps {
                    0.0
                } else {
                    nu * nu
                }
            }
        }
    }

    /// Mean of the potential over `[lo, hi]`; exact for these step functions.
    pub fn cell_average(&self, lo: f64, hi: f64) -> f64 {
        if hi <= lo {
            return self.value(lo);
        }
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { c } => *c,
            PotentialSpec::PiecewiseConstant { breakpoints, values } => {
                let mut acc = 0.0;
                let mut left = lo;
                for (i, v) in values.iter().enumerate() {
                    let right = breakpoints.get(i).copied().unwrap_or(f64::INFINITY).min(hi);
                    if right > left {
                        acc += v * (right - left);
                        left = right;
                    }
                    if left >= hi {
                        break;
                    }
                }
                acc / (hi - lo)
            }
            PotentialSpec::SymmetricWell { nu, eps } => {
                let inside = (hi.min(*eps) - lo.max(-eps)).max(0.0);
                nu * nu * (1.0 - inside / (hi - lo))
            }
        }
    }

    pub fn sup_norm(&self) -> f64 {
        match self {
            PotentialSpec::Zero => 0.0,
            PotentialSpec::Constant { c } => *c,
            PotentialSpec::PiecewiseConstant { values, .. } => {
                values.iter().copied().fold(0.0, f64::max)
            }
            PotentialSpec::SymmetricWell { nu, .. } => nu * nu,
        }
    }

    /// `Some(c)` when the potential is constant.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            PotentialSpec::Zero => Some(0.0),
            PotentialSpec::Constant { c } => Some(*c),
            PotentialSpec::PiecewiseConstant { values, .. } => {
                let first = values[0];
                values.iter().all(|v| *v == first).then_some(first)
            }
            PotentialSpec::SymmetricWell { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            PotentialSpec::Zero => "V=0".into(),
            PotentialSpec::Constant { c } => format!("V={c}"),
            PotentialSpec::PiecewiseConstant { values, .. } => {
                format!("V=step({} pieces)", values.len())
            }
            PotentialSpec::SymmetricWell { nu, eps } => format!("V=well(nu={nu},eps={eps})"),
        }
    }
}

/// Node layout of a grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridKind {
    Line,
    /// Radial coordinate in R^m; weights carry the surface factor.
    Radial { dim: usize },
}

/// Nodes with quadrature weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub kind: GridKind,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn uniform(a: f64, b: f64, n: usize) -> Vec<f64> {
    let h = (b - a) / (n - 1) as f64;
    let mut v: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
    v[n - 1] = b;
    v
}

/// Moments of the two hat functions on `[a, a+h]` against `r^k`.
/// Returns (left hat, right hat). Every term is non-negative for `a >= 0`.
fn hat_moments(a: f64, h: f64, k: usize) -> (f64, f64) {
    let mut left = 0.0;
    let mut right = 0.0;
    let mut binom = 1.0;
    for j in 0..=k {
        let term = binom * a.powi((k - j) as i32) * h.powi(j as i32);
        let jf = j as f64;
        left += term / ((jf + 1.0) * (jf + 2.0));
        right += term / (jf + 2.0);
        binom = binom * (k - j) as f64 / (jf + 1.0);
    }
    (h * left, h * right)
}

impl Grid {
    /// Uniform trapezoid grid on `[a, b]` with `n` nodes.
    pub fn line(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(a < b) {
            return Err(Error::InvalidParameter("line grid needs a < b and n >= 2".into()));
        }
        Ok(Self::line_from_nodes(uniform(a, b, n)))
    }

    /// Trapezoid weights on arbitrary increasing nodes.
    pub fn line_from_nodes(nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let mut w = vec![0.0; n];
        for i in 0..n.saturating_sub(1) {
            let h = nodes[i + 1] - nodes[i];
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
        Grid { kind: GridKind::Line, nodes, weights: w }
    }

    /// Uniform radial grid on `[r0, r1]` in R^m.
    pub fn radial(dim: usize, r0: f64, r1: f64, n: usize) -> Result<Self> {
        if dim == 0 || n < 2 || !(r0 >= 0.0 && r0 < r1) {
            return Err(Error::InvalidParameter(
                "radial grid needs 0 <= r0 < r1, dim >= 1 and n >= 2".into(),
            ));
        }
        Ok(Self::radial_from_nodes(dim, uniform(r0, r1, n)))
    }

    /// Radial weights: integrals of the piecewise linear interpolant against
    /// the surface measure `m w_m r^(m-1) dr`, exact for linear data.
    pub fn radial_from_nodes(dim: usize, nodes: Vec<f64>) -> Self {
        let n = nodes.len();
        let s = dim as f64 * unit_ball_volume(dim);
        let mut w = vec![0.0; n];
        for i in 0..n.saturating_sub(1) {
            let (l, r) = hat_moments(nodes[i], nodes[i + 1] - nodes[i], dim - 1);
            w[i] += s * l;
            w[i + 1] += s * r;
        }
        Grid { kind: GridKind::Radial { dim }, nodes, weights: w }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Total measure covered by the grid.
    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Quadrature of sampled values.
    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }

    /// Step between the first two nodes.
    pub fn spacing(&self) -> f64 {
        self.nodes[1] - self.nodes[0]
    }
}
