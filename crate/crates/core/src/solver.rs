//! Finite-volume solvers for the torsion equation `-v'' + V v = 1` and the
//! first eigenpair, on intervals and radially symmetric domains.
//!
//! Every problem reduces to a symmetric tridiagonal pencil `(K + V M) u = f`
//! or `(K + V M) u = lambda M u` with `M` diagonal. On radial grids `K` uses
//! the face fluxes `r_(i+1/2)^(m-1)` and `M` the exact control-volume moments
//! of `r^(m-1)`; at the centre this reproduces the `2m (u_0 - u_1)/h^2`
//! stencil of the reflected ghost node.

use serde::Serialize;

use crate::domains::{unit_ball_volume, DomainSpec, Grid, GridKind, PotentialSpec};
use crate::error::{param, Error, Result};

pub const MIN_NODES: usize = 16;
const MAX_INVERSE_ITERATIONS: usize = 500;

/// Sampled function on a grid together with the domain it lives on.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub grid: Grid,
    pub values: Vec<f64>,
    pub domain: DomainSpec,
}

impl Profile {
    pub fn l1(&self) -> f64 {
        self.grid.integrate(&self.values.iter().map(|v| v.abs()).collect::<Vec<_>>())
    }

    pub fn lp_norm_pow(&self, p: f64) -> f64 {
        self.grid.integrate(&self.values.iter().map(|v| v.abs().powf(p)).collect::<Vec<_>>())
    }

    pub fn l2(&self) -> f64 {
        self.grid.integrate(&self.values.iter().map(|v| v * v).collect::<Vec<_>>()).sqrt()
    }

    pub fn sup(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Integral over the part of the grid inside `[lo, hi]`, with the
    /// piecewise linear interpolant clipped exactly at the ends.
    pub fn integrate_between(&self, lo: f64, hi: f64, p: f64) -> f64 {
        let x = &self.grid.nodes;
        let f: Vec<f64> = self.values.iter().map(|v| v.abs().powf(p)).collect();
        let mut acc = 0.0;
        for i in 0..x.len() - 1 {
            let (a, b) = (x[i].max(lo), x[i + 1].min(hi));
            if b <= a {
                continue;
            }
            let h = x[i + 1] - x[i];
            let interp = |t: f64| f[i] + (f[i + 1] - f[i]) * (t - x[i]) / h;
            acc += match self.grid.kind {
                GridKind::Line => 0.5 * (b - a) * (interp(a) + interp(b)),
                GridKind::Radial { dim } => {
                    let s = dim as f64 * unit_ball_volume(dim);
                    let g = |t: f64| interp(t) * t.powi(dim as i32 - 1);
                    // exact up to dim 3, O(h^4) per piece beyond
                    s * (b - a) / 6.0 * (g(a) + 4.0 * g(0.5 * (a + b)) + g(b))
                }
            };
        }
        acc
    }

    pub fn scaled(&self, s: f64) -> Profile {
        Profile {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
            domain: self.domain.clone(),
        }
    }
}

/// First eigenpair with iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    pub lambda1: f64,
    pub eigenfunction: Profile,
    pub iterations: usize,
    pub residual: f64,
}

/// Boundary conditions for radial eigenproblems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RadialBc {
    DirichletAll,
    DirichletOuterNeumannInner,
}

/// Tridiagonal matrix stored by diagonals, with a cached LU factorisation.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Thomas factorisation of a [`Tridiagonal`].
#[derive(Debug, Clone)]
pub struct TridiagonalLu {
    lower: Vec<f64>,
    upper: Vec<f64>,
    pivots: Vec<f64>,
}

impl Tridiagonal {
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * x[i];
                if i > 0 {
                    s += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    s += self.upper[i] * x[i + 1];
                }
                s
            })
            .collect()
    }

    pub fn factor(&self) -> Result<TridiagonalLu> {
        let n = self.len();
        let mut pivots = Vec::with_capacity(n);
        let mut prev = 0.0;
        for i in 0..n {
            let p = if i == 0 { self.diag[0] } else { self.diag[i] - self.lower[i - 1] * self.upper[i - 1] / prev };
            if !(p.abs() > f64::MIN_POSITIVE) || !p.is_finite() {
                return Err(Error::SingularSystem(i));
            }
            pivots.push(p);
            prev = p;
        }
        Ok(TridiagonalLu { lower: self.lower.clone(), upper: self.upper.clone(), pivots })
    }
}

impl TridiagonalLu {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.pivots.len();
        let mut y = rhs.to_vec();
        for i in 1..n {
            y[i] -= self.lower[i - 1] / self.pivots[i - 1] * y[i - 1];
        }
        y[n - 1] /= self.pivots[n - 1];
        for i in (0..n - 1).rev() {
            y[i] = (y[i] - self.upper[i] * y[i + 1]) / self.pivots[i];
        }
        y
    }
}

/// Discrete pencil on the free (non-Dirichlet) nodes of a grid.
struct Pencil {
    grid: Grid,
    /// Index of the first and one past the last free node.
    free: std::ops::Range<usize>,
    stiff: Tridiagonal,
    mass: Vec<f64>,
}

impl Pencil {
    fn operator(&self) -> Tridiagonal {
        self.stiff.clone()
    }

    fn embed(&self, free_vals: &[f64]) -> Vec<f64> {
        let mut v = vec![0.0; self.grid.len()];
        v[self.free.clone()].copy_from_slice(free_vals);
        v
    }
}

fn check_nodes(n: usize) -> Result<()> {
    if n < MIN_NODES {
        return Err(param(format!("need at least {MIN_NODES} nodes, got {n}")));
    }
    Ok(())
}

/// Interval pencil; Dirichlet at both ends; potential by cell averages.
fn line_pencil(a: f64, b: f64, v: &PotentialSpec, n: usize) -> Result<Pencil> {
    check_nodes(n)?;
    v.validate()?;
    let grid = Grid::line(a, b, n)?;
    let h = grid.spacing();
    let k = n - 2;
    let mut diag = vec![0.0; k];
    for (j, d) in diag.iter_mut().enumerate() {
        let x = grid.nodes[j + 1];
        *d = 2.0 / h + h * v.cell_average(x - 0.5 * h, x + 0.5 * h);
    }
    let off = vec![-1.0 / h; k - 1];
    Ok(Pencil {
        grid,
        free: 1..n - 1,
        stiff: Tridiagonal { lower: off.clone(), diag, upper: off },
        mass: vec![h; k],
    })
}

/// Radial pencil on `[r0, r1]` in R^m with a constant potential. The outer
/// node is Dirichlet. The inner node is the centre (`r0 = 0`), a Neumann
/// node, or Dirichlet, according to `bc`.
fn radial_pencil(m: usize, r0: f64, r1: f64, c: f64, bc: RadialBc, n: usize) -> Result<Pencil> {
    check_nodes(n)?;
    let grid = Grid::radial(m, r0, r1, n)?;
    let h = grid.spacing();
    let x = &grid.nodes;
    let mm = m as i32;
    let face = |i: usize| (0.5 * (x[i] + x[i + 1])).powi(mm - 1) / h;
    let cv = |lo: f64, hi: f64| (hi.powi(mm) - lo.powi(mm)) / m as f64;
    let inner_free = r0 == 0.0 || bc == RadialBc::DirichletOuterNeumannInner;
    let first = if inner_free { 0 } else { 1 };
    let free = first..n - 1;
    let k = free.len();
    let mut diag = vec![0.0; k];
    let mut off = vec![0.0; k.saturating_sub(1)];
    let mut mass = vec![0.0; k];
    for (j, i) in free.clone().enumerate() {
        let right = face(i);
        let left = if i == 0 { 0.0 } else { face(i - 1) };
        let lo = if i == 0 { x[0] } else { 0.5 * (x[i - 1] + x[i]) };
        let hi = 0.5 * (x[i] + x[i + 1]);
        let mi = cv(lo, hi);
        let left_flux = if i == 0 { 0.0 } else { left };
        diag[j] = left_flux + right + c * mi;
        mass[j] = mi;
        if j + 1 < k {
            off[j] = -right;
        }
    }
    Ok(Pencil {
        grid,
        free,
        stiff: Tridiagonal { lower: off.clone(), diag, upper: off },
        mass,
    })
}

fn solve_torsion(p: &Pencil) -> Result<Vec<f64>> {
    let lu = p.operator().factor()?;
    let u = lu.solve(&p.mass);
    Ok(p.embed(&u))
}

/// Second-order torsion function on an interval.
pub fn solve_torsion_1d(d: &DomainSpec, v: &PotentialSpec, n_nodes: usize) -> Result<Profile> {
    let (a, b) = match d {
        DomainSpec::Interval { a, b } => (*a, *b),
        _ => return Err(Error::Unsupported(format!("1D solver on {}", d.label()))),
    };
    d.validate()?;
    let p = line_pencil(a, b, v, n_nodes)?;
    let values = solve_torsion(&p)?;
    Ok(Profile { grid: p.grid, values, domain: d.clone() })
}

fn radial_bounds(d: &DomainSpec) -> Result<(usize, f64, f64)> {
    d.validate()?;
    match d {
        DomainSpec::Ball { dim, radius } => Ok((*dim, 0.0, *radius)),
        DomainSpec::Annulus { dim, inner, outer } => Ok((*dim, *inner, *outer)),
        _ => Err(Error::Unsupported(format!("radial solver on {}", d.label()))),
    }
}

fn radial_constant(v: &PotentialSpec) -> Result<f64> {
    v.validate()?;
    v.as_constant()
        .ok_or_else(|| Error::Unsupported(format!("radial solver with {}", v.label())))
}

/// Torsion function on a ball or annulus (Dirichlet on every boundary
/// sphere) for a constant potential.
pub fn solve_torsion_radial(d: &DomainSpec, v: &PotentialSpec, n_nodes: usize) -> Result<Profile> {
    let (m, r0, r1) = radial_bounds(d)?;
    let c = radial_constant(v)?;
    let p = radial_pencil(m, r0, r1, c, RadialBc::DirichletAll, n_nodes)?;
    let values = solve_torsion(&p)?;
    Ok(Profile { grid: p.grid, values, domain: d.clone() })
}

/// Inverse iteration with zero shift on a factorised pencil.
fn inverse_iteration(p: &Pencil) -> Result<(f64, Vec<f64>, usize, f64)> {
    let op = p.operator();
    let lu = op.factor()?;
    let k = p.mass.len();
    let span = p.grid.nodes[p.grid.len() - 1] - p.grid.nodes[0];
    let start = p.grid.nodes[0];
    // positive half-sine over the full grid span
    let mut x: Vec<f64> = p.free
        .clone()
        .map(|i| (std::f64::consts::PI * (p.grid.nodes[i] - start) / span).sin().max(1e-3))
        .collect();
    let dot_m = |a: &[f64], b: &[f64]| -> f64 { (0..k).map(|i| a[i] * p.mass[i] * b[i]).sum() };
    let mut lambda = f64::NAN;
    let mut last_change = f64::INFINITY;
    for it in 1..=MAX_INVERSE_ITERATIONS {
        let mx: Vec<f64> = (0..k).map(|i| p.mass[i] * x[i]).collect();
        let y = lu.solve(&mx);
        let new_lambda = dot_m(&y, &x) / dot_m(&y, &y);
        let norm = dot_m(&y, &y).sqrt();
        x = y.iter().map(|v| v / norm).collect();
        last_change = ((new_lambda - lambda) / new_lambda).abs();
        lambda = new_lambda;
        let residual = pencil_residual(&op, &p.mass, &x, lambda);
        if residual <= 1e-10 * lambda || (last_change < 1e-14 && residual <= 1e-8 * lambda) {
            return Ok((lambda, x, it, residual));
        }
    }
    Err(Error::NonConvergence { iterations: MAX_INVERSE_ITERATIONS, last_change })
}

/// `||(K + V M) x - lambda M x||` in the `M^-1` norm, for `M`-normalised `x`.
fn pencil_residual(op: &Tridiagonal, mass: &[f64], x: &[f64], lambda: f64) -> f64 {
    let ax = op.mul(x);
    ax.iter()
        .zip(mass)
        .zip(x)
        .map(|((a, m), v)| {
            let r = a - lambda * m * v;
            r * r / m
        })
        .sum::<f64>()
        .sqrt()
}

fn finish_eigen(p: Pencil, d: &DomainSpec, lambda: f64, x: Vec<f64>, it: usize, residual: f64) -> EigenResult {
    let mut values = p.embed(&x);
    let imax = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if values[imax] < 0.0 {
        values.iter_mut().for_each(|v| *v = -*v);
    }
    let mut prof = Profile { grid: p.grid, values, domain: d.clone() };
    let s = 1.0 / prof.l2();
    prof.values.iter_mut().for_each(|v| *v *= s);
    EigenResult { lambda1: lambda, eigenfunction: prof, iterations: it, residual }
}

/// First Dirichlet eigenpair on an interval.
pub fn first_eigenpair_1d(d: &DomainSpec, v: &PotentialSpec, n_nodes: usize) -> Result<EigenResult> {
    let (a, b) = match d {
        DomainSpec::Interval { a, b } => (*a, *b),
        _ => return Err(Error::Unsupported(format!("1D eigensolver on {}", d.label()))),
    };
    d.validate()?;
    let p = line_pencil(a, b, v, n_nodes)?;
    let (lambda, x, it, res) = inverse_iteration(&p)?;
    Ok(finish_eigen(p, d, lambda, x, it, res))
}

/// First eigenpair of the radial operator on a ball or annulus.
pub fn first_eigenpair_radial(
    d: &DomainSpec,
    v: &PotentialSpec,
    bc: RadialBc,
    n_nodes: usize,
) -> Result<EigenResult> {
    let (m, r0, r1) = radial_bounds(d)?;
    if bc == RadialBc::DirichletOuterNeumannInner && r0 == 0.0 {
        return Err(Error::Unsupported("inner Neumann condition needs an annulus".into()));
    }
    let c = radial_constant(v)?;
    let p = radial_pencil(m, r0, r1, c, bc, n_nodes)?;
    let (lambda, x, it, res) = inverse_iteration(&p)?;
    Ok(finish_eigen(p, d, lambda, x, it, res))
}

/// Eigenfunction of the mixed problem on the annulus `1 - eps < r < 1`,
/// extended by its inner boundary value to the unit ball and normalised in
/// `L2(B_1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Theorem7Profile {
    pub eps: f64,
    pub lambda: f64,
    pub plateau_value: f64,
    pub profile: Profile,
}

pub fn theorem7_profile(m: usize, eps: f64, n_nodes: usize) -> Result<Theorem7Profile> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(param(format!("need 0 < eps < 1, got {eps}")));
    }
    if m < 2 {
        return Err(param("annulus construction needs m >= 2"));
    }
    let ann = DomainSpec::annulus(m, 1.0 - eps, 1.0)?;
    let eig = first_eigenpair_radial(&ann, &PotentialSpec::Zero, RadialBc::DirichletOuterNeumannInner, n_nodes)?;
    let h = eig.eigenfunction.grid.spacing();
    let r_in = 1.0 - eps;
    let inner_steps = (r_in / h).ceil() as usize;
    let mut nodes: Vec<f64> = (0..inner_steps).map(|i| r_in * i as f64 / inner_steps as f64).collect();
    let plateau = eig.eigenfunction.values[0];
    let mut values = vec![plateau; nodes.len()];
    nodes.extend_from_slice(&eig.eigenfunction.grid.nodes);
    values.extend_from_slice(&eig.eigenfunction.values);
    let grid = Grid::radial_from_nodes(m, nodes);
    let mut profile = Profile { grid, values, domain: DomainSpec::ball(m, 1.0)? };
    let s = 1.0 / profile.l2();
    profile.values.iter_mut().for_each(|v| *v *= s);
    Ok(Theorem7Profile { eps, lambda: eig.lambda1, plateau_value: plateau * s, profile })
}
