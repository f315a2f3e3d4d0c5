use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;
use torsion_core::bounds::{run_battery, standard_checks, BoundReport, DEFAULT_TOL};
use torsion_core::functionals::{
    analyze, classify_kappa, kappa_estimate, mean_to_max, Example1Family, Example2Family, LocalisationFamily,
    DEFAULT_CLASSIFY_TOL,
};
use torsion_core::obstacle::obstacle_curve_point;
use torsion_core::solver::{
    first_eigenpair_1d, first_eigenpair_radial, solve_torsion_1d, solve_torsion_radial, theorem7_profile, RadialBc,
};
use torsion_core::{DomainSpec, Error, ExecutionMode, PotentialSpec};

#[derive(Parser, Debug)]
#[command(name = "torsion", version, about = "Torsion functions, eigenpairs, efficiency and localisation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON problem or family specification
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// CSV output path; the JSON summary goes next to it with a .json extension
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Nodes per linear or radial direction
    #[arg(long, global = true, default_value_t = torsion_core::domains::DEFAULT_GRID_NODES,
          value_parser = parse_grid_nodes)]
    grid_nodes: usize,
    /// Comma-separated, strictly increasing family indices
    #[arg(long, global = true, value_delimiter = ',')]
    n_values: Option<Vec<f64>>,
    /// Allowed negative slack for bound checks
    #[arg(long, global = true, allow_hyphen_values = true)]
    tol: Option<f64>,
    /// Evaluate batches on one thread
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Torsion function and first eigenfunction on a grid
    Solve,
    /// Norms, efficiencies and the first eigenvalue
    Efficiency,
    /// Mass fractions along a family and the extrapolated kappa
    KappaScan {
        /// Exponent of the L^p mass
        #[arg(long, default_value_t = 1.0)]
        p: f64,
        /// Threshold for the none/full classification
        #[arg(long, default_value_t = DEFAULT_CLASSIFY_TOL)]
        classify_tol: f64,
    },
    /// Plateau radius, multiplier, mean and f along the obstacle family
    ObstacleCurve {
        #[arg(long, value_delimiter = ',', default_value = "2,3,4")]
        dims: Vec<usize>,
        /// Plateau radii sampled uniformly in [0, l_max]
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0.99)]
        l_max: f64,
    },
    /// Inequality checks: the standard battery, or every check for --input
    Bounds,
    /// Mixed-boundary annulus eigenfunctions extended by a plateau
    Theorem7Scan {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, value_delimiter = ',', default_value = "0.4,0.2,0.1,0.05")]
        eps: Vec<f64>,
    },
}

fn parse_grid_nodes(s: &str) -> Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 16 {
        return Err(format!("need at least 16 nodes, got {n}"));
    }
    Ok(n)
}

#[derive(Debug)]
enum Failure {
    /// Unreadable or malformed input, or an unsupported request.
    Input(String),
    /// A solver did not converge or hit a singular system.
    Solver(Error),
    /// One or more bound checks failed.
    Bounds(usize),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Solver(_) => 3,
            Failure::Bounds(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonConvergence { .. } | Error::SingularSystem(_) => Failure::Solver(e),
            other => Failure::Input(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Problem {
    domain: DomainSpec,
    #[serde(default)]
    potential: Option<PotentialSpec>,
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum FamilySpec {
    /// Symmetric wells with `nu = n` and `eps = c n^-alpha_exp`.
    Well { alpha_exp: f64, c: f64 },
    /// One ball of radius `c n^-beta` and `n` balls of radius `n^-alpha`.
    BallUnion { m: usize, alpha: f64, beta: f64, c: f64 },
}

fn read_json<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T, Failure> {
    let path = path.ok_or_else(|| Failure::Input("--input is required".into()))?;
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_problem(path: Option<&Path>) -> Result<(DomainSpec, PotentialSpec), Failure> {
    let p: Problem = read_json(path)?;
    let v = p.potential.unwrap_or(PotentialSpec::Zero);
    v.validate()?;
    Ok((p.domain, v))
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV rows plus a JSON summary.
struct Artifact {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    summary: serde_json::Value,
}

fn emit(common: &Common, a: &Artifact) -> Result<(), Failure> {
    let sink: Box<dyn Write> = match &common.output {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(&a.header)?;
    for r in &a.rows {
        w.write_record(r)?;
    }
    w.flush()?;
    let summary = serde_json::to_string_pretty(&a.summary).expect("summary is plain data");
    match &common.output {
        Some(p) => fs::write(p.with_extension("json"), summary + "\n")?,
        None => eprintln!("{summary}"),
    }
    Ok(())
}

fn mode(common: &Common) -> ExecutionMode {
    if common.sequential {
        ExecutionMode::Sequential
    } else {
        ExecutionMode::Parallel
    }
}

fn solve(common: &Common) -> Result<Artifact, Failure> {
    let (d, v) = read_problem(common.input.as_deref())?;
    let n = common.grid_nodes;
    let (torsion, eigen) = match d {
        DomainSpec::Interval { .. } => (solve_torsion_1d(&d, &v, n)?, first_eigenpair_1d(&d, &v, n)?),
        DomainSpec::Ball { .. } | DomainSpec::Annulus { .. } => {
            (solve_torsion_radial(&d, &v, n)?, first_eigenpair_radial(&d, &v, RadialBc::DirichletAll, n)?)
        }
        _ => return Err(Failure::Input(format!("solve needs an interval, ball or annulus, got {}", d.label()))),
    };
    let rows = torsion
        .grid
        .nodes
        .iter()
        .zip(&torsion.values)
        .zip(&eigen.eigenfunction.values)
        .map(|((x, t), e)| vec![real(*x), real(*t), real(*e)])
        .collect();
    Ok(Artifact {
        header: vec!["x", "torsion", "eigenfunction"],
        rows,
        summary: json!({
            "domain": d,
            "potential": v,
            "grid_nodes": n,
            "lambda1": eigen.lambda1,
            "eigen_iterations": eigen.iterations,
            "eigen_residual": eigen.residual,
            "torsion_l1": torsion.l1(),
            "torsion_sup": torsion.sup(),
            "phi": mean_to_max(&torsion)?,
            "eigen_efficiency": mean_to_max(&eigen.eigenfunction)?,
        }),
    })
}

fn efficiency(common: &Common) -> Result<Artifact, Failure> {
    let (d, v) = read_problem(common.input.as_deref())?;
    let a = analyze(&d, &v, common.grid_nodes)?;
    let e = (a.connected && a.eigen_simple).then(|| a.eigen_efficiency());
    let row = vec![
        d.label(),
        v.label(),
        real(a.measure),
        real(a.torsion_l1),
        real(a.torsion_sup),
        real(a.phi()),
        real(a.lambda1),
        e.map(real).unwrap_or_default(),
    ];
    Ok(Artifact {
        header: vec!["domain", "potential", "measure", "torsion_l1", "torsion_sup", "phi", "lambda1", "eigen_efficiency"],
        rows: vec![row],
        summary: json!({
            "domain": d,
            "potential": v,
            "measure": a.measure,
            "torsion_l1": a.torsion_l1,
            "torsion_sup": a.torsion_sup,
            "phi": a.phi(),
            "lambda1": a.lambda1,
            "eigen_efficiency": e,
        }),
    })
}

fn kappa_scan(common: &Common, p: f64, classify_tol: f64) -> Result<Artifact, Failure> {
    let spec: FamilySpec = read_json(common.input.as_deref())?;
    let family: Box<dyn LocalisationFamily> = match spec {
        FamilySpec::Well { alpha_exp, c } => Box::new(Example1Family { alpha_exp, c }),
        FamilySpec::BallUnion { m, alpha, beta, c } => Box::new(Example2Family { m, alpha, beta, c }),
    };
    let n = common.n_values.clone().unwrap_or_else(|| vec![1e2, 1e3, 1e4]);
    if n.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Failure::Input("--n-values must be strictly increasing".into()));
    }
    let r = kappa_estimate(family.as_ref(), p, &n, mode(common))?;
    let class = classify_kappa(r.kappa_hat, classify_tol);
    let rows = r
        .entries
        .iter()
        .map(|e| vec![real(e.n), real(e.mass_fraction), real(e.volume_fraction)])
        .collect();
    Ok(Artifact {
        header: vec!["n", "mass_fraction", "volume_fraction"],
        rows,
        summary: json!({
            "family_id": r.family_id,
            "p": r.p,
            "kappa_hat": r.kappa_hat,
            "fitted_exponent": r.fitted_exponent,
            "low_confidence": r.low_confidence,
            "classification": class,
        }),
    })
}

fn obstacle_curve(dims: &[usize], points: usize, l_max: f64) -> Result<Artifact, Failure> {
    if points < 2 || !(0.0..1.0).contains(&l_max) {
        return Err(Failure::Input("need --points >= 2 and 0 <= --l-max < 1".into()));
    }
    let mut rows = Vec::new();
    for &m in dims {
        for i in 0..points {
            let l = l_max * i as f64 / (points - 1) as f64;
            let q = obstacle_curve_point(m, l)?;
            rows.push(vec![
                q.m.to_string(),
                real(q.l),
                real(q.c),
                real(q.theta),
                real(q.f_value),
                q.g_closed_form.map(real).unwrap_or_default(),
            ]);
        }
    }
    Ok(Artifact {
        header: vec!["m", "l", "c", "theta", "f_value", "g_closed_form"],
        rows,
        summary: json!({ "dims": dims, "points": points, "l_max": l_max }),
    })
}

fn bounds(common: &Common) -> Result<(Artifact, usize), Failure> {
    let tol = common.tol.unwrap_or(DEFAULT_TOL);
    let reports: Vec<BoundReport> = match &common.input {
        Some(path) => {
            let (d, v) = read_problem(Some(path))?;
            standard_checks(&d, &v, common.grid_nodes)?
        }
        None => run_battery(mode(common), common.grid_nodes)?,
    };
    let reports: Vec<BoundReport> = reports.into_iter().map(|r| r.with_tolerance(tol)).collect();
    let failed = reports.iter().filter(|r| r.is_violation()).count();
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.context.clone(),
                real(r.lhs),
                real(r.rhs),
                real(r.slack),
                r.satisfied.to_string(),
                r.applicable.to_string(),
            ]
        })
        .collect();
    let artifact = Artifact {
        header: vec!["bound_name", "context", "lhs", "rhs", "slack", "satisfied", "applicable"],
        rows,
        summary: json!({
            "reports": reports.len(),
            "inapplicable": reports.iter().filter(|r| !r.applicable).count(),
            "violations": failed,
            "tol": tol,
        }),
    };
    Ok((artifact, failed))
}

#[derive(Serialize)]
struct ScanRow {
    eps: f64,
    lambda: f64,
    plateau_value: f64,
    mean_to_max: f64,
}

fn theorem7_scan(common: &Common, dim: usize, eps: &[f64]) -> Result<Artifact, Failure> {
    let rows: Vec<ScanRow> = eps
        .iter()
        .map(|&e| {
            let t = theorem7_profile(dim, e, common.grid_nodes)?;
            Ok(ScanRow { eps: e, lambda: t.lambda, plateau_value: t.plateau_value, mean_to_max: mean_to_max(&t.profile)? })
        })
        .collect::<Result<_, Error>>()?;
    Ok(Artifact {
        header: vec!["eps", "lambda", "plateau_value", "mean_to_max"],
        rows: rows
            .iter()
            .map(|r| vec![real(r.eps), real(r.lambda), real(r.plateau_value), real(r.mean_to_max)])
            .collect(),
        summary: json!({ "dim": dim, "grid_nodes": common.grid_nodes, "rows": rows }),
    })
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let common = &cli.common;
    let artifact = match &cli.command {
        Command::Solve => solve(common)?,
        Command::Efficiency => efficiency(common)?,
        Command::KappaScan { p, classify_tol } => kappa_scan(common, *p, *classify_tol)?,
        Command::ObstacleCurve { dims, points, l_max } => obstacle_curve(dims, *points, *l_max)?,
        Command::Theorem7Scan { dim, eps } => theorem7_scan(common, *dim, eps)?,
        Command::Bounds => {
            let (artifact, failed) = bounds(common)?;
            emit(common, &artifact)?;
            return if failed > 0 { Err(Failure::Bounds(failed)) } else { Ok(()) };
        }
    };
    emit(common, &artifact)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Solver(e) => eprintln!("error: {e}"),
                Failure::Bounds(n) => eprintln!("error: {n} bound check(s) failed"),
            }
            ExitCode::from(f.code())
        }
    }
}
