//! Torsion functions, first Dirichlet eigenpairs, efficiency functionals and
//! localisation for Schrödinger operators on simple domains.

pub mod bounds;
pub mod closed_form;
pub mod domains;
pub mod error;
pub mod exec;
pub mod functionals;
pub mod obstacle;
pub mod solver;

pub use domains::{DomainSpec, Grid, GridKind, PotentialSpec};
pub use error::{Error, Result};
pub use exec::ExecutionMode;
