//! Reversed hazard rate, expected inactivity time and reversed aging
//! intensity for right-bounded distributions, with numerical checks of the
//! Cauchy–Schwarz characterization inequalities built on them.

pub mod characterizations;
pub mod distributions;
pub mod empirics;
pub mod error;
pub mod functionals;
pub mod quadrature;

pub use characterizations::{
    run_check, run_matrix, theorem_catalog, CheckConfig, CheckReport, CheckSpec, TheoremId, Verdict,
};
pub use distributions::{make_distribution, DistributionModel, FamilySpec};
pub use error::{Error, Result};
pub use quadrature::{QuadResult, QuadStatus, Tolerance};
