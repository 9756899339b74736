use thiserror::Error;

use crate::quadrature::QuadStatus;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters for {family}: {constraint}")]
    Parameter { family: String, constraint: String },

    #[error("cannot parse `{input}`: {reason}")]
    Parse { input: String, reason: String },

    #[error("t = {t} lies outside the admissible range ({lower}, {upper})")]
    Support { t: f64, lower: f64, upper: f64 },

    #[error("probability {0} is outside (0, 1)")]
    Domain(f64),

    #[error("raw moment of order {0} does not converge")]
    DivergentMoment(u32),

    #[error("distribution function vanishes at t = {0}")]
    ZeroMass(f64),

    #[error("operation requires a finite right endpoint")]
    UnboundedSupport,

    #[error("weight is not finite at sample index {index} (x = {x})")]
    NonFiniteWeight { index: usize, x: f64 },

    #[error("need at least {min} observations, got {n}")]
    TooFewPoints { n: usize, min: usize },

    #[error("no observations at or below t = {0}")]
    NoMass(f64),

    #[error("sample must contain at least one value")]
    EmptySample,

    #[error("line {line}: {reason}")]
    SampleLine { line: usize, reason: String },

    #[error("quadrature did not converge ({status:?}, estimate {value})")]
    Quadrature { status: QuadStatus, value: f64 },
}
