use std::fmt;

use serde::{Deserialize, Serialize};

/// Which branch of the threshold recursion an observation belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `Y_{t-1} > r`
    Upper,
    /// `Y_{t-1} <= r`
    Lower,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Upper => f.write_str("upper"),
            Regime::Lower => f.write_str("lower"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("overflow guard: |Y_{index}| = {value:e} exceeds {limit:e}; reduce n")]
    Overflow { index: usize, value: f64, limit: f64 },

    #[error("{0} regime has a zero denominator; the estimator is undefined on that side")]
    RegimeEmpty(Regime),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate problem: {0}")]
    DegenerateProblem(String),

    #[error("Riemann sum of B(t)^2 is exactly zero")]
    DegenerateIntegral,

    #[error("construction {construction} cannot be used with beta = {beta}")]
    ConstructionMismatch { construction: &'static str, beta: f64 },

    #[error("horizon {horizon} too short for alpha = {alpha}: alpha^-horizon must be below 1e-10")]
    HorizonTooShort { horizon: usize, alpha: f64 },

    #[error("tail guard failed: lower-regime visit in the final half of the horizon")]
    TailGuardFailed,

    #[error("division guard: |xi| = {0:e} is below 1e-300")]
    DivisionGuard(f64),

    #[error("empirical distribution is empty")]
    EmptyDistribution,

    #[error("all {replications} replications degenerate at n = {n}")]
    AllReplicationsDegenerate { n: usize, replications: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
