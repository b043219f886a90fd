//! Simulation, least-squares estimation and limit-law sampling for
//! first-order threshold autoregressions outside the stationary region.
//!
//! The crate is organised bottom-up:
//!
//! - [`noise`]: innovation laws and seeded random streams
//! - [`tar_model`]: parameters, regime classification, path simulation
//! - [`estimators`]: least-squares slopes, the reciprocal-slope estimator
//!   and scaled error statistics
//! - [`limit_laws`]: independent samplers for the limiting distributions
//! - [`monte_carlo`]: replicated experiments, ECDFs, quantiles, KS distances
//! - [`unit_root`]: the threshold unit-root test with a shipped quantile table
//! - [`io`]: CSV and JSON serialization of paths and results

pub mod error;
pub mod estimators;
pub mod io;
pub mod limit_laws;
pub mod monte_carlo;
pub mod noise;
pub mod roots;
pub mod tar_model;
pub mod unit_root;

pub use error::{Error, Regime, Result};
pub use estimators::{
    constrained_lse, lse, q_n_eval, scaled_statistic, ConstrainedEstimate, EstimateResult,
    QnConvention, SignDomain, StatKind,
};
pub use monte_carlo::{
    empirical_quantile, ks_two_sample, run_experiment, EmpiricalDistribution, ExperimentConfig,
    LimitLawSpec, RegimeEmptyPolicy,
};
pub use noise::{NoiseFamily, NoiseSpec, RngStream};
pub use tar_model::{classify_regime, simulate_path, Path, RegimeFlag, RegimeFlags, TarParams};
