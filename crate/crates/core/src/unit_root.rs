//! Left-tailed unit-root test for the upper regime: the statistic
//! `n (alpha_hat - 1)` (intercept 0) is compared with quantiles of the
//! Brownian functional `(B(1)^2 - 1) / (2 int B^2)`.
//!
//! The quantile table ships with the crate (`data/df_quantiles.json`) so
//! decisions do not depend on a run-time simulation. Regenerate it with
//! `tar1 df-table`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimators::lse;
use crate::limit_laws::sample_df_functional;
use crate::monte_carlo::EmpiricalDistribution;
use crate::noise::RngStream;

pub const SHIPPED_TABLE: &str = include_str!("../data/df_quantiles.json");

/// Levels the test accepts.
pub const LEVELS: [f64; 3] = [0.01, 0.05, 0.10];

/// Probabilities stored in the table.
pub const TABLE_PROBS: [f64; 11] = [0.01, 0.025, 0.05, 0.10, 0.25, 0.5, 0.75, 0.90, 0.95, 0.975, 0.99];

pub const MIN_SERIES_LEN: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableGenerator {
    pub m: usize,
    pub draws: usize,
    pub seed: u64,
}

/// Default settings for the shipped table.
pub const DEFAULT_GENERATOR: TableGenerator = TableGenerator {
    m: 2000,
    draws: 200_000,
    seed: 20_100_601,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DfQuantileTable {
    pub version: u32,
    pub generator: TableGenerator,
    pub probs: Vec<f64>,
    pub quantiles: Vec<f64>,
}

impl DfQuantileTable {
    pub fn shipped() -> Self {
        serde_json::from_str(SHIPPED_TABLE).expect("shipped quantile table parses")
    }

    /// Draw `i` uses stream `(seed, i)`.
    pub fn generate(generator: TableGenerator) -> Result<Self> {
        if generator.draws == 0 {
            return Err(invalid("draws", "must be >= 1"));
        }
        let draws: Vec<f64> = (0..generator.draws as u64)
            .into_par_iter()
            .map(|i| sample_df_functional(generator.m, &mut RngStream::new(generator.seed, i)))
            .collect::<Result<_>>()?;
        let dist = EmpiricalDistribution::new(draws);
        let quantiles = TABLE_PROBS
            .iter()
            .map(|&p| dist.quantile(p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            version: 1,
            generator,
            probs: TABLE_PROBS.to_vec(),
            quantiles,
        })
    }

    pub fn critical_value(&self, level: f64) -> Result<f64> {
        self.probs
            .iter()
            .position(|&p| (p - level).abs() < 1e-12)
            .map(|i| self.quantiles[i])
            .ok_or_else(|| invalid("level", format!("no table entry for level {level}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitRootDecision {
    /// `n (alpha_hat - 1)`, null when the upper regime is empty.
    pub statistic: Option<f64>,
    pub critical_value: f64,
    /// Null when the test is inconclusive.
    pub reject: Option<bool>,
    pub level: f64,
    pub n: usize,
    pub r: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inconclusive_reason: Option<String>,
}

/// Tests `alpha = 1` against `alpha < 1` on an observed series
/// `Y_0..Y_n` with known threshold `r`.
pub fn unit_root_test(series: &[f64], r: f64, level: f64, table: &DfQuantileTable) -> Result<UnitRootDecision> {
    if series.len() < MIN_SERIES_LEN {
        return Err(invalid(
            "series",
            format!("need at least {MIN_SERIES_LEN} observations, got {}", series.len()),
        ));
    }
    if !LEVELS.iter().any(|&l| (l - level).abs() < 1e-12) {
        return Err(invalid("level", format!("must be one of 0.01, 0.05, 0.10; got {level}")));
    }
    if let Some(bad) = series.iter().find(|v| !v.is_finite()) {
        return Err(invalid("series", format!("non-finite value {bad}")));
    }
    let critical_value = table.critical_value(level)?;
    let n = series.len() - 1;
    let est = lse(series, r, 0.0)?;
    let decision = match est.alpha() {
        Ok(alpha_hat) => {
            let statistic = n as f64 * (alpha_hat - 1.0);
            UnitRootDecision {
                statistic: Some(statistic),
                critical_value,
                reject: Some(statistic < critical_value),
                level,
                n,
                r,
                inconclusive_reason: None,
            }
        }
        Err(e @ Error::RegimeEmpty(_)) => UnitRootDecision {
            statistic: None,
            critical_value,
            reject: None,
            level,
            n,
            r,
            inconclusive_reason: Some(e.to_string()),
        },
        Err(e) => return Err(e),
    };
    Ok(decision)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_table_is_consistent() {
        let t = DfQuantileTable::shipped();
        assert_eq!(t.generator, DEFAULT_GENERATOR);
        assert_eq!(t.probs, TABLE_PROBS.to_vec());
        assert!(t.quantiles.windows(2).all(|w| w[0] <= w[1]));
        // classical no-intercept Dickey-Fuller 5% point is about -8.1
        let cv = t.critical_value(0.05).unwrap();
        assert!((-8.6..-7.6).contains(&cv), "{cv}");
    }

    #[test]
    fn regenerating_small_table_is_deterministic() {
        let g = TableGenerator { m: 50, draws: 500, seed: 3 };
        assert_eq!(DfQuantileTable::generate(g).unwrap(), DfQuantileTable::generate(g).unwrap());
    }

    #[test]
    fn input_validation() {
        let t = DfQuantileTable::shipped();
        assert!(unit_root_test(&[1.0; 10], 0.0, 0.05, &t).is_err());
        assert!(unit_root_test(&[1.0; 30], 0.0, 0.2, &t).is_err());
    }

    #[test]
    fn constant_series_below_threshold_is_inconclusive() {
        let t = DfQuantileTable::shipped();
        let d = unit_root_test(&[0.0; 40], 0.0, 0.05, &t).unwrap();
        assert_eq!(d.reject, None);
        assert_eq!(d.statistic, None);
        assert!(d.inconclusive_reason.is_some());
        let json = serde_json::to_value(&d).unwrap();
        assert!(json["reject"].is_null());
    }

    #[test]
    fn explosive_upper_regime_is_not_rejected() {
        let t = DfQuantileTable::shipped();
        let series: Vec<f64> = (0..30).map(|i| 1.1f64.powi(i)).collect();
        let d = unit_root_test(&series, 0.0, 0.05, &t).unwrap();
        assert_eq!(d.reject, Some(false));
    }
}
