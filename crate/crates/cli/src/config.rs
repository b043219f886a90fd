//! The declarative run file (TOML).
//!
//! ```toml
//! [model]
//! alpha = 1.0
//! beta = 0.5
//! r = -0.5
//!
//! [noise]
//! family = "gaussian"
//! sigma = 1.0
//!
//! [experiment]
//! stat = "unit_root_alpha"
//! n_grid = [500, 2000]
//! replications = 5000
//! seed = 1
//!
//! [limit_law]
//! kind = "df_functional"
//! m = 2000
//! draws = 5000
//! seed = 2
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};
use tar1_core::estimators::{QnConvention, StatKind};
use tar1_core::monte_carlo::{stat_requires_limit_law, ExperimentConfig, LimitLawSpec, RegimeEmptyPolicy};
use tar1_core::{NoiseSpec, TarParams};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    #[serde(default)]
    pub y0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0_sd: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub n: usize,
    pub seed: u64,
    #[serde(default)]
    pub stream: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub stat: StatKind,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub seed: u64,
    #[serde(default)]
    pub regime_empty_policy: RegimeEmptyPolicy,
    #[serde(default)]
    pub qn_convention: QnConvention,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelSection,
    pub noise: NoiseSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit_law: Option<LimitLawSpec>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.params()?;
        Ok(cfg)
    }

    pub fn params(&self) -> Result<TarParams, CliError> {
        let m = &self.model;
        let params = TarParams {
            gamma: m.gamma,
            delta: m.delta,
            alpha: m.alpha,
            beta: m.beta,
            r: m.r,
            noise: self.noise,
            y0: m.y0,
            y0_sd: m.y0_sd,
        };
        params.validate().map_err(|e| CliError::Config(format!("[model] {e}")))?;
        Ok(params)
    }

    pub fn simulate_section(&self) -> Result<&SimulateSection, CliError> {
        self.simulate
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [simulate] section".into()))
    }

    pub fn experiment_config(&self) -> Result<ExperimentConfig, CliError> {
        let section = self
            .experiment
            .as_ref()
            .ok_or_else(|| CliError::Config("missing [experiment] section".into()))?;
        if stat_requires_limit_law(section.stat) && self.limit_law.is_none() {
            return Err(CliError::Config(format!(
                "missing [limit_law] section: statistic `{}` is compared against a limit law",
                serde_json::to_value(section.stat).unwrap().as_str().unwrap_or("?")
            )));
        }
        let cfg = ExperimentConfig {
            params: self.params()?,
            stat: section.stat,
            n_grid: section.n_grid.clone(),
            replications: section.replications,
            master_seed: section.seed,
            limit_law: self.limit_law,
            regime_empty_policy: section.regime_empty_policy,
            qn_convention: section.qn_convention,
        };
        cfg.validate().map_err(|e| CliError::Config(format!("[experiment] {e}")))?;
        Ok(cfg)
    }

    pub fn limit_law(&self) -> Result<LimitLawSpec, CliError> {
        self.limit_law
            .ok_or_else(|| CliError::Config("missing [limit_law] section".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CASE_ONE: &str = r#"
[model]
alpha = 1.0
beta = 0.5
r = -0.5

[noise]
family = "gaussian"
sigma = 1.0

[experiment]
stat = "unit_root_alpha"
n_grid = [100, 200]
replications = 10
seed = 1

[limit_law]
kind = "df_functional"
m = 100
draws = 10
seed = 2
"#;

    #[test]
    fn parses_full_config() {
        let cfg = RunConfig::parse(CASE_ONE).unwrap();
        let exp = cfg.experiment_config().unwrap();
        assert_eq!(exp.n_grid, vec![100, 200]);
        assert_eq!(exp.limit_law, Some(LimitLawSpec::DfFunctional { m: 100, draws: 10, seed: 2 }));
        assert_eq!(cfg.params().unwrap().gamma, 0.0);
    }

    #[test]
    fn unknown_key_is_named() {
        let text = CASE_ONE.replace("beta = 0.5", "beta = 0.5\nbeat = 1.0");
        let CliError::Config(msg) = RunConfig::parse(&text).unwrap_err() else {
            panic!("expected config error")
        };
        assert!(msg.contains("beat"), "{msg}");
    }

    #[test]
    fn missing_key_is_named() {
        let text = CASE_ONE.replace("alpha = 1.0\n", "");
        let CliError::Config(msg) = RunConfig::parse(&text).unwrap_err() else {
            panic!("expected config error")
        };
        assert!(msg.contains("alpha"), "{msg}");
    }

    #[test]
    fn bad_sigma_is_config_error() {
        let text = CASE_ONE.replace("sigma = 1.0", "sigma = -2.0");
        assert!(matches!(RunConfig::parse(&text), Err(CliError::Config(_))));
    }

    #[test]
    fn limit_law_required_for_unit_root_stat() {
        let cut = CASE_ONE.split("[limit_law]").next().unwrap();
        let cfg = RunConfig::parse(cut).unwrap();
        assert!(matches!(cfg.experiment_config(), Err(CliError::Config(m)) if m.contains("limit_law")));
    }
}
