//! Experiment orchestration: replicated simulate → estimate → scale runs,
//! empirical distributions, and comparison against limit-law samples.
//!
//! Replication `i` always draws from stream `(master_seed, i)`, results are
//! collected by index and then sorted, so outputs do not depend on how many
//! workers run or in which order.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::estimators::{scaled_statistic_with, QnConvention, StatKind};
use crate::limit_laws::{
    sample_abs_bm_marginal, sample_df_functional, sample_limit_ratio,
};
use crate::noise::RngStream;
use crate::tar_model::{classify_regime, simulate_path, RegimeFlag, TarParams};

/// Quantile levels reported in experiment summaries.
pub const SUMMARY_PROBS: [f64; 9] = [0.01, 0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95, 0.99];

/// Attempts per replication under [`RegimeEmptyPolicy::Resample`].
pub const MAX_RESAMPLE: u64 = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeEmptyPolicy {
    #[default]
    DropAndCount,
    Resample,
}

/// Reference law a statistic is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LimitLawSpec {
    /// `(B(1)^2 - 1) / (2 int B^2)` on an `m`-step grid.
    DfFunctional { m: usize, draws: usize, seed: u64 },
    /// `sigma |B(1)|`, sigma taken from the model noise.
    AbsBrownian { m: usize, draws: usize, seed: u64 },
    /// `N(0, 3 sigma^2 / gamma^2)`.
    DriftNormal { draws: usize, seed: u64 },
    /// `eta*/xi*` with `xi` simulated to `horizon`.
    LimitRatio { horizon: usize, draws: usize, seed: u64 },
}

impl LimitLawSpec {
    pub fn draws(&self) -> usize {
        match *self {
            LimitLawSpec::DfFunctional { draws, .. }
            | LimitLawSpec::AbsBrownian { draws, .. }
            | LimitLawSpec::DriftNormal { draws, .. }
            | LimitLawSpec::LimitRatio { draws, .. } => draws,
        }
    }

    pub fn seed(&self) -> u64 {
        match *self {
            LimitLawSpec::DfFunctional { seed, .. }
            | LimitLawSpec::AbsBrownian { seed, .. }
            | LimitLawSpec::DriftNormal { seed, .. }
            | LimitLawSpec::LimitRatio { seed, .. } => seed,
        }
    }

    /// The limit law that matches `stat`, if one is known.
    pub fn matches(&self, stat: StatKind) -> bool {
        matches!(
            (self, stat),
            (
                LimitLawSpec::DfFunctional { .. },
                StatKind::UnitRootAlpha | StatKind::UnitRootBeta
            ) | (LimitLawSpec::AbsBrownian { .. }, StatKind::TerminalValue)
                | (LimitLawSpec::DriftNormal { .. }, StatKind::DriftedUnitRootAlpha)
                | (LimitLawSpec::LimitRatio { .. }, StatKind::ExplosiveAlpha)
        )
    }
}

/// Whether `stat` has a limit law to compare against.
pub fn stat_requires_limit_law(stat: StatKind) -> bool {
    !matches!(stat, StatKind::ConstrainedAlphaError | StatKind::BetaError)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: TarParams,
    pub stat: StatKind,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub limit_law: Option<LimitLawSpec>,
    #[serde(default)]
    pub regime_empty_policy: RegimeEmptyPolicy,
    #[serde(default)]
    pub qn_convention: QnConvention,
}

impl ExperimentConfig {
    pub fn new(params: TarParams, stat: StatKind, n_grid: Vec<usize>, replications: usize, master_seed: u64) -> Self {
        Self {
            params,
            stat,
            n_grid,
            replications,
            master_seed,
            limit_law: None,
            regime_empty_policy: RegimeEmptyPolicy::default(),
            qn_convention: QnConvention::default(),
        }
    }

    pub fn with_limit_law(mut self, law: LimitLawSpec) -> Self {
        self.limit_law = Some(law);
        self
    }

    pub fn with_policy(mut self, policy: RegimeEmptyPolicy) -> Self {
        self.regime_empty_policy = policy;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if self.replications < 2 {
            return Err(invalid("replications", "must be >= 2"));
        }
        if self.n_grid.is_empty() {
            return Err(invalid("n_grid", "must not be empty"));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("n_grid", "must be strictly increasing"));
        }
        if self.n_grid[0] < 2 {
            return Err(invalid("n_grid", "path lengths must be >= 2"));
        }
        if let Some(law) = &self.limit_law {
            if law.draws() == 0 {
                return Err(invalid("draws", "limit-law sample must be non-empty"));
            }
        }
        Ok(())
    }

    /// Mismatches between the statistic, the limit law and the parameter
    /// point. These are advisory: experiments off the theory's assumptions
    /// are allowed.
    pub fn warnings(&self) -> Vec<String> {
        let flags = classify_regime(&self.params);
        let mut out = Vec::new();
        let expected: &[RegimeFlag] = match self.stat {
            StatKind::UnitRootAlpha | StatKind::TerminalValue => &[RegimeFlag::UnitRootCaseI],
            StatKind::UnitRootBeta => &[RegimeFlag::MirroredUnitRoot],
            StatKind::DriftedUnitRootAlpha => &[RegimeFlag::DriftedUnitRoot],
            StatKind::ExplosiveAlpha | StatKind::BetaError => {
                &[RegimeFlag::ExplosiveCaseIIH1, RegimeFlag::ExplosiveCaseIIH2]
            }
            StatKind::ConstrainedAlphaError => &[RegimeFlag::ReciprocalProduct],
        };
        if !expected.iter().any(|f| flags.contains(*f)) {
            out.push(format!(
                "statistic {:?} expects one of {:?}; parameters classify as {}",
                self.stat, expected, flags
            ));
        }
        if flags.contains(RegimeFlag::H2ViolatedByNoise) {
            out.push("bounded noise violates the unbounded-support condition for r != 0".into());
        }
        if let Some(law) = &self.limit_law {
            if !law.matches(self.stat) {
                out.push(format!("limit law {law:?} does not match statistic {:?}", self.stat));
            }
        }
        out
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        hash_json(self)
    }
}

/// Hex SHA-256 of the compact JSON encoding of `value`.
pub fn hash_json<T: Serialize + ?Sized>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("value serializes");
    hex::encode(Sha256::digest(&json))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
}

/// A sorted sample with interpolated quantiles and an ECDF.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
    pub n_dropped: usize,
    pub provenance: Option<Provenance>,
}

impl EmpiricalDistribution {
    /// Sorts `samples`; NaNs are counted as dropped.
    pub fn new(samples: Vec<f64>) -> Self {
        let before = samples.len();
        let mut samples: Vec<f64> = samples.into_iter().filter(|x| !x.is_nan()).collect();
        let n_dropped = before - samples.len();
        samples.sort_by(f64::total_cmp);
        Self {
            samples,
            n_dropped,
            provenance: None,
        }
    }

    pub fn with_dropped(mut self, dropped: usize) -> Self {
        self.n_dropped += dropped;
        self
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fraction of samples `<= x`.
    pub fn ecdf(&self, x: f64) -> f64 {
        if self.samples.is_empty() {
            return f64::NAN;
        }
        let k = self.samples.partition_point(|&s| s <= x);
        k as f64 / self.samples.len() as f64
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        empirical_quantile(self, p)
    }

    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }

    pub fn iqr(&self) -> Result<f64> {
        Ok(self.quantile(0.75)? - self.quantile(0.25)?)
    }

    pub fn mean(&self) -> Result<f64> {
        if self.samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        Ok(self.samples.iter().sum::<f64>() / self.samples.len() as f64)
    }
}

/// Linear interpolation between order statistics: with `k` samples sorted
/// as `x_1 <= ... <= x_k`, put `h = (k - 1) p` and return
/// `x_{floor(h)+1} + (h - floor(h)) (x_{floor(h)+2} - x_{floor(h)+1})`.
pub fn empirical_quantile(dist: &EmpiricalDistribution, p: f64) -> Result<f64> {
    let xs = &dist.samples;
    if xs.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid("p", format!("must lie in [0, 1], got {p}")));
    }
    let h = (xs.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let frac = h - lo as f64;
    if lo == hi {
        return Ok(xs[lo]);
    }
    Ok(xs[lo] + frac * (xs[hi] - xs[lo]))
}

/// Two-sample Kolmogorov–Smirnov distance by a merge scan over the two
/// sorted samples. Tied values are consumed from both sides before the
/// ECDF gap is measured.
pub fn ks_two_sample(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> Result<f64> {
    let (xs, ys) = (a.samples(), b.samples());
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xs.len() && j < ys.len() {
        let x = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= x {
            i += 1;
        }
        while j < ys.len() && ys[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Asymptotic critical value of the two-sample KS distance at level
/// `alpha`, `c(alpha) sqrt((n + m) / (n m))` with
/// `c(alpha) = sqrt(-ln(alpha / 2) / 2)`.
pub fn ks_critical_value(alpha: f64, n: usize, m: usize) -> f64 {
    let c = (-(alpha / 2.0).ln() / 2.0).sqrt();
    c * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

enum ReplicationOutcome {
    Value(f64),
    Dropped,
}

/// Per-replication work: one path to the largest `n`, statistics on
/// prefixes.
fn run_replication(config: &ExperimentConfig, index: u64) -> Result<Vec<ReplicationOutcome>> {
    let n_max = *config.n_grid.last().expect("validated non-empty");
    let mut stream = RngStream::new(config.master_seed, index);
    let path = simulate_path(&config.params, n_max, &mut stream)?;
    let reps = config.replications as u64;

    config
        .n_grid
        .iter()
        .map(|&n| {
            let first = scaled_statistic_with(&path.prefix(n), &config.params, config.stat, config.qn_convention);
            match (first, config.regime_empty_policy) {
                (Ok(v), _) => Ok(ReplicationOutcome::Value(v)),
                (Err(e), _) if !is_droppable(&e) => Err(e),
                (Err(_), RegimeEmptyPolicy::DropAndCount) => Ok(ReplicationOutcome::Dropped),
                (Err(_), RegimeEmptyPolicy::Resample) => {
                    for attempt in 1..=MAX_RESAMPLE {
                        let mut s = RngStream::new(config.master_seed, index + attempt * reps);
                        let fresh = simulate_path(&config.params, n, &mut s)?;
                        match scaled_statistic_with(&fresh, &config.params, config.stat, config.qn_convention) {
                            Ok(v) => return Ok(ReplicationOutcome::Value(v)),
                            Err(e) if !is_droppable(&e) => return Err(e),
                            Err(_) => {}
                        }
                    }
                    Ok(ReplicationOutcome::Dropped)
                }
            }
        })
        .collect()
}

fn is_droppable(e: &Error) -> bool {
    matches!(e, Error::RegimeEmpty(_) | Error::DegenerateProblem(_))
}

/// Runs `R` replications for every `n` in the grid.
pub fn run_experiment(config: &ExperimentConfig) -> Result<BTreeMap<usize, EmpiricalDistribution>> {
    config.validate()?;
    let outcomes: Vec<Vec<ReplicationOutcome>> = (0..config.replications as u64)
        .into_par_iter()
        .map(|i| run_replication(config, i))
        .collect::<Result<_>>()?;

    let provenance = Provenance {
        config_hash: config.hash(),
        seed: config.master_seed,
    };
    let mut out = BTreeMap::new();
    for (col, &n) in config.n_grid.iter().enumerate() {
        let mut values = Vec::with_capacity(outcomes.len());
        let mut dropped = 0;
        for row in &outcomes {
            match row[col] {
                ReplicationOutcome::Value(v) => values.push(v),
                ReplicationOutcome::Dropped => dropped += 1,
            }
        }
        if values.is_empty() {
            return Err(Error::AllReplicationsDegenerate {
                n,
                replications: config.replications,
            });
        }
        let dist = EmpiricalDistribution::new(values)
            .with_dropped(dropped)
            .with_provenance(provenance.clone());
        out.insert(n, dist);
    }
    Ok(out)
}

/// Draws the reference sample described by `law` for the model `params`.
/// Draw `i` uses stream `(seed, i)`; the ratio law uses `(seed, 2i)` for
/// `eta*` and `(seed, 2i + 1)` for `xi*`. Failed draws are counted as
/// dropped.
pub fn sample_limit_law(law: &LimitLawSpec, params: &TarParams) -> Result<EmpiricalDistribution> {
    let seed = law.seed();
    let draw = |i: u64| -> Result<Option<f64>> {
        let v = match *law {
            LimitLawSpec::DfFunctional { m, .. } => sample_df_functional(m, &mut RngStream::new(seed, i)),
            LimitLawSpec::AbsBrownian { m, .. } => {
                sample_abs_bm_marginal(1.0, params.noise.sigma(), m, &mut RngStream::new(seed, i))
            }
            LimitLawSpec::DriftNormal { .. } => {
                if params.gamma == 0.0 {
                    return Err(invalid("gamma", "drift limit law needs gamma != 0"));
                }
                let sd = (3.0 * params.noise.variance()).sqrt() / params.gamma.abs();
                Ok(sd * RngStream::new(seed, i).standard_normal())
            }
            LimitLawSpec::LimitRatio { horizon, .. } => sample_limit_ratio(
                params,
                horizon,
                &mut RngStream::new(seed, 2 * i),
                &mut RngStream::new(seed, 2 * i + 1),
            ),
        };
        match v {
            Ok(x) => Ok(Some(x)),
            Err(Error::TailGuardFailed | Error::DivisionGuard(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let raw: Vec<Option<f64>> = (0..law.draws() as u64)
        .into_par_iter()
        .map(draw)
        .collect::<Result<_>>()?;
    let dropped = raw.iter().filter(|v| v.is_none()).count();
    let dist = EmpiricalDistribution::new(raw.into_iter().flatten().collect()).with_dropped(dropped);
    if dist.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    Ok(dist)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantileRow {
    pub p: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NSummary {
    pub n: usize,
    pub kept: usize,
    pub n_dropped: usize,
    pub dropped_fraction: f64,
    pub quantiles: Vec<QuantileRow>,
    pub ks_vs_limit: Option<f64>,
}

/// Everything an experiment run produces, minus wall-clock bookkeeping.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub distributions: BTreeMap<usize, EmpiricalDistribution>,
    pub limit: Option<EmpiricalDistribution>,
    pub summaries: Vec<NSummary>,
    pub convergence: Option<Vec<ConvergenceRow>>,
    pub warnings: Vec<String>,
}

pub fn summarize(dist: &EmpiricalDistribution, n: usize, limit: Option<&EmpiricalDistribution>) -> Result<NSummary> {
    let quantiles = SUMMARY_PROBS
        .iter()
        .map(|&p| Ok(QuantileRow { p, value: dist.quantile(p)? }))
        .collect::<Result<Vec<_>>>()?;
    let ks_vs_limit = limit.map(|l| ks_two_sample(dist, l)).transpose()?;
    let total = dist.len() + dist.n_dropped;
    Ok(NSummary {
        n,
        kept: dist.len(),
        n_dropped: dist.n_dropped,
        dropped_fraction: dist.n_dropped as f64 / total as f64,
        quantiles,
        ks_vs_limit,
    })
}

/// Runs the experiment and, when a limit law is configured, samples it and
/// attaches KS distances.
pub fn run_and_compare(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let distributions = run_experiment(config)?;
    let limit = config
        .limit_law
        .as_ref()
        .map(|law| sample_limit_law(law, &config.params))
        .transpose()?;
    let summaries = distributions
        .iter()
        .map(|(&n, d)| summarize(d, n, limit.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let convergence = matches!(config.stat, StatKind::ConstrainedAlphaError | StatKind::BetaError)
        .then(|| convergence_rows(&distributions))
        .transpose()?;
    Ok(ExperimentReport {
        config: config.clone(),
        distributions,
        limit,
        summaries,
        convergence,
        warnings: config.warnings(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub median_abs_error: f64,
    pub iqr: f64,
    pub n_dropped: usize,
}

fn convergence_rows(dists: &BTreeMap<usize, EmpiricalDistribution>) -> Result<Vec<ConvergenceRow>> {
    dists
        .iter()
        .map(|(&n, d)| {
            let abs = EmpiricalDistribution::new(d.samples().iter().map(|x| x.abs()).collect());
            Ok(ConvergenceRow {
                n,
                median_abs_error: abs.median()?,
                iqr: d.iqr()?,
                n_dropped: d.n_dropped,
            })
        })
        .collect()
}

/// Median absolute error and IQR of the error per `n`, for the two error
/// statistics.
pub fn convergence_table(config: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    if !matches!(config.stat, StatKind::ConstrainedAlphaError | StatKind::BetaError) {
        return Err(invalid(
            "stat",
            "convergence tables need constrained_alpha_error or beta_error",
        ));
    }
    convergence_rows(&run_experiment(config)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::noise::NoiseSpec;

    fn dist(xs: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(xs.to_vec())
    }

    /// Sup of |F_a - F_b| over every sample point, by direct evaluation.
    fn ks_brute(a: &EmpiricalDistribution, b: &EmpiricalDistribution) -> f64 {
        a.samples()
            .iter()
            .chain(b.samples())
            .map(|&x| (a.ecdf(x) - b.ecdf(x)).abs())
            .fold(0.0, f64::max)
    }

    #[test]
    fn quantile_examples() {
        let d = dist(&[3.0, 1.0, 2.0]);
        assert_eq!(d.quantile(0.5).unwrap(), 2.0);
        assert_eq!(d.quantile(0.0).unwrap(), 1.0);
        assert_eq!(d.quantile(1.0).unwrap(), 3.0);
        assert_eq!(dist(&[0.0, 10.0]).quantile(0.25).unwrap(), 2.5);
        assert_eq!(dist(&[]).quantile(0.5), Err(Error::EmptyDistribution));
        assert!(d.quantile(1.5).is_err());
    }

    #[test]
    fn ks_examples() {
        let d = dist(&[1.0, 5.0, 2.0]);
        assert_eq!(ks_two_sample(&d, &d).unwrap(), 0.0);
        assert_eq!(ks_two_sample(&dist(&[0.0, 0.0]), &dist(&[1.0, 1.0])).unwrap(), 1.0);
        let (a, b) = (dist(&[1.0, 3.0]), dist(&[2.0, 4.0]));
        assert_eq!(ks_brute(&a, &b), 0.5);
        assert_eq!(ks_two_sample(&a, &b).unwrap(), 0.5);
        assert_eq!(ks_two_sample(&dist(&[]), &d), Err(Error::EmptyDistribution));
    }

    #[test]
    fn ks_ties_match_brute_force() {
        let a = dist(&[1.0, 1.0, 2.0, 2.0, 2.0, 5.0]);
        let b = dist(&[1.0, 2.0, 2.0, 3.0]);
        assert!((ks_two_sample(&a, &b).unwrap() - ks_brute(&a, &b)).abs() < 1e-15);
    }

    #[test]
    fn nan_counted_as_dropped() {
        let d = dist(&[1.0, f64::NAN, 0.0]);
        assert_eq!(d.samples(), &[0.0, 1.0]);
        assert_eq!(d.n_dropped, 1);
    }

    #[test]
    fn zero_noise_replications_identical() {
        let p = TarParams::new(1.0, 0.5, 0.0, NoiseSpec::zero()).with_y0(1.0);
        let cfg = ExperimentConfig::new(p, StatKind::UnitRootAlpha, vec![5], 3, 1);
        let out = run_experiment(&cfg).unwrap();
        let s = out[&5].samples();
        assert_eq!(s.len(), 3);
        assert!(s.iter().all(|&x| x == s[0]));
        assert_eq!(s[0], 0.0);
    }

    #[test]
    fn config_validation() {
        let p = TarParams::new(1.0, 0.5, 0.0, NoiseSpec::default());
        let ok = ExperimentConfig::new(p, StatKind::UnitRootAlpha, vec![10, 20], 5, 1);
        assert!(ok.validate().is_ok());
        let mut bad = ok.clone();
        bad.n_grid = vec![20, 10];
        assert!(bad.validate().is_err());
        bad.n_grid = vec![10];
        bad.replications = 1;
        assert!(bad.validate().is_err());
        assert_eq!(ok.hash(), ok.clone().hash());
        let mut other = ok.clone();
        other.master_seed = 2;
        assert_ne!(ok.hash(), other.hash());
    }

    #[test]
    fn all_dropped_is_an_error() {
        // upper regime never visited
        let p = TarParams::new(1.0, 0.5, 10.0, NoiseSpec::zero());
        let cfg = ExperimentConfig::new(p, StatKind::UnitRootAlpha, vec![5], 3, 1);
        assert!(matches!(
            run_experiment(&cfg),
            Err(Error::AllReplicationsDegenerate { n: 5, .. })
        ));
    }

    #[test]
    fn resample_policy_fills_dropped_replications() {
        let p = TarParams::new(1.5, 0.5, 0.0, NoiseSpec::default());
        let base = ExperimentConfig::new(p, StatKind::BetaError, vec![30], 200, 9);
        let dropped = run_experiment(&base).unwrap();
        assert!(dropped[&30].n_dropped > 0);
        let resampled = run_experiment(&base.clone().with_policy(RegimeEmptyPolicy::Resample)).unwrap();
        assert!(resampled[&30].n_dropped < dropped[&30].n_dropped);
        assert!(resampled[&30].len() > dropped[&30].len());
    }

    #[test]
    fn warnings_flag_mismatches() {
        let p = TarParams::new(0.5, 0.5, 0.0, NoiseSpec::default());
        let cfg = ExperimentConfig::new(p, StatKind::UnitRootAlpha, vec![10], 5, 1)
            .with_limit_law(LimitLawSpec::LimitRatio { horizon: 100, draws: 10, seed: 1 });
        assert_eq!(cfg.warnings().len(), 2);
    }

    #[test]
    fn convergence_table_rejects_other_stats() {
        let p = TarParams::new(1.0, 0.5, 0.0, NoiseSpec::default());
        let cfg = ExperimentConfig::new(p, StatKind::UnitRootAlpha, vec![10], 5, 1);
        assert!(convergence_table(&cfg).is_err());
    }

    #[test]
    fn zero_noise_reciprocal_medians_are_zero() {
        let p = TarParams::new(2.0, 0.5, 0.0, NoiseSpec::zero()).with_y0(1.0);
        let cfg = ExperimentConfig::new(p, StatKind::ConstrainedAlphaError, vec![5, 10, 20], 4, 3);
        let rows = convergence_table(&cfg).unwrap();
        assert!(rows.iter().all(|r| r.median_abs_error == 0.0 && r.iqr == 0.0));
    }

    #[test]
    fn ks_critical_value_known_point() {
        // c(0.05) = 1.3581
        let c = ks_critical_value(0.05, 1, 1) / 2f64.sqrt();
        assert!((c - 1.3581).abs() < 1e-4);
    }
}
