//! The TAR(1) recursion
//!
//! ```text
//! Y_t = gamma + alpha * Y_{t-1} + eps_t   if Y_{t-1} >  r
//! Y_t = delta + beta  * Y_{t-1} + eps_t   if Y_{t-1} <= r
//! ```
//!
//! together with the regime taxonomy used to decide which limit theory
//! applies to a parameter point.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::{NoiseSpec, RngStream};

/// Paths whose magnitude exceeds this are rejected.
pub const OVERFLOW_LIMIT: f64 = 1e280;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TarParams {
    pub gamma: f64,
    pub delta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub r: f64,
    pub noise: NoiseSpec,
    pub y0: f64,
    /// When set, `Y_0 ~ N(y0, y0_sd^2)` drawn from the path stream before
    /// the innovations.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0_sd: Option<f64>,
}

impl TarParams {
    /// Zero intercepts, `Y_0 = 0`.
    pub fn new(alpha: f64, beta: f64, r: f64, noise: NoiseSpec) -> Self {
        Self {
            gamma: 0.0,
            delta: 0.0,
            alpha,
            beta,
            r,
            noise,
            y0: 0.0,
            y0_sd: None,
        }
    }

    pub fn with_intercepts(mut self, gamma: f64, delta: f64) -> Self {
        self.gamma = gamma;
        self.delta = delta;
        self
    }

    pub fn with_y0(mut self, y0: f64) -> Self {
        self.y0 = y0;
        self
    }

    pub fn with_random_y0(mut self, mean: f64, sd: f64) -> Self {
        self.y0 = mean;
        self.y0_sd = Some(sd);
        self
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("gamma", self.gamma),
            ("delta", self.delta),
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("r", self.r),
            ("y0", self.y0),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(invalid(name, format!("must be finite, got {v}")));
            }
        }
        if let Some(sd) = self.y0_sd {
            if !(sd.is_finite() && sd >= 0.0) {
                return Err(invalid("y0_sd", format!("must be finite and >= 0, got {sd}")));
            }
        }
        Ok(())
    }

    /// One step of the recursion.
    #[inline]
    pub fn step(&self, prev: f64, eps: f64) -> f64 {
        if prev > self.r {
            self.gamma + self.alpha * prev + eps
        } else {
            self.delta + self.beta * prev + eps
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RegimeFlag {
    StationaryErgodic,
    UnitRootCaseI,
    MirroredUnitRoot,
    #[serde(rename = "explosive_case_ii_h1")]
    ExplosiveCaseIIH1,
    #[serde(rename = "explosive_case_ii_h2")]
    ExplosiveCaseIIH2,
    ReciprocalProduct,
    DriftedUnitRoot,
    ConsistencyRegion,
    #[serde(rename = "h2_violated_by_noise")]
    H2ViolatedByNoise,
    Unclassified,
}

impl RegimeFlag {
    pub const ALL: [RegimeFlag; 10] = [
        RegimeFlag::StationaryErgodic,
        RegimeFlag::UnitRootCaseI,
        RegimeFlag::MirroredUnitRoot,
        RegimeFlag::ExplosiveCaseIIH1,
        RegimeFlag::ExplosiveCaseIIH2,
        RegimeFlag::ReciprocalProduct,
        RegimeFlag::DriftedUnitRoot,
        RegimeFlag::ConsistencyRegion,
        RegimeFlag::H2ViolatedByNoise,
        RegimeFlag::Unclassified,
    ];

    fn bit(self) -> u16 {
        1 << (self as u16)
    }
}

/// Set of [`RegimeFlag`]s; flags are not mutually exclusive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct RegimeFlags(u16);

impl RegimeFlags {
    pub fn empty() -> Self {
        Self(0)
    }

    pub fn insert(&mut self, flag: RegimeFlag) {
        self.0 |= flag.bit();
    }

    pub fn contains(&self, flag: RegimeFlag) -> bool {
        self.0 & flag.bit() != 0
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = RegimeFlag> + '_ {
        RegimeFlag::ALL.into_iter().filter(|f| self.contains(*f))
    }

    pub fn is_explosive(&self) -> bool {
        self.contains(RegimeFlag::ExplosiveCaseIIH1) || self.contains(RegimeFlag::ExplosiveCaseIIH2)
    }
}

impl FromIterator<RegimeFlag> for RegimeFlags {
    fn from_iter<I: IntoIterator<Item = RegimeFlag>>(iter: I) -> Self {
        let mut flags = Self::empty();
        for f in iter {
            flags.insert(f);
        }
        flags
    }
}

impl fmt::Display for RegimeFlags {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.iter().map(|x| format!("{x:?}")).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl Serialize for RegimeFlags {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Exact classification of a parameter point. Comparisons are exact on
/// purpose: the boundary cases (`alpha == 1`, `r == 0`, ...) are the point.
pub fn classify_regime(p: &TarParams) -> RegimeFlags {
    use RegimeFlag::*;
    let (g, d, a, b, r) = (p.gamma, p.delta, p.alpha, p.beta, p.r);
    let zero_intercepts = g == 0.0 && d == 0.0;
    let mut flags = RegimeFlags::empty();

    if zero_intercepts && a < 1.0 && b < 1.0 && a * b < 1.0 {
        flags.insert(StationaryErgodic);
    }
    if zero_intercepts && a == 1.0 && ((b < 1.0 && r <= 0.0) || b == -1.0) {
        flags.insert(UnitRootCaseI);
    }
    if zero_intercepts && a < 1.0 && b == 1.0 && r >= 0.0 {
        flags.insert(MirroredUnitRoot);
    }
    if zero_intercepts && a > 1.0 && b <= 1.0 {
        if r == 0.0 {
            flags.insert(ExplosiveCaseIIH1);
        } else {
            flags.insert(ExplosiveCaseIIH2);
            if !p.noise.is_unbounded_above() {
                flags.insert(H2ViolatedByNoise);
            }
        }
    }
    if zero_intercepts && a * b == 1.0 && a > 0.0 && a != 1.0 {
        flags.insert(ReciprocalProduct);
    }
    if g == d && g > 0.0 && a == 1.0 && b < 1.0 && r <= 0.0 {
        flags.insert(DriftedUnitRoot);
    }
    let consistent = (a <= 1.0 && b <= 1.0 && g == 0.0)
        || (a < 1.0 && b <= 1.0 && g > 0.0)
        || (a <= 1.0 && b < 1.0 && g < 0.0);
    if consistent {
        flags.insert(ConsistencyRegion);
    }
    if flags.is_empty() {
        flags.insert(Unclassified);
    }
    flags
}

/// A realized trajectory `Y_0..Y_n` with the innovations `eps_1..eps_n`
/// that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Path {
    values: Vec<f64>,
    innovations: Vec<f64>,
    params: TarParams,
    #[serde(default)]
    provenance: Option<SeedProvenance>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedProvenance {
    pub master_seed: u64,
    pub stream_id: u64,
}

impl Path {
    /// Runs the recursion from `y0` over the given innovations.
    pub fn replay(params: &TarParams, y0: f64, innovations: Vec<f64>) -> Result<Self> {
        let mut values = Vec::with_capacity(innovations.len() + 1);
        values.push(y0);
        let mut prev = y0;
        for (i, &eps) in innovations.iter().enumerate() {
            let next = params.step(prev, eps);
            if !(next.abs() <= OVERFLOW_LIMIT) {
                return Err(Error::Overflow {
                    index: i + 1,
                    value: next.abs(),
                    limit: OVERFLOW_LIMIT,
                });
            }
            values.push(next);
            prev = next;
        }
        Ok(Self {
            values,
            innovations,
            params: *params,
            provenance: None,
        })
    }

    /// Wraps an observed series, backing out the innovations implied by
    /// `params`.
    pub fn from_observations(params: &TarParams, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("values", "a path needs at least Y_0"));
        }
        let innovations = values
            .windows(2)
            .map(|w| w[1] - params.step(w[0], 0.0))
            .collect();
        Ok(Self {
            values,
            innovations,
            params: *params,
            provenance: None,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn innovations(&self) -> &[f64] {
        &self.innovations
    }

    pub fn params(&self) -> &TarParams {
        &self.params
    }

    pub fn provenance(&self) -> Option<SeedProvenance> {
        self.provenance
    }

    /// Number of transitions.
    pub fn n(&self) -> usize {
        self.innovations.len()
    }

    pub fn last(&self) -> f64 {
        *self.values.last().expect("path holds Y_0")
    }

    /// The path `Y_0..Y_n` for `n <= self.n()`. Because innovations are drawn
    /// in order, this equals the path a fresh simulation of length `n` on the
    /// same stream would produce.
    pub fn prefix(&self, n: usize) -> Path {
        let n = n.min(self.n());
        Path {
            values: self.values[..=n].to_vec(),
            innovations: self.innovations[..n].to_vec(),
            params: self.params,
            provenance: self.provenance,
        }
    }

    /// Replays the recursion and compares bit-for-bit.
    pub fn reconstructs_exactly(&self) -> bool {
        let mut prev = self.values[0];
        for (eps, &y) in self.innovations.iter().zip(&self.values[1..]) {
            let next = self.params.step(prev, *eps);
            if next.to_bits() != y.to_bits() {
                return false;
            }
            prev = next;
        }
        true
    }
}

pub fn simulate_path(params: &TarParams, n: usize, stream: &mut RngStream) -> Result<Path> {
    if n == 0 {
        return Err(invalid("n", "must be >= 1"));
    }
    params.validate()?;
    let y0 = match params.y0_sd {
        Some(sd) => params.y0 + sd * stream.standard_normal(),
        None => params.y0,
    };
    let innovations: Vec<f64> = (0..n).map(|_| params.noise.draw(stream)).collect();
    let mut path = Path::replay(params, y0, innovations)?;
    path.provenance = Some(SeedProvenance {
        master_seed: stream.master_seed(),
        stream_id: stream.stream_id(),
    });
    Ok(path)
}

/// `Y_n / alpha^n`, the finite-horizon proxy for the almost-sure limit in
/// the explosive regime.
pub fn scaled_tail_ratio(path: &Path) -> Result<f64> {
    let alpha = path.params.alpha;
    if !(alpha > 1.0) {
        return Err(Error::Domain(format!("tail ratio needs alpha > 1, got {alpha}")));
    }
    Ok(divide_by_power(path.last(), alpha, path.n()))
}

/// `y / base^n` without forming an overflowing power.
pub(crate) fn divide_by_power(y: f64, base: f64, n: usize) -> f64 {
    let log_pow = n as f64 * base.ln();
    if log_pow < 700.0 && n <= i32::MAX as usize {
        y / base.powi(n as i32)
    } else if y == 0.0 {
        0.0
    } else {
        y.signum() * (y.abs().ln() - log_pow).exp()
    }
}
