//! Least-squares estimation of the regime slopes.
//!
//! All estimators use every transition `(Y_t, Y_{t+1})`, `t = 0..n-1`, of a
//! path `Y_0..Y_n`. Sums of squares are formed on a power-of-two rescaled
//! copy when the path is large, which leaves every ratio bit-identical.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{invalid, Error, Regime, Result};
use crate::roots::Polynomial;
use crate::tar_model::{Path, TarParams};

/// Paths whose magnitude exceeds `2^RESCALE_EXPONENT` are rescaled before
/// squaring.
const RESCALE_EXPONENT: i32 = 400;

fn power_of_two_scale(values: &[f64]) -> f64 {
    let max = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if max > 2f64.powi(RESCALE_EXPONENT) {
        2f64.powi(-(max.log2().floor() as i32))
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    pub alpha_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub n_upper: usize,
    pub n_lower: usize,
    /// `|sum Y_t (Y_{t+1} - gamma - alpha_hat Y_t)|` over the upper regime,
    /// relative to the summed magnitude of its terms. Zero when empty.
    pub residual_orthogonality_upper: f64,
    pub residual_orthogonality_lower: f64,
}

impl EstimateResult {
    pub fn alpha(&self) -> Result<f64> {
        self.alpha_hat.ok_or(Error::RegimeEmpty(Regime::Upper))
    }

    pub fn beta(&self) -> Result<f64> {
        self.beta_hat.ok_or(Error::RegimeEmpty(Regime::Lower))
    }
}

impl Serialize for EstimateResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Json {
            alpha_hat: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            alpha_hat_reason: Option<&'static str>,
            beta_hat: Option<f64>,
            #[serde(skip_serializing_if = "Option::is_none")]
            beta_hat_reason: Option<&'static str>,
            n_upper: usize,
            n_lower: usize,
            residual_orthogonality_upper: f64,
            residual_orthogonality_lower: f64,
        }
        let reason = |v: Option<f64>| v.is_none().then_some("regime_empty");
        Json {
            alpha_hat: self.alpha_hat,
            alpha_hat_reason: reason(self.alpha_hat),
            beta_hat: self.beta_hat,
            beta_hat_reason: reason(self.beta_hat),
            n_upper: self.n_upper,
            n_lower: self.n_lower,
            residual_orthogonality_upper: self.residual_orthogonality_upper,
            residual_orthogonality_lower: self.residual_orthogonality_lower,
        }
        .serialize(s)
    }
}

#[derive(Default)]
struct RegimeSums {
    count: usize,
    yy: f64,
    yz: f64,
}

/// Least-squares slopes with known intercept `gamma`.
///
/// `alpha_hat = sum I(Y_t > r) Y_t (Y_{t+1} - gamma) / sum I(Y_t > r) Y_t^2`,
/// and `beta_hat` likewise over `Y_t <= r`.
pub fn lse(values: &[f64], r: f64, gamma: f64) -> Result<EstimateResult> {
    if values.len() < 3 {
        return Err(invalid("path", format!("need at least 3 values, got {}", values.len())));
    }
    let s = power_of_two_scale(values);
    let mut upper = RegimeSums::default();
    let mut lower = RegimeSums::default();
    for w in values.windows(2) {
        let y = w[0] * s;
        let z = (w[1] - gamma) * s;
        let sums = if w[0] > r { &mut upper } else { &mut lower };
        sums.count += 1;
        sums.yy += y * y;
        sums.yz += y * z;
    }
    let slope = |sums: &RegimeSums| (sums.yy != 0.0).then(|| sums.yz / sums.yy);
    let alpha_hat = slope(&upper);
    let beta_hat = slope(&lower);

    let residual = |upper_side: bool, coef: Option<f64>| -> f64 {
        let Some(c) = coef else { return 0.0 };
        let mut num = 0.0;
        let mut scale = 0.0;
        for w in values.windows(2) {
            if (w[0] > r) != upper_side {
                continue;
            }
            let y = w[0] * s;
            let z = (w[1] - gamma) * s;
            num += y * (z - c * y);
            scale += (y * z).abs() + c.abs() * y * y;
        }
        if scale == 0.0 {
            0.0
        } else {
            num.abs() / scale
        }
    };

    Ok(EstimateResult {
        alpha_hat,
        beta_hat,
        n_upper: upper.count,
        n_lower: lower.count,
        residual_orthogonality_upper: residual(true, alpha_hat),
        residual_orthogonality_lower: residual(false, beta_hat),
    })
}

/// Which regime's lagged value the free coefficient `x` multiplies in
/// `Q_n(x)`; the other regime gets `1/x`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QnConvention {
    /// `x` on `Y_{t-1} > r`, `1/x` on `Y_{t-1} <= r`.
    #[default]
    XOnUpper,
    /// `x` on `Y_{t-1} <= r`, `1/x` on `Y_{t-1} > r`.
    XOnLower,
}

impl QnConvention {
    fn x_regime(self, prev: f64, r: f64) -> bool {
        match self {
            QnConvention::XOnUpper => prev > r,
            QnConvention::XOnLower => prev <= r,
        }
    }

    fn x_side(self) -> Regime {
        match self {
            QnConvention::XOnUpper => Regime::Upper,
            QnConvention::XOnLower => Regime::Lower,
        }
    }

    fn reciprocal_side(self) -> Regime {
        match self {
            QnConvention::XOnUpper => Regime::Lower,
            QnConvention::XOnLower => Regime::Upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignDomain {
    Positive,
    Negative,
}

/// Residual sum of squares under the reciprocal-slope constraint,
/// `sum (Y_t - x a_t - b_t / x)^2` with `a_t`, `b_t` the lagged value split
/// by regime.
pub fn q_n_eval(values: &[f64], r: f64, x: f64, convention: QnConvention) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain(format!("Q_n needs a finite nonzero x, got {x}")));
    }
    Ok(q_n_scaled(values, r, x, convention, 1.0))
}

fn q_n_scaled(values: &[f64], r: f64, x: f64, convention: QnConvention, s: f64) -> f64 {
    let inv = 1.0 / x;
    values
        .windows(2)
        .map(|w| {
            let prev = w[0] * s;
            let fitted = if convention.x_regime(w[0], r) { x * prev } else { inv * prev };
            let e = w[1] * s - fitted;
            e * e
        })
        .sum()
}

/// Sums behind the stationarity quartic `A x^4 - B x^3 + C x - D = 0`,
/// obtained from `dQ_n/dx` multiplied by `x^3 / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarticSums {
    /// `sum a_t^2`
    pub a: f64,
    /// `sum a_t Y_t`
    pub b: f64,
    /// `sum b_t Y_t`
    pub c: f64,
    /// `sum b_t^2`
    pub d: f64,
    /// Power-of-two factor the path was multiplied by.
    pub scale: f64,
}

impl QuarticSums {
    pub fn from_values(values: &[f64], r: f64, convention: QnConvention) -> Self {
        let scale = power_of_two_scale(values);
        let mut sums = QuarticSums {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            d: 0.0,
            scale,
        };
        for w in values.windows(2) {
            let prev = w[0] * scale;
            let y = w[1] * scale;
            if convention.x_regime(w[0], r) {
                sums.a += prev * prev;
                sums.b += prev * y;
            } else {
                sums.c += prev * y;
                sums.d += prev * prev;
            }
        }
        sums
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(vec![-self.d, self.c, 0.0, -self.b, self.a])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedEstimate {
    pub x: f64,
    /// Set when only one regime holds data; the estimate is then the
    /// single-regime least-squares slope (or its reciprocal).
    pub single_regime: Option<Regime>,
}

/// Global minimizer of `Q_n` over the chosen half-line.
pub fn constrained_lse(
    values: &[f64],
    r: f64,
    sign: SignDomain,
    convention: QnConvention,
) -> Result<ConstrainedEstimate> {
    if values.len() < 2 {
        return Err(invalid("path", "need at least one transition"));
    }
    let sums = QuarticSums::from_values(values, r, convention);
    let in_domain = |x: f64| match sign {
        SignDomain::Positive => x > 0.0 && x.is_finite(),
        SignDomain::Negative => x < 0.0 && x.is_finite(),
    };
    let outside = |x: f64| {
        Error::DegenerateProblem(format!(
            "single-regime minimizer {x} lies outside the {sign:?} domain"
        ))
    };

    match (sums.a == 0.0, sums.d == 0.0) {
        (true, true) => {
            return Err(Error::DegenerateProblem("both regressor sums are zero".into()));
        }
        (false, true) => {
            let x = sums.b / sums.a;
            return if in_domain(x) {
                Ok(ConstrainedEstimate {
                    x,
                    single_regime: Some(convention.x_side()),
                })
            } else {
                Err(outside(x))
            };
        }
        (true, false) => {
            let x = sums.d / sums.c;
            return if in_domain(x) {
                Ok(ConstrainedEstimate {
                    x,
                    single_regime: Some(convention.reciprocal_side()),
                })
            } else {
                Err(outside(x))
            };
        }
        (false, false) => {}
    }

    // Cauchy bounds on |root| for the quartic and its reversal.
    let (a, b, c, d) = (sums.a, sums.b.abs(), sums.c.abs(), sums.d);
    let upper = 1.0 + b.max(c).max(d) / a;
    let lower = d / (d + a.max(b).max(c));
    let (lo, hi) = match sign {
        SignDomain::Positive => (0.5 * lower, 2.0 * upper),
        SignDomain::Negative => (-2.0 * upper, -0.5 * lower),
    };
    let (roots, critical) = sums.polynomial().isolate(lo, hi);
    // Q_n blows up at both ends of the half-line, so the global minimum is
    // a stationary point; critical points of the quartic are kept only as
    // fallbacks in case rounding hides a sign change.
    let objective = |x: f64| q_n_scaled(values, r, x, convention, sums.scale);
    roots
        .iter()
        .chain(critical.iter())
        .copied()
        .filter(|&x| in_domain(x))
        .map(|x| (x, objective(x)))
        .min_by(|p, q| p.1.total_cmp(&q.1))
        .map(|(x, _)| ConstrainedEstimate {
            x,
            single_regime: None,
        })
        .ok_or_else(|| Error::DegenerateProblem("no stationary point in the sign domain".into()))
}

/// Scaled error statistics whose limit laws are known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatKind {
    /// `n (alpha_hat - 1)`
    UnitRootAlpha,
    /// `n (beta_hat - 1)`
    UnitRootBeta,
    /// `n^{3/2} (alpha_hat - 1)`
    DriftedUnitRootAlpha,
    /// `(alpha^2 - 1)^{-1} alpha^n (alpha_hat - alpha)`
    ExplosiveAlpha,
    /// `x_hat - alpha` for the reciprocal-slope estimator
    ConstrainedAlphaError,
    /// `beta_hat - beta`
    BetaError,
    /// `Y_n / sqrt(n)`
    TerminalValue,
}

impl StatKind {
    /// Applies the scaling to a raw estimate (or to `Y_n` for
    /// [`StatKind::TerminalValue`]).
    pub fn scale(self, estimate: f64, n: usize, truth: &TarParams) -> f64 {
        let nf = n as f64;
        match self {
            StatKind::UnitRootAlpha | StatKind::UnitRootBeta => nf * (estimate - 1.0),
            StatKind::DriftedUnitRootAlpha => nf * nf.sqrt() * (estimate - 1.0),
            StatKind::ExplosiveAlpha => {
                let alpha = truth.alpha;
                let diff = estimate - alpha;
                let base = diff / (alpha * alpha - 1.0);
                let log_pow = nf * alpha.ln();
                if log_pow < 700.0 {
                    base * alpha.powi(n as i32)
                } else if diff == 0.0 {
                    0.0
                } else {
                    base.signum() * (base.abs().ln() + log_pow).exp()
                }
            }
            StatKind::ConstrainedAlphaError => estimate - truth.alpha,
            StatKind::BetaError => estimate - truth.beta,
            StatKind::TerminalValue => estimate / nf.sqrt(),
        }
    }
}

pub fn scaled_statistic(path: &Path, truth: &TarParams, kind: StatKind) -> Result<f64> {
    scaled_statistic_with(path, truth, kind, QnConvention::default())
}

pub fn scaled_statistic_with(
    path: &Path,
    truth: &TarParams,
    kind: StatKind,
    convention: QnConvention,
) -> Result<f64> {
    let values = path.values();
    let n = path.n();
    let raw = match kind {
        StatKind::UnitRootAlpha | StatKind::DriftedUnitRootAlpha | StatKind::ExplosiveAlpha => {
            lse(values, truth.r, truth.gamma)?.alpha()?
        }
        StatKind::UnitRootBeta | StatKind::BetaError => lse(values, truth.r, truth.gamma)?.beta()?,
        StatKind::ConstrainedAlphaError => {
            let sign = if truth.alpha < 0.0 {
                SignDomain::Negative
            } else {
                SignDomain::Positive
            };
            constrained_lse(values, truth.r, sign, convention)?.x
        }
        StatKind::TerminalValue => path.last(),
    };
    Ok(kind.scale(raw, n, truth))
}
