//! Samplers for the limiting random variables: the Dickey–Fuller type
//! Brownian functional, `sigma |B(t)|`, the discounted innovation series
//! `eta*`, the explosive growth constant `xi`, and the ratio `eta*/xi*`.
//!
//! These are built independently of the estimators so that a Monte Carlo
//! distribution of a statistic can be checked against them.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::{NoiseSpec, RngStream};
use crate::tar_model::{divide_by_power, simulate_path, Path, TarParams};

/// `eta*` is truncated once `alpha^-K` drops below this.
pub const ETA_TRUNCATION: f64 = 1e-12;
/// Minimum decay `alpha^-horizon` required of a `xi` horizon.
pub const XI_HORIZON_DECAY: f64 = 1e-10;
pub const DIVISION_GUARD: f64 = 1e-300;

/// Standard Brownian motion on the grid `0, 1/m, ..., 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BrownianGrid {
    values: Vec<f64>,
}

impl BrownianGrid {
    pub fn sample(m: usize, stream: &mut RngStream) -> Result<Self> {
        Self::sample_with(m, &NoiseSpec::default(), stream)
    }

    /// Builds the grid from `increments`, a unit-variance law scaled by
    /// `1/sqrt(m)`.
    pub fn sample_with(m: usize, increments: &NoiseSpec, stream: &mut RngStream) -> Result<Self> {
        check_grid(m)?;
        let step = (m as f64).sqrt().recip();
        let mut values = Vec::with_capacity(m + 1);
        let mut b = 0.0;
        values.push(b);
        for _ in 0..m {
            b += step * increments.draw(stream);
            values.push(b);
        }
        Ok(Self { values })
    }

    pub fn m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-endpoint Riemann sum `(1/m) sum_{j=1}^m B(j/m)^2`.
    pub fn integral_of_square(&self) -> f64 {
        self.values[1..].iter().map(|b| b * b).sum::<f64>() / self.m() as f64
    }

    /// `(B(1)^2 - 1) / (2 int_0^1 B^2)`
    pub fn df_functional(&self) -> Result<f64> {
        df_ratio(self.values[self.m()], self.integral_of_square())
    }
}

fn check_grid(m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid("m", format!("grid resolution must be >= 2, got {m}")));
    }
    Ok(())
}

fn df_ratio(endpoint: f64, integral: f64) -> Result<f64> {
    if integral == 0.0 {
        return Err(Error::DegenerateIntegral);
    }
    Ok((endpoint * endpoint - 1.0) / (2.0 * integral))
}

pub fn sample_df_functional(m: usize, stream: &mut RngStream) -> Result<f64> {
    sample_df_functional_with(m, &NoiseSpec::default(), stream)
}

/// Same draw as `BrownianGrid::sample_with(..).df_functional()` without
/// storing the grid.
pub fn sample_df_functional_with(
    m: usize,
    increments: &NoiseSpec,
    stream: &mut RngStream,
) -> Result<f64> {
    check_grid(m)?;
    let step = (m as f64).sqrt().recip();
    let mut b = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..m {
        b += step * increments.draw(stream);
        sum_sq += b * b;
    }
    df_ratio(b, sum_sq / m as f64)
}

/// `sigma |B(t)|` at the grid point nearest `t`.
pub fn sample_abs_bm_marginal(t: f64, sigma: f64, m: usize, stream: &mut RngStream) -> Result<f64> {
    check_grid(m)?;
    if !(t > 0.0 && t <= 1.0) {
        return Err(invalid("t", format!("must lie in (0, 1], got {t}")));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(invalid("sigma", format!("must be finite and >= 0, got {sigma}")));
    }
    let j = ((t * m as f64).round() as usize).clamp(1, m);
    // B(j/m) is exactly N(0, j/m); summing j grid increments gives the same law.
    let sd = (j as f64 / m as f64).sqrt();
    Ok(sigma * (sd * stream.standard_normal()).abs())
}

/// Number of terms `K` with `alpha^-K < 1e-12`.
pub fn eta_truncation(alpha: f64) -> usize {
    let mut k = (ETA_TRUNCATION.ln().abs() / alpha.ln()).floor() as usize;
    while alpha.powi(-(k as i32)) >= ETA_TRUNCATION {
        k += 1;
    }
    k
}

/// Truncated `sum_{t=1}^K alpha^-t eps_t`.
pub fn sample_eta_star(alpha: f64, noise: &NoiseSpec, stream: &mut RngStream) -> Result<f64> {
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Domain(format!("eta* needs alpha > 1, got {alpha}")));
    }
    let k = eta_truncation(alpha);
    let inv = alpha.recip();
    let mut weight = 1.0;
    let mut sum = 0.0;
    for _ in 0..k {
        weight *= inv;
        sum += weight * noise.draw(stream);
    }
    Ok(sum)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiConstruction {
    /// `sum_k alpha^-k (beta/alpha)^{m_k} eps_k + (beta/alpha)^{m_0} Y_0`
    /// with `m_k` the number of lower-regime visits from time `k` on.
    /// Requires `beta != 0`.
    CrossingSeries,
    /// Indicator-product form for `beta = 0`: a term survives only if the
    /// path never returns to the lower regime after it.
    SurvivalSeries,
    /// `Y_h / alpha^h`.
    PathRatio,
}

impl XiConstruction {
    pub fn name(self) -> &'static str {
        match self {
            XiConstruction::CrossingSeries => "crossing_series",
            XiConstruction::SurvivalSeries => "survival_series",
            XiConstruction::PathRatio => "path_ratio",
        }
    }

    /// The series form valid for the given lower-regime slope.
    pub fn series_for(beta: f64) -> Self {
        if beta == 0.0 {
            XiConstruction::SurvivalSeries
        } else {
            XiConstruction::CrossingSeries
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiSample {
    pub value: f64,
    pub construction: XiConstruction,
    pub horizon: usize,
    /// No lower-regime visit in the final half of the horizon, so the
    /// crossing counts have plausibly settled.
    pub tail_guard_ok: bool,
}

fn check_explosive(params: &TarParams) -> Result<()> {
    let ok = params.gamma == 0.0 && params.delta == 0.0 && params.alpha > 1.0 && params.beta <= 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "xi is defined for gamma = delta = 0, alpha > 1, beta <= 1; got alpha = {}, beta = {}",
            params.alpha, params.beta
        )))
    }
}

fn check_horizon(alpha: f64, horizon: usize) -> Result<()> {
    if horizon == 0 || divide_by_power(1.0, alpha, horizon) >= XI_HORIZON_DECAY {
        return Err(Error::HorizonTooShort { horizon, alpha });
    }
    Ok(())
}

/// Evaluates one `xi` construction on an existing path `Y_0..Y_h`.
pub fn xi_from_path(path: &Path, construction: XiConstruction) -> Result<XiSample> {
    let params = path.params();
    check_explosive(params)?;
    let (alpha, beta, r) = (params.alpha, params.beta, params.r);
    let values = path.values();
    let horizon = path.n();
    if horizon == 0 {
        return Err(Error::HorizonTooShort { horizon, alpha });
    }

    let value = match construction {
        XiConstruction::PathRatio => divide_by_power(path.last(), alpha, horizon),
        XiConstruction::CrossingSeries | XiConstruction::SurvivalSeries => {
            match (construction, beta == 0.0) {
                (XiConstruction::CrossingSeries, true) | (XiConstruction::SurvivalSeries, false) => {
                    return Err(Error::ConstructionMismatch {
                        construction: construction.name(),
                        beta,
                    });
                }
                _ => {}
            }
            // lower[k] = #{t in [k, h-1] : Y_t <= r}
            let mut lower = vec![0u32; horizon + 1];
            for k in (0..horizon).rev() {
                lower[k] = lower[k + 1] + u32::from(values[k] <= r);
            }
            let ratio = beta / alpha;
            let factor = |m: u32| if m == 0 { 1.0 } else { ratio.powi(m as i32) };
            let inv = alpha.recip();
            let mut weight = 1.0;
            let mut sum = 0.0;
            for (k, eps) in path.innovations().iter().enumerate() {
                weight *= inv;
                sum += weight * factor(lower[k + 1]) * eps;
            }
            sum + factor(lower[0]) * values[0]
        }
    };

    let tail_start = horizon.div_ceil(2);
    let tail_guard_ok = values[tail_start..].iter().all(|&y| y > r);
    Ok(XiSample {
        value,
        construction,
        horizon,
        tail_guard_ok,
    })
}

/// Simulates a path to `horizon` and evaluates `construction` on it.
pub fn sample_xi(
    params: &TarParams,
    horizon: usize,
    construction: XiConstruction,
    stream: &mut RngStream,
) -> Result<XiSample> {
    check_explosive(params)?;
    check_horizon(params.alpha, horizon)?;
    let path = simulate_path(params, horizon, stream)?;
    xi_from_path(&path, construction)
}

/// `eta*/xi*` with the two factors drawn from independent streams.
pub fn sample_limit_ratio(
    params: &TarParams,
    horizon: usize,
    eta_stream: &mut RngStream,
    xi_stream: &mut RngStream,
) -> Result<f64> {
    sample_limit_ratio_with(params, &params.noise, horizon, eta_stream, xi_stream)
}

/// As [`sample_limit_ratio`], with a separate innovation law for `eta*`.
pub fn sample_limit_ratio_with(
    xi_params: &TarParams,
    eta_noise: &NoiseSpec,
    horizon: usize,
    eta_stream: &mut RngStream,
    xi_stream: &mut RngStream,
) -> Result<f64> {
    let xi = sample_xi(
        xi_params,
        horizon,
        XiConstruction::series_for(xi_params.beta),
        xi_stream,
    )?;
    if !xi.tail_guard_ok {
        return Err(Error::TailGuardFailed);
    }
    if xi.value.abs() < DIVISION_GUARD {
        return Err(Error::DivisionGuard(xi.value));
    }
    let eta = sample_eta_star(xi_params.alpha, eta_noise, eta_stream)?;
    Ok(eta / xi.value)
}
