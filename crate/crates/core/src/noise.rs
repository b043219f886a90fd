//! Innovation laws and reproducible random streams.
//!
//! Every stochastic quantity in the crate is drawn from an [`RngStream`], a
//! ChaCha8 generator keyed by `(master_seed, stream_id)`. The seed fixes the
//! key and the stream id selects one of the 2^64 independent ChaCha streams,
//! so replication `i` of an experiment always sees the same variates no
//! matter which worker runs it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseFamily {
    Gaussian,
    Laplace,
    /// Uniform on `[-sigma*sqrt(3), sigma*sqrt(3)]`. Bounded support.
    UniformCentered,
    /// Point mass at zero; only for deterministic tests.
    DegenerateZero,
}

impl NoiseFamily {
    pub fn name(self) -> &'static str {
        match self {
            NoiseFamily::Gaussian => "gaussian",
            NoiseFamily::Laplace => "laplace",
            NoiseFamily::UniformCentered => "uniform_centered",
            NoiseFamily::DegenerateZero => "degenerate_zero",
        }
    }
}

/// Zero-mean innovation law with standard deviation `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNoiseSpec")]
pub struct NoiseSpec {
    family: NoiseFamily,
    sigma: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNoiseSpec {
    family: NoiseFamily,
    #[serde(default)]
    sigma: f64,
}

impl TryFrom<RawNoiseSpec> for NoiseSpec {
    type Error = Error;

    fn try_from(raw: RawNoiseSpec) -> Result<Self> {
        NoiseSpec::new(raw.family, raw.sigma)
    }
}

impl NoiseSpec {
    pub fn new(family: NoiseFamily, sigma: f64) -> Result<Self> {
        if !sigma.is_finite() {
            return Err(invalid("sigma", "must be finite"));
        }
        match family {
            NoiseFamily::DegenerateZero if sigma != 0.0 => {
                Err(invalid("sigma", "degenerate_zero requires sigma = 0"))
            }
            NoiseFamily::DegenerateZero => Ok(Self { family, sigma }),
            _ if sigma <= 0.0 => Err(invalid("sigma", format!("must be > 0, got {sigma}"))),
            _ => Ok(Self { family, sigma }),
        }
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Self::new(NoiseFamily::Gaussian, sigma)
    }

    pub fn zero() -> Self {
        Self {
            family: NoiseFamily::DegenerateZero,
            sigma: 0.0,
        }
    }

    pub fn family(&self) -> NoiseFamily {
        self.family
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// `P(eps <= x) < 1` for every real `x`.
    pub fn is_unbounded_above(&self) -> bool {
        matches!(self.family, NoiseFamily::Gaussian | NoiseFamily::Laplace)
    }

    pub fn draw(&self, stream: &mut RngStream) -> f64 {
        match self.family {
            NoiseFamily::Gaussian => self.sigma * stream.standard_normal(),
            NoiseFamily::Laplace => {
                // scale b with 2b^2 = sigma^2
                let b = self.sigma * std::f64::consts::FRAC_1_SQRT_2;
                let u: f64 = stream.open01();
                if u < 0.5 {
                    b * (2.0 * u).ln()
                } else {
                    -b * (2.0 * (1.0 - u)).ln()
                }
            }
            NoiseFamily::UniformCentered => {
                let half_width = self.sigma * 3f64.sqrt();
                half_width * (2.0 * stream.open01() - 1.0)
            }
            NoiseFamily::DegenerateZero => 0.0,
        }
    }
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self {
            family: NoiseFamily::Gaussian,
            sigma: 1.0,
        }
    }
}

/// A deterministic random stream identified by `(master_seed, stream_id)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    master_seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(stream_id);
        Self {
            master_seed,
            stream_id,
            rng,
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn standard_normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// Uniform on the open interval (0, 1).
    pub fn open01(&mut self) -> f64 {
        self.rng.sample(Open01)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn moments(spec: NoiseSpec, seed: u64, n: usize) -> (f64, f64) {
        let mut s = RngStream::new(seed, 0);
        let xs: Vec<f64> = (0..n).map(|_| spec.draw(&mut s)).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (mean, var)
    }

    #[test]
    fn degenerate_is_zero() {
        let mut s = RngStream::new(1, 2);
        let z = NoiseSpec::zero();
        assert!((0..100).all(|_| z.draw(&mut s) == 0.0));
    }

    #[test]
    fn same_seed_and_stream_repeat() {
        let g = NoiseSpec::default();
        let mut a = RngStream::new(7, 3);
        let mut b = RngStream::new(7, 3);
        for _ in 0..1000 {
            assert_eq!(g.draw(&mut a).to_bits(), g.draw(&mut b).to_bits());
        }
    }

    #[test]
    fn gaussian_mean_within_clt_bound() {
        let (mean, _) = moments(NoiseSpec::default(), 11, 1_000_000);
        assert!(mean.abs() < 0.005, "mean {mean}");
    }

    #[test]
    fn variance_within_two_percent_for_every_family() {
        for family in [
            NoiseFamily::Gaussian,
            NoiseFamily::Laplace,
            NoiseFamily::UniformCentered,
        ] {
            let spec = NoiseSpec::new(family, 1.7).unwrap();
            let (mean, var) = moments(spec, 5, 1_000_000);
            assert!(mean.abs() < 0.02, "{family:?} mean {mean}");
            let rel = (var / spec.variance() - 1.0).abs();
            assert!(rel < 0.02, "{family:?} variance off by {rel}");
        }
    }

    #[test]
    fn neighbouring_streams_uncorrelated() {
        let g = NoiseSpec::default();
        let mut a = RngStream::new(42, 0);
        let mut b = RngStream::new(42, 1);
        let n = 100_000;
        let pairs: Vec<(f64, f64)> = (0..n).map(|_| (g.draw(&mut a), g.draw(&mut b))).collect();
        let (ma, mb) = pairs
            .iter()
            .fold((0.0, 0.0), |(x, y), (a, b)| (x + a, y + b));
        let (ma, mb) = (ma / n as f64, mb / n as f64);
        let mut sab = 0.0;
        let mut saa = 0.0;
        let mut sbb = 0.0;
        for (a, b) in &pairs {
            sab += (a - ma) * (b - mb);
            saa += (a - ma).powi(2);
            sbb += (b - mb).powi(2);
        }
        let corr = sab / (saa * sbb).sqrt();
        assert!(corr.abs() < 0.01, "corr {corr}");
    }

    #[test]
    fn sigma_validation() {
        assert!(NoiseSpec::gaussian(0.0).is_err());
        assert!(NoiseSpec::gaussian(-1.0).is_err());
        assert!(NoiseSpec::new(NoiseFamily::DegenerateZero, 1.0).is_err());
        assert!(NoiseSpec::gaussian(f64::NAN).is_err());
    }

    #[test]
    fn boundedness() {
        assert!(NoiseSpec::default().is_unbounded_above());
        assert!(!NoiseSpec::new(NoiseFamily::UniformCentered, 1.0)
            .unwrap()
            .is_unbounded_above());
    }

    #[test]
    fn deserializes_from_config_shape() {
        let spec: NoiseSpec =
            serde_json::from_str(r#"{"family": "laplace", "sigma": 0.5}"#).unwrap();
        assert_eq!(spec.family(), NoiseFamily::Laplace);
        let bad = serde_json::from_str::<NoiseSpec>(r#"{"family": "gaussian", "sigma": -1}"#);
        assert!(bad.is_err());
    }
}
