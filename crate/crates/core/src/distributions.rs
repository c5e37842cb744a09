//! Random variates for the null (log-symmetric) and alternative families,
//! plus log-normal fitting and the unit-symmetry transform.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::Sample;
use crate::special::{erf, inverse_normal_cdf};

/// One of the simulation families with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum DistributionSpec {
    /// `exp(μ + σZ)`.
    LogNormal { mu: f64, sigma: f64 },
    /// `scale · exp(L / shape)`, `L` standard logistic.
    LogLogistic { scale: f64, shape: f64 },
    /// `exp(μ + bL)`, `L` standard Laplace.
    LogLaplace { mu: f64, b: f64 },
    /// `exp(μ + γC)`, `C` standard Cauchy.
    LogCauchy { mu: f64, gamma: f64 },
    /// Birnbaum–Saunders with shape `alpha` and median `scale`.
    #[serde(rename = "birnbaum-saunders")]
    BirnbaumSaunders { alpha: f64, scale: f64 },
    /// CDF `1 − exp(−(x/scale)^shape)`.
    Weibull { shape: f64, scale: f64 },
    Gamma { shape: f64, scale: f64 },
    /// CDF `1 − (scale/x)^shape` for `x ≥ scale`.
    Pareto { shape: f64, scale: f64 },
    /// `|σZ|`.
    HalfNormal { sigma: f64 },
}

use DistributionSpec::*;

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, must_be_positive: bool| -> Result<()> {
            if !v.is_finite() || (must_be_positive && v <= 0.0) {
                let req = if must_be_positive { "finite and > 0" } else { "finite" };
                return Err(Error::InvalidParameter(format!(
                    "{} parameter {name} = {v} must be {req}",
                    self.name()
                )));
            }
            Ok(())
        };
        match *self {
            LogNormal { mu, sigma } => check("mu", mu, false).and(check("sigma", sigma, true)),
            LogLogistic { scale, shape } => check("scale", scale, true).and(check("shape", shape, true)),
            LogLaplace { mu, b } => check("mu", mu, false).and(check("b", b, true)),
            LogCauchy { mu, gamma } => {
                check("mu", mu, false)?;
                check("gamma", gamma, true)?;
                if mu.abs() >= LOG_RANGE {
                    return Err(Error::InvalidParameter(format!(
                        "log-cauchy mu = {mu} is outside the representable range"
                    )));
                }
                Ok(())
            }
            BirnbaumSaunders { alpha, scale } => check("alpha", alpha, true).and(check("scale", scale, true)),
            Weibull { shape, scale } | Gamma { shape, scale } | Pareto { shape, scale } => {
                check("shape", shape, true).and(check("scale", scale, true))
            }
            HalfNormal { sigma } => check("sigma", sigma, true),
        }
    }

    /// Short lowercase family name used in CSV output and on the command line.
    pub fn name(&self) -> &'static str {
        match self {
            LogNormal { .. } => "lognormal",
            LogLogistic { .. } => "loglogistic",
            LogLaplace { .. } => "loglaplace",
            LogCauchy { .. } => "logcauchy",
            BirnbaumSaunders { .. } => "birnbaum-saunders",
            Weibull { .. } => "weibull",
            Gamma { .. } => "gamma",
            Pareto { .. } => "pareto",
            HalfNormal { .. } => "halfnormal",
        }
    }

    /// Position in the canonical family order, used for sorting result rows.
    pub fn family_index(&self) -> usize {
        match self {
            LogNormal { .. } => 0,
            LogLogistic { .. } => 1,
            LogLaplace { .. } => 2,
            LogCauchy { .. } => 3,
            BirnbaumSaunders { .. } => 4,
            Weibull { .. } => 5,
            Gamma { .. } => 6,
            Pareto { .. } => 7,
            HalfNormal { .. } => 8,
        }
    }

    /// `name=value` pairs joined by `;`.
    pub fn params_label(&self) -> String {
        let pairs: Vec<(&str, f64)> = match *self {
            LogNormal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            LogLogistic { scale, shape } => vec![("scale", scale), ("shape", shape)],
            LogLaplace { mu, b } => vec![("mu", mu), ("b", b)],
            LogCauchy { mu, gamma } => vec![("mu", mu), ("gamma", gamma)],
            BirnbaumSaunders { alpha, scale } => vec![("alpha", alpha), ("scale", scale)],
            Weibull { shape, scale } | Gamma { shape, scale } | Pareto { shape, scale } => {
                vec![("shape", shape), ("scale", scale)]
            }
            HalfNormal { sigma } => vec![("sigma", sigma)],
        };
        pairs.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(";")
    }

    /// True for the null families.
    pub fn is_log_symmetric(&self) -> bool {
        matches!(
            self,
            LogNormal { .. } | LogLogistic { .. } | LogLaplace { .. } | LogCauchy { .. } | BirnbaumSaunders { .. }
        )
    }

    /// The point θ about which a null family is log-symmetric.
    pub fn symmetry_point(&self) -> Option<f64> {
        match *self {
            LogNormal { mu, .. } | LogLaplace { mu, .. } | LogCauchy { mu, .. } => Some(mu.exp()),
            LogLogistic { scale, .. } | BirnbaumSaunders { scale, .. } => Some(scale),
            _ => None,
        }
    }

    /// CDF, available for the inverse-CDF families (Weibull, Pareto, half-normal).
    pub fn cdf(&self, x: f64) -> Option<f64> {
        match *self {
            Weibull { shape, scale } => Some(if x <= 0.0 { 0.0 } else { -(-(x / scale).powf(shape)).exp_m1() }),
            Pareto { shape, scale } => Some(if x <= scale { 0.0 } else { 1.0 - (scale / x).powf(shape) }),
            HalfNormal { sigma } => Some(if x <= 0.0 { 0.0 } else { erf(x / (sigma * SQRT_2)) }),
            _ => None,
        }
    }

    /// Quantile function for the inverse-CDF families, `u ∈ (0, 1)`.
    pub fn quantile(&self, u: f64) -> Option<f64> {
        if !(u > 0.0 && u < 1.0) {
            return None;
        }
        match *self {
            Weibull { shape, scale } => Some(scale * (-(-u).ln_1p()).powf(1.0 / shape)),
            Pareto { shape, scale } => Some(scale * (-(-u).ln_1p() / shape).exp()),
            HalfNormal { sigma } => inverse_normal_cdf(0.5 + 0.5 * u).ok().map(|z| sigma * z),
            _ => None,
        }
    }

    /// `n` independent draws.
    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::Config("sample size must be >= 1".into()));
        }
        let mut out = Vec::with_capacity(n);
        match *self {
            LogNormal { mu, sigma } => {
                for _ in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    out.push((mu + sigma * z).exp());
                }
            }
            LogLogistic { scale, shape } => {
                for _ in 0..n {
                    let u: f64 = rng.sample(Open01);
                    out.push(scale * ((u / (1.0 - u)).ln() / shape).exp());
                }
            }
            LogLaplace { mu, b } => {
                for _ in 0..n {
                    let u: f64 = rng.sample(Open01);
                    let l = if u < 0.5 { (2.0 * u).ln() } else { -(2.0 * (1.0 - u)).ln() };
                    out.push((mu + b * l).exp());
                }
            }
            LogCauchy { mu, gamma } => {
                // Symmetric truncation of the log-scale draw keeps log-symmetry
                // while keeping exp() finite and nonzero.
                let limit = LOG_RANGE - mu.abs();
                while out.len() < n {
                    let u: f64 = rng.sample(Open01);
                    let c = gamma * (PI * (u - 0.5)).tan();
                    if c.abs() < limit {
                        out.push((mu + c).exp());
                    }
                }
            }
            BirnbaumSaunders { alpha, scale } => {
                for _ in 0..n {
                    let z: f64 = rng.sample(StandardNormal);
                    let w = 0.5 * alpha * z;
                    let root = w + (w * w + 1.0).sqrt();
                    out.push(scale * root * root);
                }
            }
            Gamma { shape, scale } => {
                let dist = rand_distr::Gamma::new(shape, scale).map_err(|e| Error::InvalidParameter(e.to_string()))?;
                out.extend((0..n).map(|_| dist.sample(rng)));
            }
            Weibull { .. } | Pareto { .. } | HalfNormal { .. } => {
                for _ in 0..n {
                    let u: f64 = rng.sample(Open01);
                    out.push(self.quantile(u).expect("inverse-CDF family"));
                }
            }
        }
        Ok(out)
    }
}

/// Largest |log x| kept by the log-Cauchy sampler; `exp(±700)` is finite and normal.
const LOG_RANGE: f64 = 700.0;

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.name(), self.params_label().replace(';', ", "))
    }
}

/// Deterministic generator addressed by `(seed, stream)`.
///
/// ChaCha8 with a 64-bit stream id: identical `(seed, stream)` pairs produce
/// identical sequences on every platform, and distinct streams are independent.
#[derive(Debug, Clone)]
pub struct RngState {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngState {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RngState { seed, stream, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

pub fn sample(spec: &DistributionSpec, n: usize, rng: &mut RngState) -> Result<Vec<f64>> {
    spec.sample_with(n, rng.rng())
}

/// Log-scale maximum likelihood fit of a log-normal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogNormalFit {
    pub mu_hat: f64,
    pub sigma_hat: f64,
}

/// `μ̂ = mean(log x)`, `σ̂² = mean((log x − μ̂)²)` (divisor n).
pub fn fit_lognormal(sample: &Sample) -> Result<LogNormalFit> {
    let x = sample.values();
    if x.first() == x.last() {
        return Err(Error::DegenerateSample);
    }
    let n = x.len() as f64;
    let mu_hat = x.iter().map(|v| v.ln()).sum::<f64>() / n;
    let var = x.iter().map(|v| (v.ln() - mu_hat).powi(2)).sum::<f64>() / n;
    Ok(LogNormalFit { mu_hat, sigma_hat: var.sqrt() })
}

/// `y = exp((log x − μ̂) / σ̂)`, which is log-symmetric about 1 under a log-normal model.
pub fn transform_unit_symmetry(sample: &Sample, fit: &LogNormalFit) -> Result<Sample> {
    if !(fit.sigma_hat > 0.0 && fit.sigma_hat.is_finite()) || !fit.mu_hat.is_finite() {
        return Err(Error::DomainError(format!(
            "transform needs finite mu and positive sigma, got mu={} sigma={}",
            fit.mu_hat, fit.sigma_hat
        )));
    }
    sample.map(|x| ((x.ln() - fit.mu_hat) / fit.sigma_hat).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NULLS: [DistributionSpec; 5] = [
        LogNormal { mu: 0.0, sigma: 1.0 },
        LogLogistic { scale: 1.0, shape: 1.0 },
        LogLaplace { mu: 0.0, b: 1.0 },
        LogCauchy { mu: 0.0, gamma: 1.0 },
        BirnbaumSaunders { alpha: 1.0, scale: 1.0 },
    ];

    const ALTERNATIVES: [DistributionSpec; 4] = [
        Weibull { shape: 0.5, scale: 1.0 },
        Gamma { shape: 2.0, scale: 1.0 },
        Pareto { shape: 2.0, scale: 1.0 },
        HalfNormal { sigma: 1.0 },
    ];

    fn draws(spec: DistributionSpec, n: usize, seed: u64) -> Vec<f64> {
        sample(&spec, n, &mut RngState::new(seed, 0)).unwrap()
    }

    fn skewness(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let m = v.iter().sum::<f64>() / n;
        let m2 = v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n;
        let m3 = v.iter().map(|x| (x - m).powi(3)).sum::<f64>() / n;
        m3 / m2.powf(1.5)
    }

    fn two_sample_ks(a: &[f64], b: &[f64]) -> f64 {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        let (mut i, mut j, mut d) = (0, 0, 0.0_f64);
        while i < a.len() && j < b.len() {
            let x = a[i].min(b[j]);
            while i < a.len() && a[i] <= x {
                i += 1;
            }
            while j < b.len() && b[j] <= x {
                j += 1;
            }
            d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
        }
        d
    }

    #[test]
    fn determinism_and_stream_independence() {
        for spec in NULLS.iter().chain(&ALTERNATIVES) {
            assert_eq!(draws(*spec, 100, 9), draws(*spec, 100, 9));
            let a = sample(spec, 50, &mut RngState::new(9, 0)).unwrap();
            let b = sample(spec, 50, &mut RngState::new(9, 1)).unwrap();
            assert_ne!(a, b);
        }
    }

    #[test]
    fn support_is_positive() {
        for spec in NULLS.iter().chain(&ALTERNATIVES) {
            assert!(draws(*spec, 20_000, 1).iter().all(|x| x.is_finite() && *x > 0.0), "{spec}");
        }
        let p = draws(Pareto { shape: 2.0, scale: 3.0 }, 20_000, 2);
        assert!(p.iter().all(|&x| x >= 3.0));
    }

    #[test]
    fn lognormal_median_near_one() {
        let mut v = draws(LogNormal { mu: 0.0, sigma: 1.0 }, 100_001, 3);
        v.sort_by(f64::total_cmp);
        assert!((v[50_000] - 1.0).abs() < 0.02);
    }

    #[test]
    fn null_families_have_symmetric_logs() {
        for spec in NULLS.iter().filter(|s| !matches!(s, LogCauchy { .. })) {
            let logs: Vec<f64> = draws(*spec, 100_000, 4).iter().map(|x| x.ln()).collect();
            assert!(skewness(&logs).abs() < 0.1, "{spec}: {}", skewness(&logs));
        }
    }

    #[test]
    fn log_cauchy_reciprocal_symmetry() {
        let spec = LogCauchy { mu: 0.0, gamma: 1.0 };
        let x = draws(spec, 5000, 5);
        let recip: Vec<f64> = draws(spec, 5000, 6).iter().map(|v| 1.0 / v).collect();
        assert!(two_sample_ks(&x, &recip) < 0.05);
    }

    #[test]
    fn pareto_mean() {
        let v = draws(Pareto { shape: 2.0, scale: 1.0 }, 100_000, 7);
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        assert!((mean - 2.0).abs() < 0.1, "mean {mean}");
    }

    #[test]
    fn gamma_moments_small_and_large_shape() {
        for shape in [0.5, 2.0] {
            let v = draws(Gamma { shape, scale: 2.0 }, 100_000, 8);
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            assert!((mean / (2.0 * shape) - 1.0).abs() < 0.03, "shape {shape}: mean {mean}");
        }
    }

    #[test]
    fn inverse_cdf_round_trip() {
        let specs = [
            Weibull { shape: 0.5, scale: 1.0 },
            Weibull { shape: 2.0, scale: 3.0 },
            Pareto { shape: 1.0, scale: 0.5 },
            HalfNormal { sigma: 2.0 },
        ];
        for spec in specs {
            for i in 1..1000 {
                let u = i as f64 / 1000.0;
                let x = spec.quantile(u).unwrap();
                assert!((spec.cdf(x).unwrap() - u).abs() < 1e-10, "{spec} u={u}");
            }
        }
        assert!(LogNormal { mu: 0.0, sigma: 1.0 }.quantile(0.5).is_none());
    }

    #[test]
    fn invalid_parameters() {
        assert!(LogNormal { mu: 0.0, sigma: 0.0 }.validate().is_err());
        assert!(Weibull { shape: -1.0, scale: 1.0 }.validate().is_err());
        assert!(HalfNormal { sigma: f64::NAN }.validate().is_err());
        assert!(LogNormal { mu: -3.0, sigma: 1.0 }.validate().is_ok());
        let mut rng = RngState::new(0, 0);
        assert!(matches!(
            sample(&Gamma { shape: 0.0, scale: 1.0 }, 5, &mut rng),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn family_partition() {
        assert!(NULLS.iter().all(|s| s.is_log_symmetric() && s.symmetry_point() == Some(1.0)));
        assert!(ALTERNATIVES.iter().all(|s| !s.is_log_symmetric() && s.symmetry_point().is_none()));
    }

    #[test]
    fn spec_serde_shape() {
        let spec: DistributionSpec = serde_json::from_str(r#"{"family":"weibull","shape":0.5,"scale":1.0}"#).unwrap();
        assert_eq!(spec, Weibull { shape: 0.5, scale: 1.0 });
        assert_eq!(spec.params_label(), "shape=0.5;scale=1");
    }

    #[test]
    fn fit_examples() {
        let s = Sample::new(vec![(-1f64).exp(), 1f64.exp()]).unwrap();
        let fit = fit_lognormal(&s).unwrap();
        assert!(fit.mu_hat.abs() < 1e-15);
        assert!((fit.sigma_hat - 1.0).abs() < 1e-15);
        assert!(matches!(fit_lognormal(&Sample::new(vec![2.0; 5]).unwrap()), Err(Error::DegenerateSample)));
    }

    #[test]
    fn fit_is_consistent() {
        let s = Sample::new(draws(LogNormal { mu: 2.0, sigma: 1.0 }, 10_000, 11)).unwrap();
        let fit = fit_lognormal(&s).unwrap();
        assert!((fit.mu_hat - 2.0).abs() < 0.05);
    }

    #[test]
    fn transform_standardises() {
        let s = Sample::new(draws(LogNormal { mu: 1.3, sigma: 0.7 }, 200, 12)).unwrap();
        let fit = fit_lognormal(&s).unwrap();
        let y = transform_unit_symmetry(&s, &fit).unwrap();
        let refit = fit_lognormal(&y).unwrap();
        assert!(refit.mu_hat.abs() < 1e-10);
        assert!((refit.sigma_hat - 1.0).abs() < 1e-10);

        let at_centre = Sample::new(vec![fit.mu_hat.exp(), 2.0]).unwrap();
        let t = transform_unit_symmetry(&at_centre, &fit).unwrap();
        assert!(t.values().iter().any(|v| (v - 1.0).abs() < 1e-12));
        assert!(transform_unit_symmetry(&s, &LogNormalFit { mu_hat: 0.0, sigma_hat: 0.0 }).is_err());
    }
}
