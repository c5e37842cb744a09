//! Jackknife empirical likelihood for the departure statistic.
//!
//! The jackknife pseudo-values `V_k = nΔ̂ − (n−1)Δ̂_k` serve as the constraint
//! values `ν_k` of a one-constraint empirical likelihood problem. The
//! multiplier `λ` solves `(1/n) Σ ν_i / (1 + λν_i) = 0`, the weights are
//! `p_i = 1 / (n(1 + λν_i))` and `−2 log R = 2 Σ log(1 + λν_i)` is compared to
//! a χ²₁ quantile.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{KernelConfig, Sample};
use crate::special::inverse_normal_cdf;
use crate::ustat::{leave_one_out, ustat_fast};

pub use crate::special::chi2_quantile;

/// Jackknife pseudo-values of the statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoValues {
    values: Vec<f64>,
}

impl PseudoValues {
    pub fn new(values: Vec<f64>) -> Self {
        PseudoValues { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Full-sample statistic together with its pseudo-values.
#[derive(Debug, Clone, PartialEq)]
pub struct Jackknife {
    pub delta_hat: f64,
    pub leave_one_out: Vec<f64>,
    pub pseudo: PseudoValues,
}

pub fn jackknife(sample: &Sample, config: &KernelConfig) -> Result<Jackknife> {
    let n = sample.len();
    config.require_jackknife(n)?;
    let delta_hat = ustat_fast(sample, config)?.delta_hat;
    let loo = leave_one_out(sample, config)?;
    let nf = n as f64;
    let values = loo.iter().map(|d| nf * delta_hat - (nf - 1.0) * d).collect();
    Ok(Jackknife { delta_hat, leave_one_out: loo, pseudo: PseudoValues::new(values) })
}

pub fn pseudo_values(sample: &Sample, config: &KernelConfig) -> Result<PseudoValues> {
    jackknife(sample, config).map(|j| j.pseudo)
}

/// Solution of the empirical likelihood problem.
///
/// When infeasible, `lambda` is NaN, `log_ratio` is −∞, `stat` is +∞ and
/// `weights` is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ElSolution {
    pub lambda: f64,
    pub log_ratio: f64,
    pub stat: f64,
    pub feasible: bool,
    pub weights: Vec<f64>,
}

/// Mean of `ν_i / (1 + λν_i)`; strictly decreasing in `λ` between the poles.
pub fn el_residual(nu: &[f64], lambda: f64) -> f64 {
    nu.iter().map(|v| v / (1.0 + lambda * v)).sum::<f64>() / nu.len() as f64
}

fn check_constraints(nu: &[f64]) -> Result<()> {
    if nu.is_empty() {
        return Err(Error::DomainError("constraint vector is empty".into()));
    }
    if let Some(index) = nu.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteValue { index });
    }
    Ok(())
}

/// Lagrange multiplier of the one-constraint empirical likelihood problem.
///
/// Returns `Error::Infeasible` when every `ν_i` has the same sign (and at least
/// one is nonzero). Otherwise the root is unique inside
/// `(−1/max ν, −1/min ν)` and is found by Newton steps, falling back to
/// bisection whenever a step leaves the current bracket.
pub fn el_lambda(nu: &[f64]) -> Result<f64> {
    check_constraints(nu)?;
    let scale = nu.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0.0);
    }
    // Work with ν / max|ν| so that squares cannot overflow; λ scales inversely.
    let z: Vec<f64> = nu.iter().map(|v| v / scale).collect();
    let min = z.iter().copied().fold(f64::INFINITY, f64::min);
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min >= 0.0 || max <= 0.0 {
        return Err(Error::Infeasible);
    }

    const MARGIN: f64 = 1e-12;
    let pole_lo = -1.0 / max;
    let pole_hi = -1.0 / min;
    let mut lo = pole_lo + MARGIN * pole_lo.abs();
    let mut hi = pole_hi - MARGIN * pole_hi.abs();
    let n = z.len() as f64;
    let tol = 1e-10 * (1.0 + scale) / scale;

    let mut lambda = 0.0;
    for _ in 0..200 {
        let (mut f, mut df) = (0.0, 0.0);
        for v in &z {
            let r = v / (1.0 + lambda * v);
            f += r;
            df -= r * r;
        }
        f /= n;
        df /= n;
        // Σp_i − 1 = −λ·f, so demand both a small residual and a small mass defect.
        if f.abs() <= tol && (lambda * f).abs() <= 1e-13 {
            break;
        }
        if f > 0.0 {
            lo = lambda;
        } else {
            hi = lambda;
        }
        let newton = lambda - f / df;
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if next == lambda || hi - lo <= 1e-15 * lambda.abs().max(1e-300) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    Ok(lambda / scale)
}

/// Empirical log-likelihood ratio at the constraint `Σ p_i ν_i = 0`.
pub fn jel_log_ratio(nu: &[f64]) -> Result<ElSolution> {
    match el_lambda(nu) {
        Ok(lambda) => {
            let n = nu.len() as f64;
            let log_ratio = -nu.iter().map(|v| (lambda * v).ln_1p()).sum::<f64>();
            let weights = nu.iter().map(|v| 1.0 / (n * (1.0 + lambda * v))).collect();
            Ok(ElSolution {
                lambda,
                log_ratio: log_ratio.min(0.0),
                stat: (-2.0 * log_ratio).max(0.0),
                feasible: true,
                weights,
            })
        }
        Err(Error::Infeasible) => Ok(ElSolution {
            lambda: f64::NAN,
            log_ratio: f64::NEG_INFINITY,
            stat: f64::INFINITY,
            feasible: false,
            weights: Vec::new(),
        }),
        Err(err) => Err(err),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Jel,
    Normal,
}

/// Outcome of a test. `reject` is `statistic > threshold`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    #[serde(with = "extended_real")]
    pub statistic: f64,
    pub threshold: f64,
    pub alpha: f64,
    pub reject: bool,
    pub method: Method,
}

impl TestResult {
    pub fn decision(&self) -> &'static str {
        if self.reject {
            "reject"
        } else {
            "fail to reject"
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::DomainError(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// Every intermediate of a JEL test, for reporting.
#[derive(Debug, Clone, PartialEq)]
pub struct JelReport {
    pub jackknife: Jackknife,
    pub solution: ElSolution,
    pub result: TestResult,
}

pub fn jel_test_detailed(sample: &Sample, config: &KernelConfig, alpha: f64) -> Result<JelReport> {
    check_alpha(alpha)?;
    let jackknife = jackknife(sample, config)?;
    let solution = jel_log_ratio(jackknife.pseudo.values())?;
    let threshold = chi2_quantile(1.0 - alpha, 1)?;
    let result = TestResult {
        statistic: solution.stat,
        threshold,
        alpha,
        reject: solution.stat > threshold,
        method: Method::Jel,
    };
    Ok(JelReport { jackknife, solution, result })
}

/// JEL ratio test: reject when `−2 log R > χ²₁(1 − α)`. An infeasible
/// problem gives `+∞` and rejects.
pub fn jel_test(sample: &Sample, config: &KernelConfig, alpha: f64) -> Result<TestResult> {
    jel_test_detailed(sample, config, alpha).map(|r| r.result)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaEstimate {
    pub sigma2_hat: f64,
}

/// Sample variance of the pseudo-values (divisor `n − 1`).
pub fn jackknife_variance(pv: &PseudoValues) -> SigmaEstimate {
    let n = pv.len();
    if n < 2 {
        return SigmaEstimate { sigma2_hat: 0.0 };
    }
    let scale = pv.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return SigmaEstimate { sigma2_hat: 0.0 };
    }
    let mean = pv.mean() / scale;
    let ss: f64 = pv.values().iter().map(|v| (v / scale - mean).powi(2)).sum();
    SigmaEstimate { sigma2_hat: ss / (n - 1) as f64 * scale * scale }
}

/// Normal-approximation test `√n |Δ̂| / σ̂ > z_{α/2}` using the jackknife
/// variance as σ̂². Usually over-sized in small samples; JEL is preferred.
pub fn normal_test(sample: &Sample, config: &KernelConfig, alpha: f64) -> Result<TestResult> {
    check_alpha(alpha)?;
    let jk = jackknife(sample, config)?;
    let sigma2 = jackknife_variance(&jk.pseudo).sigma2_hat;
    let spread = jk.pseudo.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if sigma2.sqrt() <= 1e-12 * spread || sigma2 == 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let statistic = (sample.len() as f64).sqrt() * jk.delta_hat.abs() / sigma2.sqrt();
    let threshold = inverse_normal_cdf(1.0 - alpha / 2.0)?;
    Ok(TestResult {
        statistic,
        threshold,
        alpha,
        reject: statistic > threshold,
        method: Method::Normal,
    })
}

/// Serde adapter writing `+∞` as the string `"inf"`, since JSON has no infinity.
pub mod extended_real {
    use serde::de::{self, Deserializer, Visitor};
    use serde::Serializer;
    use std::fmt;

    pub fn serialize<S: Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *value == f64::INFINITY {
            s.serialize_str("inf")
        } else if *value == f64::NEG_INFINITY {
            s.serialize_str("-inf")
        } else {
            s.serialize_f64(*value)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct ExtendedReal;

        impl Visitor<'_> for ExtendedReal {
            type Value = f64;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    "-inf" => Ok(f64::NEG_INFINITY),
                    other => Err(E::invalid_value(de::Unexpected::Str(other), &self)),
                }
            }
        }

        d.deserialize_any(ExtendedReal)
    }
}
