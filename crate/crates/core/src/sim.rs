//! Monte Carlo estimation of rejection rates (type-I error and power).
//!
//! Replication `r` of every cell draws from `RngState::new(seed, r)`, and
//! per-cell rejection counts are integer sums, so results do not depend on
//! the number of worker threads.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::{fit_lognormal, sample, transform_unit_symmetry, DistributionSpec, RngState};
use crate::error::{Error, Result};
use crate::jel::jel_test;
use crate::sample::{KernelConfig, Sample};
use crate::ustat::theta_for_lognormal;

/// How the symmetry point is chosen for each replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "policy", rename_all = "kebab-case")]
pub enum ThetaPolicy {
    Fixed { theta: f64 },
    /// θ = exp(μ) with μ known.
    LognormalKnownMu { mu: f64 },
    /// Fit a log-normal, transform to unit symmetry, then test with θ = 1.
    TransformEstimated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Type1,
    Power,
}

pub const DEFAULT_REPS: u64 = 10_000;
pub const DEFAULT_ALPHA: f64 = 0.05;

fn default_reps() -> u64 {
    DEFAULT_REPS
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

/// One simulation design: a family crossed with sample sizes and PWM orders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub spec: DistributionSpec,
    pub n_values: Vec<usize>,
    pub betas: Vec<u32>,
    #[serde(default = "default_reps")]
    pub reps: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub seed: u64,
    pub theta_policy: ThetaPolicy,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.spec.validate()?;
        if self.reps == 0 {
            return Err(Error::Config("reps must be >= 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Config(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.betas.is_empty() || self.n_values.is_empty() {
            return Err(Error::Config("at least one n and one beta are required".into()));
        }
        if self.betas.contains(&0) {
            return Err(Error::Config("beta must be >= 1".into()));
        }
        let max_beta = *self.betas.iter().max().expect("non-empty") as usize;
        if let Some(n) = self.n_values.iter().find(|&&n| n < max_beta + 2) {
            return Err(Error::Config(format!(
                "n = {n} is too small for beta = {max_beta}; need n >= {}",
                max_beta + 2
            )));
        }
        match self.theta_policy {
            ThetaPolicy::Fixed { theta } if !(theta.is_finite() && theta > 0.0) => {
                Err(Error::Config(format!("theta must be positive, got {theta}")))
            }
            ThetaPolicy::LognormalKnownMu { mu } if !mu.is_finite() => {
                Err(Error::Config(format!("mu must be finite, got {mu}")))
            }
            _ => Ok(()),
        }
    }
}

/// One cell of a results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub family: String,
    pub params: String,
    pub n: usize,
    pub beta: u32,
    pub reps: u64,
    pub alpha: f64,
    pub seed: u64,
    pub rejections: u64,
    pub rejection_rate: f64,
    #[serde(skip)]
    family_index: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SimResult {
    pub rows: Vec<SimRow>,
}

impl SimResult {
    pub fn extend(&mut self, other: SimResult) {
        self.rows.extend(other.rows);
    }

    /// Stable sort by (family, n, beta).
    pub fn sort(&mut self) {
        self.rows.sort_by_key(|r| (r.family_index, r.n, r.beta));
    }
}

/// Empirical type-I error; the family must be log-symmetric.
pub fn run_type1(config: &SimConfig) -> Result<SimResult> {
    if !config.spec.is_log_symmetric() {
        return Err(Error::Config(format!(
            "{} is not log-symmetric; use power mode",
            config.spec.name()
        )));
    }
    run_cells(config)
}

/// Empirical power; the family must be an alternative and θ fixed.
pub fn run_power(config: &SimConfig) -> Result<SimResult> {
    if config.spec.is_log_symmetric() {
        return Err(Error::Config(format!(
            "{} is log-symmetric; use type1 mode",
            config.spec.name()
        )));
    }
    if !matches!(config.theta_policy, ThetaPolicy::Fixed { .. }) {
        return Err(Error::Config("power runs use a fixed theta".into()));
    }
    run_cells(config)
}

pub fn run(mode: Mode, config: &SimConfig) -> Result<SimResult> {
    match mode {
        Mode::Type1 => run_type1(config),
        Mode::Power => run_power(config),
    }
}

/// Runs `f` on a dedicated pool with `threads` workers.
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(pool.install(f))
}

fn run_cells(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.n_values.len() * config.betas.len());
    for &n in &config.n_values {
        for &beta in &config.betas {
            let rejections = count_rejections(config, n, beta)?;
            rows.push(SimRow {
                family: config.spec.name().to_string(),
                params: config.spec.params_label(),
                n,
                beta,
                reps: config.reps,
                alpha: config.alpha,
                seed: config.seed,
                rejections,
                rejection_rate: rejections as f64 / config.reps as f64,
                family_index: config.spec.family_index(),
            });
        }
    }
    Ok(SimResult { rows })
}

fn count_rejections(config: &SimConfig, n: usize, beta: u32) -> Result<u64> {
    (0..config.reps)
        .into_par_iter()
        .map(|rep| replicate(config, n, beta, rep).map(u64::from))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

fn replicate(config: &SimConfig, n: usize, beta: u32, rep: u64) -> Result<bool> {
    let mut rng = RngState::new(config.seed, rep);
    let data = Sample::new(sample(&config.spec, n, &mut rng)?)?;
    let (data, theta) = match config.theta_policy {
        ThetaPolicy::Fixed { theta } => (data, theta),
        ThetaPolicy::LognormalKnownMu { mu } => (data, theta_for_lognormal(mu)),
        ThetaPolicy::TransformEstimated => {
            let fit = fit_lognormal(&data)?;
            (transform_unit_symmetry(&data, &fit)?, 1.0)
        }
    };
    let kernel = KernelConfig::new(beta, theta)?;
    Ok(jel_test(&data, &kernel, config.alpha)?.reject)
}

pub const CSV_HEADER: [&str; 8] = ["family", "params", "n", "beta", "reps", "alpha", "seed", "rejection_rate"];

/// Writes rows sorted by (family, n, beta) with shortest round-trip decimals.
pub fn write_csv<W: Write>(result: &SimResult, writer: W) -> Result<()> {
    let mut sorted = result.clone();
    sorted.sort();
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for r in &sorted.rows {
        w.write_record([
            r.family.clone(),
            r.params.clone(),
            r.n.to_string(),
            r.beta.to_string(),
            r.reps.to_string(),
            r.alpha.to_string(),
            r.seed.to_string(),
            r.rejection_rate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(result: &SimResult, path: &Path) -> Result<()> {
    write_csv(result, File::create(path)?)
}

/// A row whose rejection rate drops by more than `tolerance` as n grows.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub family: String,
    pub params: String,
    pub beta: u32,
    pub n_from: usize,
    pub n_to: usize,
    pub rate_from: f64,
    pub rate_to: f64,
}

/// Power should not decrease with n; flags drops larger than `tolerance`.
pub fn power_sanity(result: &SimResult, tolerance: f64) -> Vec<MonotonicityViolation> {
    let mut rows: Vec<&SimRow> = result.rows.iter().collect();
    rows.sort_by(|a, b| {
        (a.family_index, &a.params, a.beta, a.n).cmp(&(b.family_index, &b.params, b.beta, b.n))
    });
    rows.windows(2)
        .filter(|w| w[0].family == w[1].family && w[0].params == w[1].params && w[0].beta == w[1].beta)
        .filter(|w| w[1].rejection_rate < w[0].rejection_rate - tolerance)
        .map(|w| MonotonicityViolation {
            family: w[0].family.clone(),
            params: w[0].params.clone(),
            beta: w[0].beta,
            n_from: w[0].n,
            n_to: w[1].n,
            rate_from: w[0].rejection_rate,
            rate_to: w[1].rejection_rate,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lognormal_config(n_values: Vec<usize>, reps: u64) -> SimConfig {
        SimConfig {
            spec: DistributionSpec::LogNormal { mu: 0.0, sigma: 1.0 },
            n_values,
            betas: vec![1],
            reps,
            alpha: 0.05,
            seed: 42,
            theta_policy: ThetaPolicy::LognormalKnownMu { mu: 0.0 },
        }
    }

    #[test]
    fn single_replication_is_zero_or_one() {
        let r = run_type1(&lognormal_config(vec![25], 1)).unwrap();
        assert!(r.rows[0].rejection_rate == 0.0 || r.rows[0].rejection_rate == 1.0);
    }

    #[test]
    fn rate_is_count_over_reps() {
        let r = run_type1(&lognormal_config(vec![25, 30], 200)).unwrap();
        for row in &r.rows {
            assert_eq!(row.rejection_rate, row.rejections as f64 / 200.0);
        }
    }

    #[test]
    fn config_errors() {
        let mut c = lognormal_config(vec![25], 0);
        assert!(matches!(run_type1(&c), Err(Error::Config(_))));
        c.reps = 10;
        c.n_values = vec![3];
        c.betas = vec![2];
        assert!(matches!(run_type1(&c), Err(Error::Config(_))));
        let c = lognormal_config(vec![25], 10);
        assert!(matches!(run_power(&c), Err(Error::Config(_))));
        let mut p = c.clone();
        p.spec = DistributionSpec::Pareto { shape: 2.0, scale: 1.0 };
        assert!(matches!(run_type1(&p), Err(Error::Config(_))));
        assert!(matches!(run_power(&p), Err(Error::Config(_))));
        p.theta_policy = ThetaPolicy::Fixed { theta: 1.0 };
        assert!(run_power(&p).is_ok());
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let c = lognormal_config(vec![30, 60], 300);
        let one = with_threads(1, || run_type1(&c)).unwrap().unwrap();
        let many = with_threads(8, || run_type1(&c)).unwrap().unwrap();
        assert_eq!(one, many);
    }

    #[test]
    fn transform_policy_runs() {
        let mut c = lognormal_config(vec![40], 100);
        c.spec = DistributionSpec::LogNormal { mu: 2.0, sigma: 0.5 };
        c.theta_policy = ThetaPolicy::TransformEstimated;
        let r = run_type1(&c).unwrap();
        assert!(r.rows[0].rejection_rate < 0.3);
    }

    #[test]
    fn csv_header_only_when_empty() {
        let mut buf = Vec::new();
        write_csv(&SimResult::default(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "family,params,n,beta,reps,alpha,seed,rejection_rate\n");
    }

    #[test]
    fn csv_rows_sorted() {
        let mut a = run_type1(&lognormal_config(vec![30, 20], 5)).unwrap();
        let mut p = lognormal_config(vec![20], 5);
        p.spec = DistributionSpec::Pareto { shape: 2.0, scale: 1.0 };
        p.theta_policy = ThetaPolicy::Fixed { theta: 1.0 };
        let b = run_power(&p).unwrap();
        let mut combined = b;
        combined.extend(a.clone());
        let mut buf = Vec::new();
        write_csv(&combined, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("lognormal,mu=0;sigma=1,20,"));
        assert!(lines[2].starts_with("lognormal,mu=0;sigma=1,30,"));
        assert!(lines[3].starts_with("pareto,"));
        a.sort();
        assert_eq!(a.rows[0].n, 20);
    }

    #[test]
    fn sanity_flags_drops() {
        let mk = |n, rate| SimRow {
            family: "gamma".into(),
            params: "shape=2;scale=1".into(),
            n,
            beta: 1,
            reps: 100,
            alpha: 0.05,
            seed: 0,
            rejections: 0,
            rejection_rate: rate,
            family_index: 6,
        };
        let r = SimResult { rows: vec![mk(25, 0.5), mk(50, 0.49), mk(75, 0.4)] };
        let v = power_sanity(&r, 0.03);
        assert_eq!(v.len(), 1);
        assert_eq!((v[0].n_from, v[0].n_to), (50, 75));
    }

    #[test]
    fn config_from_toml() {
        let text = r#"
            n_values = [25, 50]
            betas = [1, 2]
            seed = 7
            [spec]
            family = "lognormal"
            mu = 0.0
            sigma = 1.0
            [theta_policy]
            policy = "lognormal-known-mu"
            mu = 0.0
        "#;
        let c: SimConfig = toml::from_str(text).unwrap();
        assert_eq!(c.reps, DEFAULT_REPS);
        assert_eq!(c.alpha, DEFAULT_ALPHA);
        assert_eq!(c.n_values, vec![25, 50]);
        assert_eq!(c.theta_policy, ThetaPolicy::LognormalKnownMu { mu: 0.0 });
    }
}
