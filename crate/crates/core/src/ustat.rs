//! The departure statistic: a U-statistic with kernel
//! `h(x_1..x_m) = (max/θ − θ/min) / m`, `m = β + 1`.
//!
//! `ustat_naive` enumerates every `m`-subset and is the reference for small
//! samples. `ustat_fast` uses the order-statistic form, in which the rank-`i`
//! observation carries weight `C(i−1, β) / (m·C(n, m))` in the max term and
//! `C(n−i, β) / (m·C(n, m))` in the reciprocal-min term.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sample::{KernelConfig, Sample};

/// Value of the statistic for one sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UStatResult {
    pub delta_hat: f64,
    pub n: usize,
    pub config: KernelConfig,
}

/// Kernel `(max(points)/θ − θ/min(points)) / (β+1)`.
pub fn kernel_h(points: &[f64], config: &KernelConfig) -> Result<f64> {
    if points.len() != config.degree() {
        return Err(Error::WrongArity { expected: config.degree(), got: points.len() });
    }
    if let Some(index) = points.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFiniteValue { index });
    }
    if let Some((index, &value)) = points.iter().find_position(|&&x| x <= 0.0) {
        return Err(Error::NonPositiveValue { index, value });
    }
    let max = points.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = points.iter().copied().fold(f64::INFINITY, f64::min);
    let theta = config.theta();
    Ok((max / theta - theta / min) / config.degree() as f64)
}

/// Exact enumeration over all `C(n, β+1)` subsets. Cost grows combinatorially.
pub fn ustat_naive(sample: &Sample, config: &KernelConfig) -> Result<UStatResult> {
    let n = sample.len();
    config.require_degree(n)?;
    let mut total = 0.0;
    let mut count = 0u64;
    let mut points = Vec::with_capacity(config.degree());
    for subset in (0..n).combinations(config.degree()) {
        points.clear();
        points.extend(subset.iter().map(|&i| sample.values()[i]));
        total += kernel_h(&points, config)?;
        count += 1;
    }
    Ok(UStatResult { delta_hat: total / count as f64, n, config: *config })
}

/// Order-statistic form, O(n·β).
pub fn ustat_fast(sample: &Sample, config: &KernelConfig) -> Result<UStatResult> {
    let n = sample.len();
    config.require_degree(n)?;
    let weights = rank_weights(n, config.beta());
    let theta = config.theta();
    let x = sample.values();
    let delta_hat = (0..n)
        .map(|i| weights[i] * (x[i] / theta) - weights[n - 1 - i] * (theta / x[i]))
        .sum();
    Ok(UStatResult { delta_hat, n, config: *config })
}

/// Statistic recomputed with each order statistic deleted in turn.
///
/// Entry `k` corresponds to `sample.values()[k]`. Deleting rank `k` keeps the
/// weights of lower ranks and shifts higher ranks down by one, so every entry
/// is a prefix sum plus a suffix sum and the whole vector costs O(n·β).
pub fn leave_one_out(sample: &Sample, config: &KernelConfig) -> Result<Vec<f64>> {
    let n = sample.len();
    config.require_jackknife(n)?;
    let m = n - 1;
    let w = rank_weights(m, config.beta());
    let theta = config.theta();
    let x = sample.values();

    // Contribution of x[i] when it sits at reduced rank r (0-based).
    let term = |i: usize, r: usize| w[r] * (x[i] / theta) - w[m - 1 - r] * (theta / x[i]);

    let mut prefix = vec![0.0; n + 1];
    for i in 0..m {
        prefix[i + 1] = prefix[i] + term(i, i);
    }
    let mut suffix = vec![0.0; n + 1];
    for i in (1..n).rev() {
        suffix[i] = suffix[i + 1] + term(i, i - 1);
    }
    Ok((0..n).map(|k| prefix[k] + suffix[k + 1]).collect())
}

/// Symmetry point `exp(μ)` of a log-normal(μ, σ).
pub fn theta_for_lognormal(mu: f64) -> f64 {
    mu.exp()
}

/// `C(i, β) / (n·C(n−1, β))` for `i = 0..n`, i.e. the max-term weight of the
/// order statistic with 1-based rank `i + 1`. The reciprocal-min weight of
/// rank `i + 1` is entry `n − 1 − i`.
///
/// Each factor of the product is at most one, so no intermediate overflows.
pub(crate) fn rank_weights(n: usize, beta: u32) -> Vec<f64> {
    let beta = beta as usize;
    debug_assert!(n > beta);
    let scale = 1.0 / n as f64;
    (0..n)
        .map(|i| {
            if i < beta {
                return 0.0;
            }
            (0..beta).fold(scale, |acc, j| acc * (i - j) as f64 / (n - 1 - j) as f64)
        })
        .collect()
}
