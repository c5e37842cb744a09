//! Validated samples and kernel configuration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ascending-sorted, strictly positive, finite observations with `n >= 2`.
///
/// `values()[i]` is the order statistic of rank `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

/// Validates raw observations and returns them sorted.
pub fn validate_sample(raw: &[f64]) -> Result<Sample> {
    Sample::new(raw.to_vec())
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooFewObservations { n: 0 });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFiniteValue { index });
            }
            if value <= 0.0 {
                return Err(Error::NonPositiveValue { index, value });
            }
        }
        if values.len() < 2 {
            return Err(Error::TooFewObservations { n: values.len() });
        }
        values.sort_by(f64::total_cmp);
        Ok(Sample { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Applies `f` element-wise and re-validates the result.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Sample> {
        Sample::new(self.values.iter().map(|&x| f(x)).collect())
    }

    /// The sample `{1/x_i}`.
    pub fn reciprocal(&self) -> Sample {
        let values = self.values.iter().rev().map(|&x| 1.0 / x).collect();
        Sample { values }
    }

    /// The sample with the order statistic at 0-based position `k` removed.
    pub fn without(&self, k: usize) -> Result<Sample> {
        let mut values = self.values.clone();
        values.remove(k);
        Sample::new(values)
    }
}

/// PWM order `beta` and symmetry point `theta`.
///
/// The kernel has degree `beta + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    beta: u32,
    theta: f64,
}

impl KernelConfig {
    pub fn new(beta: u32, theta: f64) -> Result<Self> {
        if beta < 1 {
            return Err(Error::DomainError(format!("beta must be >= 1, got {beta}")));
        }
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::DomainError(format!(
                "theta must be a finite positive number, got {theta}"
            )));
        }
        Ok(KernelConfig { beta, theta })
    }

    /// Symmetry point 1.
    pub fn with_beta(beta: u32) -> Result<Self> {
        KernelConfig::new(beta, 1.0)
    }

    pub fn beta(&self) -> u32 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Number of kernel arguments, `beta + 1`.
    pub fn degree(&self) -> usize {
        self.beta as usize + 1
    }

    pub(crate) fn require_degree(&self, n: usize) -> Result<()> {
        if n < self.degree() {
            return Err(Error::SampleTooSmall { n, required: self.degree() });
        }
        Ok(())
    }

    pub(crate) fn require_jackknife(&self, n: usize) -> Result<()> {
        if n < self.degree() + 1 {
            return Err(Error::SampleTooSmall { n, required: self.degree() + 1 });
        }
        Ok(())
    }
}

impl Default for KernelConfig {
    fn default() -> Self {
        KernelConfig { beta: 1, theta: 1.0 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorts_input() {
        let s = validate_sample(&[2.0, 0.5, 1.0]).unwrap();
        assert_eq!(s.values(), &[0.5, 1.0, 2.0]);
    }

    #[test]
    fn rejects_non_positive() {
        assert!(matches!(
            validate_sample(&[1.0, -3.0]),
            Err(Error::NonPositiveValue { index: 1, .. })
        ));
        assert!(matches!(validate_sample(&[0.0, 1.0]), Err(Error::NonPositiveValue { .. })));
    }

    #[test]
    fn rejects_empty_and_singleton() {
        assert!(matches!(validate_sample(&[]), Err(Error::TooFewObservations { n: 0 })));
        assert!(matches!(validate_sample(&[1.0]), Err(Error::TooFewObservations { n: 1 })));
    }

    #[test]
    fn rejects_non_finite() {
        assert!(matches!(
            validate_sample(&[1.0, f64::NAN]),
            Err(Error::NonFiniteValue { index: 1 })
        ));
        assert!(matches!(
            validate_sample(&[f64::INFINITY, 1.0]),
            Err(Error::NonFiniteValue { index: 0 })
        ));
    }

    #[test]
    fn reciprocal_stays_sorted() {
        let s = validate_sample(&[0.5, 1.0, 4.0]).unwrap();
        assert_eq!(s.reciprocal().values(), &[0.25, 1.0, 2.0]);
    }

    #[test]
    fn kernel_config_bounds() {
        assert!(KernelConfig::new(0, 1.0).is_err());
        assert!(KernelConfig::new(1, 0.0).is_err());
        assert!(KernelConfig::new(1, f64::NAN).is_err());
        let c = KernelConfig::new(3, 2.0).unwrap();
        assert_eq!(c.degree(), 4);
    }
}
