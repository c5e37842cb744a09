//! Goodness-of-fit testing for log-symmetric distributions.
//!
//! A positive random variable `X` is log-symmetric about `θ` when `X/θ` and
//! `θ/X` have the same law. The departure measure
//! `Δ = E[max(X_1..X_m)/θ − θ/min(X_1..X_m)] / m` (with `m = β + 1`) is zero
//! exactly under log-symmetry; its U-statistic estimate is tested with a
//! jackknife empirical likelihood ratio whose null limit is χ²₁.
//!
//! ```
//! use logsym::{jel_test, KernelConfig, Sample};
//!
//! let sample = Sample::new(vec![0.25, 0.5, 0.8, 1.0, 1.25, 2.0, 4.0]).unwrap();
//! let result = jel_test(&sample, &KernelConfig::default(), 0.05).unwrap();
//! assert!(!result.reject);
//! ```

pub mod data;
pub mod distributions;
pub mod error;
pub mod jel;
pub mod sample;
pub mod sim;
pub mod special;
pub mod tables;
pub mod ustat;

pub use distributions::{fit_lognormal, transform_unit_symmetry, DistributionSpec, LogNormalFit, RngState};
pub use error::{Error, Result};
pub use jel::{
    el_lambda, jackknife, jackknife_variance, jel_log_ratio, jel_test, jel_test_detailed, normal_test,
    pseudo_values, ElSolution, Jackknife, JelReport, Method, PseudoValues, SigmaEstimate, TestResult,
};
pub use sample::{validate_sample, KernelConfig, Sample};
pub use sim::{emit_csv, run_power, run_type1, Mode, SimConfig, SimResult, SimRow, ThetaPolicy};
pub use special::{chi2_quantile, erf, inverse_normal_cdf, regularized_lower_gamma};
pub use ustat::{kernel_h, leave_one_out, theta_for_lognormal, ustat_fast, ustat_naive, UStatResult};
