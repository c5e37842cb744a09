//! Fixtures shared by the benchmarks.

use logsym::distributions::{sample, DistributionSpec, RngState};
use logsym::Sample;

/// A standard log-normal sample of size `n`.
pub fn lognormal_sample(n: usize, seed: u64) -> Sample {
    let spec = DistributionSpec::LogNormal { mu: 0.0, sigma: 1.0 };
    let draws = sample(&spec, n, &mut RngState::new(seed, 0)).expect("valid spec");
    Sample::new(draws).expect("positive draws")
}
