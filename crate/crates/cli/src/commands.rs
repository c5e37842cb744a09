use std::fs;
use std::io::{self, Read, Write};

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use logsym::data::{parse_values, WELDING_GAP};
use logsym::distributions::DistributionSpec;
use logsym::sim::{self, Mode, SimConfig, SimResult, ThetaPolicy};
use logsym::tables::{self, Preset};
use logsym::{
    fit_lognormal, jel_test_detailed, leave_one_out, normal_test, theta_for_lognormal, transform_unit_symmetry,
    ustat_fast, ustat_naive, KernelConfig, LogNormalFit, Sample,
};

use crate::report::{TestReport, UstatReport};
use crate::{DataArgs, Dataset, Family, PresetArg, SimMode, SimulateArgs, TestArgs, TestMethod, ThetaPolicyArg, UstatArgs};

/// Largest sample accepted by `ustat --naive`.
const NAIVE_MAX_N: usize = 20;

struct Loaded {
    sample: Sample,
    config: KernelConfig,
    fit: Option<LogNormalFit>,
}

fn read_text(data: &DataArgs) -> Result<String> {
    if let Some(Dataset::WeldingGap) = data.dataset {
        return Ok(WELDING_GAP.to_string());
    }
    let path = data.input.as_ref().expect("clap requires input or dataset");
    if path.as_os_str() == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).context("reading stdin")?;
        return Ok(text);
    }
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load(data: &DataArgs) -> Result<Loaded> {
    let text = read_text(data)?;
    let values = parse_values(&text, data.column)?;
    let raw = Sample::new(values)?;

    if data.transform.is_some() {
        let fit = match (data.mu, data.sigma) {
            (Some(mu_hat), Some(sigma_hat)) => LogNormalFit { mu_hat, sigma_hat },
            (mu, sigma) => {
                let fitted = fit_lognormal(&raw)?;
                LogNormalFit {
                    mu_hat: mu.unwrap_or(fitted.mu_hat),
                    sigma_hat: sigma.unwrap_or(fitted.sigma_hat),
                }
            }
        };
        let sample = transform_unit_symmetry(&raw, &fit)?;
        let config = KernelConfig::new(data.beta, 1.0)?;
        return Ok(Loaded { sample, config, fit: Some(fit) });
    }

    let theta = match (data.theta, data.mu) {
        (Some(_), Some(_)) => bail!("--theta and --mu both set the symmetry point; pass only one"),
        (Some(theta), None) => theta,
        (None, Some(mu)) => theta_for_lognormal(mu),
        (None, None) => 1.0,
    };
    let config = KernelConfig::new(data.beta, theta)?;
    Ok(Loaded { sample: raw, config, fit: None })
}

pub fn test(args: &TestArgs) -> Result<()> {
    let Loaded { sample, config, fit } = load(&args.data)?;
    let report = match args.method {
        TestMethod::Jel => {
            let detail = jel_test_detailed(&sample, &config, args.alpha)?;
            TestReport {
                n: sample.len(),
                beta: config.beta(),
                theta: config.theta(),
                fit,
                delta_hat: detail.jackknife.delta_hat,
                lambda: detail.solution.feasible.then_some(detail.solution.lambda),
                decision: detail.result.decision().to_string(),
                result: detail.result,
            }
        }
        TestMethod::Normal => {
            let result = normal_test(&sample, &config, args.alpha)?;
            TestReport {
                n: sample.len(),
                beta: config.beta(),
                theta: config.theta(),
                fit,
                delta_hat: ustat_fast(&sample, &config)?.delta_hat,
                lambda: None,
                decision: result.decision().to_string(),
                result,
            }
        }
    };

    let mut out = io::stdout().lock();
    if args.data.json {
        serde_json::to_writer(&mut out, &report)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "n            {}", report.n)?;
    writeln!(out, "beta         {}", report.beta)?;
    if let Some(fit) = report.fit {
        writeln!(out, "mu_hat       {}", fit.mu_hat)?;
        writeln!(out, "sigma_hat    {}", fit.sigma_hat)?;
    }
    writeln!(out, "theta        {}", report.theta)?;
    writeln!(out, "delta_hat    {}", report.delta_hat)?;
    match args.method {
        TestMethod::Jel => {
            match report.lambda {
                Some(lambda) => writeln!(out, "lambda       {lambda}")?,
                None => writeln!(out, "lambda       (infeasible: all pseudo-values share a sign)")?,
            }
            writeln!(out, "-2 log R     {}", report.result.statistic)?;
            writeln!(out, "threshold    {} (chi-square 1 df, alpha = {})", report.result.threshold, args.alpha)?;
        }
        TestMethod::Normal => {
            writeln!(out, "z statistic  {}", report.result.statistic)?;
            writeln!(out, "threshold    {} (normal, alpha/2 = {})", report.result.threshold, args.alpha / 2.0)?;
        }
    }
    writeln!(out, "decision     {}", report.decision)?;
    Ok(())
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

pub fn ustat(args: &UstatArgs) -> Result<()> {
    let Loaded { sample, config, .. } = load(&args.data)?;
    let n = sample.len();
    let delta_hat = if args.naive {
        if n > NAIVE_MAX_N {
            bail!(
                "refusing --naive for n = {n}: enumeration visits C({n}, {}) = {:.0} subsets; \
                 it is limited to n <= {NAIVE_MAX_N} (the default order-statistic form is exact and O(n))",
                config.degree(),
                binomial(n, config.degree())
            );
        }
        ustat_naive(&sample, &config)?.delta_hat
    } else {
        ustat_fast(&sample, &config)?.delta_hat
    };
    let loo = if args.jackknife { Some(leave_one_out(&sample, &config)?) } else { None };

    let mut out = io::stdout().lock();
    if args.data.json {
        let report = UstatReport {
            n,
            beta: config.beta(),
            theta: config.theta(),
            naive: args.naive,
            delta_hat,
            leave_one_out: loo,
        };
        serde_json::to_writer(&mut out, &report)?;
        writeln!(out)?;
        return Ok(());
    }
    writeln!(out, "{delta_hat}")?;
    if let Some(loo) = loo {
        for (k, (x, d)) in sample.values().iter().zip(&loo).enumerate() {
            writeln!(out, "{}\t{x}\t{d}", k + 1)?;
        }
    }
    Ok(())
}

#[derive(Debug, Deserialize)]
struct SimFile {
    mode: Mode,
    #[serde(flatten)]
    config: SimConfig,
}

fn spec_from_flags(family: Family, a: &SimulateArgs) -> DistributionSpec {
    let mu = a.mu.unwrap_or(0.0);
    let sigma = a.sigma.unwrap_or(1.0);
    let shape = a.shape.unwrap_or(1.0);
    let scale = a.scale.unwrap_or(1.0);
    match family {
        Family::Lognormal => DistributionSpec::LogNormal { mu, sigma },
        Family::Loglogistic => DistributionSpec::LogLogistic { scale, shape },
        Family::Loglaplace => DistributionSpec::LogLaplace { mu, b: scale },
        Family::Logcauchy => DistributionSpec::LogCauchy { mu, gamma: scale },
        Family::BirnbaumSaunders => DistributionSpec::BirnbaumSaunders { alpha: shape, scale },
        Family::Weibull => DistributionSpec::Weibull { shape, scale },
        Family::Gamma => DistributionSpec::Gamma { shape, scale },
        Family::Pareto => DistributionSpec::Pareto { shape, scale },
        Family::Halfnormal => DistributionSpec::HalfNormal { sigma },
    }
}

fn designs(a: &SimulateArgs) -> Result<Vec<(Mode, SimConfig)>> {
    if let Some(preset) = a.preset {
        let preset = match preset {
            PresetArg::Table1 => Preset::Table1,
            PresetArg::Table2 => Preset::Table2,
            PresetArg::Table3 => Preset::Table3,
        };
        return Ok(tables::preset(preset, a.reps, a.alpha, a.seed));
    }
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: SimFile = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(vec![(file.mode, file.config)]);
    }
    let family = a.family.expect("clap requires --family");
    let spec = spec_from_flags(family, a);
    let mode = match a.mode {
        Some(SimMode::Type1) => Mode::Type1,
        Some(SimMode::Power) => Mode::Power,
        None if spec.is_log_symmetric() => Mode::Type1,
        None => Mode::Power,
    };
    let fixed = ThetaPolicy::Fixed { theta: a.theta.or(spec.symmetry_point()).unwrap_or(1.0) };
    let theta_policy = match (a.theta_policy, spec) {
        (Some(ThetaPolicyArg::Fixed), _) => fixed,
        (Some(ThetaPolicyArg::Transform), _) => ThetaPolicy::TransformEstimated,
        (Some(ThetaPolicyArg::KnownMu), DistributionSpec::LogNormal { mu, .. }) => ThetaPolicy::LognormalKnownMu { mu },
        (Some(ThetaPolicyArg::KnownMu), _) => bail!("--theta-policy known-mu applies to the lognormal family only"),
        (None, DistributionSpec::LogNormal { mu, .. }) if mode == Mode::Type1 && a.theta.is_none() => {
            ThetaPolicy::LognormalKnownMu { mu }
        }
        (None, _) => fixed,
    };
    let config = SimConfig {
        spec,
        n_values: a.n_values.clone(),
        betas: a.betas.clone(),
        reps: a.reps,
        alpha: a.alpha,
        seed: a.seed,
        theta_policy,
    };
    Ok(vec![(mode, config)])
}

fn run_all(designs: &[(Mode, SimConfig)]) -> Result<SimResult> {
    let mut result = SimResult::default();
    for (mode, config) in designs {
        result.extend(sim::run(*mode, config)?);
    }
    Ok(result)
}

pub fn simulate(args: &SimulateArgs) -> Result<()> {
    let designs = designs(args)?;
    for (_, config) in &designs {
        config.validate()?;
    }
    let mut result = match args.threads {
        Some(threads) => sim::with_threads(threads, || run_all(&designs))??,
        None => run_all(&designs)?,
    };
    result.sort();

    match &args.out {
        Some(path) => sim::emit_csv(&result, path)?,
        None => sim::write_csv(&result, io::stdout().lock())?,
    }

    let comparisons = tables::compare(&result);
    let mut err = io::stderr().lock();
    for row in &result.rows {
        let published = comparisons.iter().find(|c| c.row == *row).map(|c| {
            let flag = match (c.published.reliable, c.within) {
                (false, _) => "published value unreliable",
                (true, true) => "within 99.9% band",
                (true, false) => "outside 99.9% band",
            };
            format!("  published {} ({flag})", c.published.value)
        });
        writeln!(
            err,
            "{:<18} {:<22} n={:<4} beta={} rate={:.4}{}",
            row.family,
            row.params,
            row.n,
            row.beta,
            row.rejection_rate,
            published.unwrap_or_default()
        )?;
    }
    let power_rows = SimResult {
        rows: result
            .rows
            .iter()
            .filter(|r| designs.iter().any(|(m, c)| *m == Mode::Power && c.spec.name() == r.family))
            .cloned()
            .collect(),
    };
    for v in sim::power_sanity(&power_rows, 0.03) {
        writeln!(
            err,
            "warning: power of {} ({}) beta={} drops from {:.4} at n={} to {:.4} at n={}",
            v.family, v.params, v.beta, v.rate_from, v.n_from, v.rate_to, v.n_to
        )?;
    }
    Ok(())
}
