//! `logsym`: test data for log-symmetry, compute the departure statistic,
//! or run Monte Carlo rejection-rate studies.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "logsym", version, about = "Jackknife empirical likelihood test for log-symmetry")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the JEL (or normal-approximation) test on a data file.
    Test(TestArgs),
    /// Print the departure statistic, optionally with its leave-one-out values.
    Ustat(UstatArgs),
    /// Estimate rejection rates by Monte Carlo and write CSV.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug)]
pub struct DataArgs {
    /// Data file: one positive value per line, `#` comments. Use `-` for stdin.
    #[arg(required_unless_present = "dataset")]
    pub input: Option<PathBuf>,
    /// Use a bundled dataset instead of a file.
    #[arg(long, value_enum, conflicts_with = "input")]
    pub dataset: Option<Dataset>,
    /// Read the 1-based column k of a comma-separated file.
    #[arg(long, value_name = "K")]
    pub column: Option<usize>,
    /// PWM order (kernel degree is beta + 1).
    #[arg(long, default_value_t = 1)]
    pub beta: u32,
    /// Symmetry point.
    #[arg(long, conflicts_with = "transform")]
    pub theta: Option<f64>,
    /// Standardize the data before testing so that the symmetry point is 1.
    #[arg(long, value_enum)]
    pub transform: Option<Transform>,
    /// Log-scale location. With --transform it overrides the fitted value;
    /// without it the symmetry point is exp(mu).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Log-scale spread; overrides the fitted value (requires --transform).
    #[arg(long, requires = "transform")]
    pub sigma: Option<f64>,
    /// Emit a single JSON object.
    #[arg(long)]
    pub json: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Dataset {
    WeldingGap,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    Lognormal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum TestMethod {
    Jel,
    Normal,
}

#[derive(Args, Debug)]
pub struct TestArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = TestMethod::Jel)]
    pub method: TestMethod,
}

#[derive(Args, Debug)]
pub struct UstatArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Also print the leave-one-out statistics.
    #[arg(long)]
    pub jackknife: bool,
    /// Enumerate every subset instead of using the order-statistic form.
    #[arg(long)]
    pub naive: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Type1,
    Power,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Lognormal,
    Loglogistic,
    Loglaplace,
    Logcauchy,
    BirnbaumSaunders,
    Weibull,
    Gamma,
    Pareto,
    Halfnormal,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ThetaPolicyArg {
    Fixed,
    KnownMu,
    Transform,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Table1,
    Table2,
    Table3,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Defaults to type1 for log-symmetric families and power otherwise.
    #[arg(long, value_enum)]
    pub mode: Option<SimMode>,
    #[arg(long, value_enum, required_unless_present_any = ["config", "preset"])]
    pub family: Option<Family>,
    /// Log-scale location (lognormal, loglaplace, logcauchy).
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Log-scale spread (lognormal) or half-normal sigma.
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Shape parameter (loglogistic, birnbaum-saunders alpha, weibull, gamma, pareto).
    #[arg(long)]
    pub shape: Option<f64>,
    /// Scale parameter (loglogistic, loglaplace b, logcauchy gamma, birnbaum-saunders, weibull, gamma, pareto).
    #[arg(long)]
    pub scale: Option<f64>,
    /// Sample sizes, comma separated.
    #[arg(long = "n", value_delimiter = ',', default_values_t = [25usize, 50, 75, 100, 200])]
    pub n_values: Vec<usize>,
    /// PWM orders, comma separated.
    #[arg(long = "beta", value_delimiter = ',', default_values_t = [1u32])]
    pub betas: Vec<u32>,
    #[arg(long, default_value_t = logsym::sim::DEFAULT_REPS)]
    pub reps: u64,
    #[arg(long, default_value_t = logsym::sim::DEFAULT_ALPHA)]
    pub alpha: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Symmetry point selection; defaults to known-mu for lognormal and fixed otherwise.
    #[arg(long, value_enum)]
    pub theta_policy: Option<ThetaPolicyArg>,
    /// Fixed symmetry point (default: the family's own symmetry point, else 1).
    #[arg(long)]
    pub theta: Option<f64>,
    /// TOML file holding a `mode` and a simulation config.
    #[arg(long, conflicts_with_all = ["family", "preset"])]
    pub config: Option<PathBuf>,
    /// Reproduce a published table.
    #[arg(long, value_enum, conflicts_with = "family")]
    pub preset: Option<PresetArg>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on this.
    #[arg(long)]
    pub threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Test(args) => commands::test(&args),
        Command::Ustat(args) => commands::ustat(&args),
        Command::Simulate(args) => commands::simulate(&args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
