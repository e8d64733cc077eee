mod commands;
mod error;
mod format;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::{SchemeArg, Series, Target};
use crate::error::CliError;
use crate::scenario::Scenario;

#[derive(Parser, Debug)]
#[command(
    name = "mfcev",
    version,
    about = "CDS spreads and default probabilities under the mixed-fractional CEV model",
    after_help = "Exit codes: 0 success, 1 Monte Carlo z-test failure, 2 usage or parameter error, 3 numerical failure."
)]
struct Cli {
    /// Flat `key = value` file supplying defaults; explicit flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    scenario: Option<PathBuf>,
    /// Decimals for spreads in bps, significant digits for probabilities
    #[arg(long, global = true, value_name = "N")]
    precision: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quote the par CDS spread for one contract
    Spread {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        contract: ContractArgs,
    },
    /// Reproduce the benchmark spread table as CSV
    Table1(TableArgs),
    /// Default probability curves as CSV
    Curve(CurveArgs),
    /// Compare a Monte Carlo estimate with the analytic value
    Validate(ValidateArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ModelArgs {
    /// Elasticity exponent, must be < 2
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Weight of the fractional noise component, >= 0
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Hurst exponent in (0.75, 1)
    #[arg(long, allow_negative_numbers = true)]
    pub hurst: Option<f64>,
    /// Volatility at inception
    #[arg(long, allow_negative_numbers = true)]
    pub sigma0: Option<f64>,
    /// Risk-free rate
    #[arg(long, allow_negative_numbers = true)]
    pub rate: Option<f64>,
    /// Initial asset price [default: 50]
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ContractArgs {
    /// Recovery rate in [0, 1]
    #[arg(long, allow_negative_numbers = true)]
    pub recovery: Option<f64>,
    /// Contract maturity in years
    #[arg(long, allow_negative_numbers = true)]
    pub maturity: Option<f64>,
    /// Premium payments per year [default: 2]
    #[arg(long)]
    pub freq: Option<u32>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct TableArgs {
    /// Volatility at inception [default: 0.2]
    #[arg(long, allow_negative_numbers = true)]
    pub sigma0: Option<f64>,
    /// Risk-free rate [default: 0.05]
    #[arg(long, allow_negative_numbers = true)]
    pub rate: Option<f64>,
    /// Recovery rate [default: 0.5]
    #[arg(long, allow_negative_numbers = true)]
    pub recovery: Option<f64>,
    /// Initial asset price [default: 50]
    #[arg(long, allow_negative_numbers = true)]
    pub s0: Option<f64>,
    /// Premium payments per year [default: 2]
    #[arg(long)]
    pub freq: Option<u32>,
    /// Comma-separated maturities [default: 1,2,5,10]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub maturities: Vec<f64>,
    /// Comma-separated elasticities [default: 0,-2]
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub alphas: Vec<f64>,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct CurveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Right end of the time grid in years
    #[arg(long)]
    pub tmax: Option<f64>,
    /// Number of grid points, endpoints included
    #[arg(long)]
    pub points: Option<usize>,
    /// Series as `beta:hurst` (or `0` for the classical model); repeatable
    #[arg(long, value_name = "BETA[:HURST]")]
    pub series: Vec<Series>,
    /// Write the CSV here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub contract: ContractArgs,
    /// Number of simulated paths
    #[arg(long)]
    pub paths: Option<usize>,
    /// Time steps over the contract's life
    #[arg(long)]
    pub steps: Option<usize>,
    /// Master seed of the per-path random streams
    #[arg(long)]
    pub seed: Option<u64>,
    /// Discretization: `lamperti` (default) or `euler`
    #[arg(long)]
    pub scheme: Option<SchemeArg>,
    /// Quantity to compare: `probability` (default) or `spread`
    #[arg(long)]
    pub target: Option<Target>,
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let scenario = match &cli.scenario {
        Some(path) => Scenario::load(path)?,
        None => Scenario::default(),
    };
    let precision = scenario.merge(cli.precision, "precision")?;
    match cli.command {
        Command::Spread { model, contract } => commands::spread(&model, &contract, &scenario, precision),
        Command::Table1(args) => commands::table1(&args, &scenario, precision),
        Command::Curve(args) => commands::curve(&args, &scenario, precision),
        Command::Validate(args) => commands::validate(&args, &scenario, precision),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
