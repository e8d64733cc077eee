use std::fmt;
use std::io::Write;
use std::process::ExitCode;
use std::str::FromStr;

use mfcev::cds::{self, SpreadGrid};
use mfcev::mc::{self, McConfig, McResult, Scheme};
use mfcev::{CdsContract, Execution, MfCev, ModelParams};

use crate::error::CliError;
use crate::format::{self, BPS_DECIMALS, PROBABILITY_DIGITS};
use crate::scenario::Scenario;
use crate::{ContractArgs, CurveArgs, ModelArgs, TableArgs, ValidateArgs};

const DEFAULT_S0: f64 = 50.0;
const DEFAULT_FREQ: u32 = 2;
const Z_LIMIT: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    pub beta: f64,
    pub hurst: Option<f64>,
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let number = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"));
        match s.split_once(':') {
            Some((b, h)) => Ok(Series {
                beta: number(b)?,
                hurst: Some(number(h)?),
            }),
            None => Ok(Series {
                beta: number(s)?,
                hurst: None,
            }),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.hurst {
            Some(h) if self.beta != 0.0 => write!(f, "Q_beta{}_H{}", self.beta, h),
            _ => write!(f, "Q_beta{}", self.beta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeArg {
    Lamperti,
    Euler,
}

impl FromStr for SchemeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lamperti" => Ok(SchemeArg::Lamperti),
            "euler" => Ok(SchemeArg::Euler),
            other => Err(format!("unknown scheme `{other}` (expected `lamperti` or `euler`)")),
        }
    }
}

impl SchemeArg {
    fn scheme(self) -> Scheme {
        match self {
            SchemeArg::Lamperti => Scheme::LampertiBridge,
            SchemeArg::Euler => Scheme::EulerFullTruncation,
        }
    }

    fn name(self) -> &'static str {
        match self {
            SchemeArg::Lamperti => "lamperti",
            SchemeArg::Euler => "euler",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Probability,
    Spread,
}

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "probability" => Ok(Target::Probability),
            "spread" => Ok(Target::Spread),
            other => Err(format!("unknown target `{other}` (expected `probability` or `spread`)")),
        }
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag} (flag or scenario key `{flag}`)")))
}

/// Model parameters other than the noise mix.
struct Base {
    alpha: f64,
    sigma0: f64,
    rate: f64,
    s0: f64,
}

impl Base {
    fn resolve(m: &ModelArgs, sc: &Scenario) -> Result<Self, CliError> {
        Ok(Self {
            alpha: required(sc.merge(m.alpha, "alpha")?, "alpha")?,
            sigma0: required(sc.merge(m.sigma0, "sigma0")?, "sigma0")?,
            rate: required(sc.merge(m.rate, "rate")?, "rate")?,
            s0: sc.merge(m.s0, "s0")?.unwrap_or(DEFAULT_S0),
        })
    }

    fn with(&self, beta: f64, hurst: f64) -> Result<MfCev, CliError> {
        Ok(MfCev::new(ModelParams {
            r: self.rate,
            sigma0: self.sigma0,
            alpha: self.alpha,
            beta,
            hurst,
            s0: self.s0,
        })?)
    }
}

fn resolve_model(m: &ModelArgs, sc: &Scenario) -> Result<MfCev, CliError> {
    let base = Base::resolve(m, sc)?;
    let beta = required(sc.merge(m.beta, "beta")?, "beta")?;
    let hurst = required(sc.merge(m.hurst, "hurst")?, "hurst")?;
    base.with(beta, hurst)
}

fn resolve_contract(c: &ContractArgs, sc: &Scenario) -> Result<CdsContract, CliError> {
    let contract = CdsContract {
        maturity: required(sc.merge(c.maturity, "maturity")?, "maturity")?,
        recovery: required(sc.merge(c.recovery, "recovery")?, "recovery")?,
        payments_per_year: sc.merge(c.freq, "freq")?.unwrap_or(DEFAULT_FREQ),
        ..CdsContract::new(1.0, 0.0)
    };
    contract.validate().map_err(CliError::from)
}

pub fn spread(
    model: &ModelArgs,
    contract: &ContractArgs,
    sc: &Scenario,
    precision: Option<usize>,
) -> Result<ExitCode, CliError> {
    let m = resolve_model(model, sc)?;
    let c = resolve_contract(contract, sc)?;
    let bps = cds::cds_spread(&c, &m)?;
    println!("{}", format::fixed(bps, precision.unwrap_or(BPS_DECIMALS)));
    Ok(ExitCode::SUCCESS)
}

pub fn table1(args: &TableArgs, sc: &Scenario, precision: Option<usize>) -> Result<ExitCode, CliError> {
    let base = ModelParams {
        sigma0: sc.merge(args.sigma0, "sigma0")?.unwrap_or(0.2),
        r: sc.merge(args.rate, "rate")?.unwrap_or(0.05),
        s0: sc.merge(args.s0, "s0")?.unwrap_or(DEFAULT_S0),
        ..ModelParams::desk(0.0, 0.0, 0.8)
    };
    base.validate()?;
    let contract = CdsContract {
        recovery: sc.merge(args.recovery, "recovery")?.unwrap_or(0.5),
        payments_per_year: sc.merge(args.freq, "freq")?.unwrap_or(DEFAULT_FREQ),
        ..CdsContract::new(1.0, 0.5)
    }
    .validate()?;
    let mut grid = SpreadGrid::standard();
    if let Some(maturities) = sc.merge_list(args.maturities.clone(), "maturities")? {
        grid.maturities = maturities;
    }
    if let Some(alphas) = sc.merge_list(args.alphas.clone(), "alphas")? {
        grid.alphas = alphas;
    }
    for &t in &grid.maturities {
        CdsContract {
            maturity: t,
            ..contract
        }
        .validate()?;
    }
    let output = sc.merge(args.output.clone(), "output")?;
    let decimals = precision.unwrap_or(BPS_DECIMALS);

    let cells = cds::spread_table(&base, &contract, &grid, Execution::default());
    let mut csv = format::csv_writer(format::sink(output.as_deref())?);
    let io = |e: csv::Error| CliError::Output {
        path: output.clone().unwrap_or_else(|| "<stdout>".into()),
        source: e.into(),
    };
    csv.write_record(["beta", "hurst", "alpha", "maturity", "spread_bps"])
        .map_err(io)?;
    let mut errors = Vec::new();
    for cell in cells {
        match cell {
            Ok(c) => {
                let hurst = match c.hurst {
                    Some(h) if c.beta != 0.0 => format::coordinate(h),
                    _ => "-".to_string(),
                };
                csv.write_record([
                    format::coordinate(c.beta),
                    hurst,
                    format::coordinate(c.alpha),
                    format::coordinate(c.maturity),
                    format::fixed(c.spread_bps, decimals),
                ])
                .map_err(io)?;
            }
            Err(e) => errors.push(e),
        }
    }
    format::finish(csv, output.as_deref())?;
    match errors.len() {
        0 => Ok(ExitCode::SUCCESS),
        failed => {
            for e in &errors[1..] {
                eprintln!("error: {e}");
            }
            Err(CliError::Table {
                failed,
                first: errors.swap_remove(0),
            })
        }
    }
}

pub fn curve(args: &CurveArgs, sc: &Scenario, precision: Option<usize>) -> Result<ExitCode, CliError> {
    let base = Base::resolve(&args.model, sc)?;
    let t_max = required(sc.merge(args.tmax, "tmax")?, "tmax")?;
    let points = required(sc.merge(args.points, "points")?, "points")?;
    let output = sc.merge(args.output.clone(), "output")?;
    let digits = precision.unwrap_or(PROBABILITY_DIGITS);

    let fallback_hurst = sc.merge(args.model.hurst, "hurst")?;
    let series = match sc.merge_list(args.series.clone(), "series")? {
        Some(list) => list,
        None => vec![Series {
            beta: required(sc.merge(args.model.beta, "beta")?, "beta")?,
            hurst: Some(required(fallback_hurst, "hurst")?),
        }],
    };
    let mut columns = Vec::with_capacity(series.len());
    for s in &series {
        let hurst = match (s.hurst.or(fallback_hurst), s.beta == 0.0) {
            (Some(h), _) => h,
            // any admissible value; it has no effect without fractional noise
            (None, true) => 0.8,
            (None, false) => {
                return Err(CliError::Usage(format!(
                    "series {} needs a Hurst exponent (`beta:hurst` or --hurst)",
                    s.beta
                )))
            }
        };
        let model = base.with(s.beta, hurst)?;
        columns.push(cds::default_curve(&model, t_max, points)?);
    }

    let mut csv = format::csv_writer(format::sink(output.as_deref())?);
    let io = |e: csv::Error| CliError::Output {
        path: output.clone().unwrap_or_else(|| "<stdout>".into()),
        source: e.into(),
    };
    let mut header = vec!["t".to_string()];
    if series.len() == 1 {
        header.push("Q".into());
    } else {
        header.extend(series.iter().map(Series::to_string));
    }
    csv.write_record(&header).map_err(io)?;
    for k in 0..points {
        let mut row = vec![format::coordinate(columns[0][k].t)];
        row.extend(columns.iter().map(|c| format::significant(c[k].q, digits)));
        csv.write_record(&row).map_err(io)?;
    }
    format::finish(csv, output.as_deref())?;
    Ok(ExitCode::SUCCESS)
}

pub fn validate(args: &ValidateArgs, sc: &Scenario, precision: Option<usize>) -> Result<ExitCode, CliError> {
    let model = resolve_model(&args.model, sc)?;
    let contract = resolve_contract(&args.contract, sc)?;
    let paths = required(sc.merge(args.paths, "paths")?, "paths")?;
    let steps = required(sc.merge(args.steps, "steps")?, "steps")?;
    let seed = required(sc.merge(args.seed, "seed")?, "seed")?;
    let scheme = sc.merge(args.scheme, "scheme")?.unwrap_or(SchemeArg::Lamperti);
    let target = sc.merge(args.target, "target")?.unwrap_or(Target::Probability);

    let params = *model.params();
    let cfg = McConfig::new(paths, steps, contract.maturity, seed).with_scheme(scheme.scheme());
    let times = mc::simulate_fpt(&params, &cfg)?;

    let (label, analytic, estimate, fmt): (_, _, McResult, Box<dyn Fn(f64) -> String>) = match target {
        Target::Probability => {
            let q = model.default_probability(contract.maturity)?;
            let mut est = times.default_probability(contract.maturity);
            if est.std_error == 0.0 {
                est.std_error = (q * (1.0 - q) / paths as f64).sqrt();
            }
            let digits = precision.unwrap_or(PROBABILITY_DIGITS);
            (
                "default probability",
                q,
                est,
                Box::new(move |v| format::significant(v, digits)),
            )
        }
        Target::Spread => {
            let s = cds::cds_spread(&contract, &model)?;
            let est = times.cds_spread(params.r, &contract)?;
            let decimals = precision.unwrap_or(BPS_DECIMALS);
            ("spread (bps)", s, est, Box::new(move |v| format::fixed(v, decimals)))
        }
    };
    let z = estimate.z_score(analytic);
    if !z.is_finite() {
        return Err(CliError::Numerical(format!(
            "z-score is undefined (estimate {}, std error {})",
            estimate.estimate, estimate.std_error
        )));
    }
    let pass = z.abs() <= Z_LIMIT;

    let mut out = std::io::stdout().lock();
    let report = format!(
        "target     {label} at T = {}\n\
         analytic   {}\n\
         estimate   {}\n\
         std_error  {}\n\
         z          {z:.3}\n\
         defaulted  {} of {}\n\
         steps      {steps}\n\
         seed       {seed}\n\
         scheme     {}\n\
         result     {}\n",
        format::coordinate(contract.maturity),
        fmt(analytic),
        fmt(estimate.estimate),
        format::significant(estimate.std_error, 3),
        estimate.n_defaulted,
        estimate.n_paths,
        scheme.name(),
        if pass { "pass (|z| <= 4)" } else { "FAIL (|z| > 4)" },
    );
    out.write_all(report.as_bytes()).map_err(|source| CliError::Output {
        path: "<stdout>".into(),
        source,
    })?;
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
