//! `parity-curve`: option-implied yield curves from the command line.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use chrono::NaiveDate;
use clap::{Args, Parser, Subcommand, ValueEnum};
use parity_curve::aggregation::{AggregationMethod, DEFAULT_ATM_TOLERANCE, DEFAULT_BIN_COUNT};
use parity_curve::market_data::{OptionKind, PriceRule};
use parity_curve::parity::ClusterRule;

mod commands;
mod output;
mod svg;

#[derive(Debug, Parser)]
#[command(name = "parity-curve", version, about = "Zero-coupon yield curves implied by put-call parity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Implied-yield surface for one trade date of an option chain.
    Surface(SurfaceArgs),
    /// Aggregate the surface and compare it with a treasury par curve.
    Compare(CompareArgs),
    /// Box-whisker summaries of implied yields by maturity or moneyness.
    Stats(StatsArgs),
    /// Generate a Black-Scholes option chain under a constant rate.
    Synth(SynthArgs),
    /// Monte Carlo zero-bond price under a short-rate model.
    McBond(McBondArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output directory.
    #[arg(long, env = "PARITY_CURVE_OUT", default_value = ".")]
    pub out_dir: PathBuf,
    /// Output formats, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "csv")]
    pub format: Vec<Format>,
}

impl OutputArgs {
    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    /// Option-chain CSV.
    pub chain: PathBuf,
    #[arg(long, value_parser = parse_price_rule, default_value = "mid")]
    pub price_rule: PriceRule,
    /// `gap` (relative gap), `abs-gap` (largest absolute gap) or `fixed:<days>`.
    #[arg(long, value_parser = parse_cluster, default_value = "gap")]
    pub cluster: ClusterRule,
    /// Fail on the first malformed row instead of writing a rejects report.
    #[arg(long)]
    pub strict: bool,
    /// Trade date to process when the chain holds several.
    #[arg(long)]
    pub date: Option<NaiveDate>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    /// Treasury par-yield CSV.
    pub treasury: PathBuf,
    #[arg(long, value_parser = parse_method, default_value = "median")]
    pub method: AggregationMethod,
    /// Largest |M - 1| accepted as at-the-money.
    #[arg(long, default_value_t = DEFAULT_ATM_TOLERANCE)]
    pub atm_tol: f64,
    /// Spacing of the exported market curve, in days.
    #[arg(long, default_value_t = 7.0)]
    pub curve_step_days: f64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupBy {
    Maturity,
    Moneyness,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub chain: ChainArgs,
    #[arg(long, value_enum, default_value = "maturity")]
    pub groupby: GroupBy,
    #[arg(long, default_value_t = DEFAULT_BIN_COUNT)]
    pub bins: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StaleKind {
    ShiftedSpot,
    Moneyness,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 100.0)]
    pub spot: f64,
    #[arg(long, default_value_t = 0.2)]
    pub vol: f64,
    /// Real-world drift; only reported as the market price of risk.
    #[arg(long, default_value_t = 0.07)]
    pub drift: f64,
    #[arg(long, default_value_t = 0.03)]
    pub rate: f64,
    #[arg(long, default_value = "2024-10-09")]
    pub trade_date: NaiveDate,
    /// Days to expiry: `a,b,c` or `start:end:step`.
    #[arg(long, default_value = "7,14,21,30,44,73,101,164,255,437,801,1165,1529,1825")]
    pub maturities: String,
    /// Moneyness grid: `a,b,c` or `start:end:step`.
    #[arg(long, default_value = "0.7:1.3:0.025")]
    pub moneyness: String,
    #[arg(long, default_value_t = 0.0)]
    pub half_spread: f64,
    #[arg(long, default_value_t = 0.0)]
    pub stale_fraction: f64,
    #[arg(long, value_parser = parse_kind, default_value = "put")]
    pub stale_leg: OptionKind,
    #[arg(long, value_enum, default_value = "shifted-spot")]
    pub stale_model: StaleKind,
    /// Relative spot shift (shifted-spot) or error scale (moneyness).
    #[arg(long, default_value_t = 0.0)]
    pub stale_size: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RateModelKind {
    Constant,
    Vasicek,
}

#[derive(Debug, Args, serde::Serialize)]
pub struct McBondArgs {
    #[arg(long, value_enum, default_value = "constant")]
    pub model: RateModelKind,
    /// Constant short rate.
    #[arg(long, default_value_t = 0.05)]
    pub rate: f64,
    /// Vasicek mean-reversion speed.
    #[arg(long, default_value_t = 0.1)]
    pub a: f64,
    /// Vasicek long-run level.
    #[arg(long, default_value_t = 0.05)]
    pub b: f64,
    /// Vasicek rate volatility.
    #[arg(long, default_value_t = 0.01)]
    pub sigma: f64,
    /// Vasicek initial rate.
    #[arg(long, default_value_t = 0.03)]
    pub r0: f64,
    /// Valuation time in years.
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    /// Bond maturity in years.
    #[arg(long, default_value_t = 1.0)]
    pub maturity: f64,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    /// Euler steps over the whole horizon; defaults to 252 per year.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    #[serde(skip)]
    pub out: OutputArgs,
}

fn parse_price_rule(s: &str) -> Result<PriceRule, String> {
    match s {
        "mid" => Ok(PriceRule::Mid),
        "last" => Ok(PriceRule::Last),
        _ => Err(format!("expected `mid` or `last`, got `{s}`")),
    }
}

fn parse_method(s: &str) -> Result<AggregationMethod, String> {
    match s {
        "median" => Ok(AggregationMethod::Median),
        "atm" => Ok(AggregationMethod::Atm),
        _ => Err(format!("expected `median` or `atm`, got `{s}`")),
    }
}

fn parse_kind(s: &str) -> Result<OptionKind, String> {
    match s {
        "call" => Ok(OptionKind::Call),
        "put" => Ok(OptionKind::Put),
        _ => Err(format!("expected `call` or `put`, got `{s}`")),
    }
}

fn parse_cluster(s: &str) -> Result<ClusterRule, String> {
    match s {
        "gap" => Ok(ClusterRule::RelativeGap),
        "abs-gap" => Ok(ClusterRule::LargestGap),
        _ => {
            let days = s
                .strip_prefix("fixed:")
                .and_then(|d| d.parse::<f64>().ok())
                .filter(|d| *d > 0.0)
                .ok_or_else(|| format!("expected `gap`, `abs-gap` or `fixed:<days>`, got `{s}`"))?;
            Ok(ClusterRule::Fixed { days })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Surface(a) => commands::surface(&a),
        Command::Compare(a) => commands::compare(&a),
        Command::Stats(a) => commands::stats(&a),
        Command::Synth(a) => commands::synth(&a),
        Command::McBond(a) => commands::mc_bond(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
