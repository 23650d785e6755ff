//! Command-line arguments and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use magic_billiards::certificates::CLOSURE_TOL;
use magic_billiards::certificates::TORSION_TOL;
use magic_billiards::{ConfocalFamily, MagicKind, TableSpec};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "magicbilliards",
    version,
    about = "Magic billiards in ellipses and confocal annuli"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a trajectory and write its impacts as CSV.
    Simulate(SimulateArgs),
    /// Search for periodic caustics and write their certificates as JSON.
    Periodic(PeriodicArgs),
    /// Classify a level set, or emit the Fomenko graph, as JSON.
    Topology(TopologyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableArg {
    Ellipse,
    Annulus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemArg {
    Identity,
    FlipLong,
    FlipShort,
    HalfTurn,
}

impl From<SystemArg> for MagicKind {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::Identity => MagicKind::Identity,
            SystemArg::FlipLong => MagicKind::FlipLong,
            SystemArg::FlipShort => MagicKind::FlipShort,
            SystemArg::HalfTurn => MagicKind::HalfTurn,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Squared long semi-axis.
    #[arg(long, default_value_t = 9.0, allow_negative_numbers = true)]
    pub a: f64,
    /// Squared short semi-axis.
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, value_enum)]
    pub system: SystemArg,
    #[arg(long, value_enum, default_value_t = TableArg::Ellipse)]
    pub table: TableArg,
    /// Confocal parameter of the inner wall; defaults to 0.75·b.
    #[arg(long, allow_negative_numbers = true)]
    pub inner_lambda: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub x0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub y0: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub dx: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub dy: f64,
    #[arg(long, default_value_t = 10)]
    pub bounces: usize,
    /// Optional SVG rendering of the trajectory.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PeriodicArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long)]
    pub n: usize,
    /// Search interval `LO:HI` of caustic parameters; defaults to `0:a`.
    #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
    pub interval: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Args)]
pub struct TopologyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Caustic level to classify; without it the whole graph is emitted.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
}

pub fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
    let lo = lo
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad lower bound '{lo}': {e}"))?;
    let hi = hi
        .trim()
        .parse::<f64>()
        .map_err(|e| format!("bad upper bound '{hi}': {e}"))?;
    Ok((lo, hi))
}

/// Validated parameters shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub table: TableSpec,
    pub seed: u64,
    pub closure_tol: f64,
    pub certificate_tol: f64,
}

impl RunConfig {
    pub fn from_args(args: &CommonArgs) -> Result<Self, CliError> {
        let fam =
            ConfocalFamily::new(args.a, args.b).map_err(|e| CliError::Usage(e.to_string()))?;
        let system = MagicKind::from(args.system);
        let table = match args.table {
            TableArg::Ellipse => {
                if args.inner_lambda.is_some() {
                    return Err(CliError::Usage(
                        "--inner-lambda needs --table annulus".into(),
                    ));
                }
                TableSpec::ellipse(fam, system)
            }
            TableArg::Annulus => {
                let li = args.inner_lambda.unwrap_or(0.75 * fam.b());
                TableSpec::annulus(fam, li, system).map_err(|e| CliError::Usage(e.to_string()))?
            }
        };
        Ok(Self {
            table,
            seed: args.seed,
            closure_tol: CLOSURE_TOL,
            certificate_tol: TORSION_TOL,
        })
    }
}
