//! Command-line front end: tabulates rates, positivity curves, trajectories,
//! distinguishability diagnostics and threshold scans as CSV or JSON.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
pub mod config;
mod error;
pub mod output;

pub use error::{CliError, EXIT_IO, EXIT_NUMERICAL, EXIT_USAGE};
use output::Format;

#[derive(Debug, Parser)]
#[command(name = "unruh", version, about = "Transient Unruh-detector dynamics", args_override_self = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decay-rate table.
    Rates(RatesArgs),
    /// Ground-population curves and the complete-positivity verdict.
    Cp(CpArgs),
    /// Threshold scan in the scaled gap.
    Scan(ScanArgs),
    /// Bloch trajectory from a chosen initial state.
    Evolve(EvolveArgs),
    /// Helstrom norm, trace distance and information flow.
    Backflow(BackflowArgs),
    /// Populations on the decelerating path.
    Reversed(ReversedArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Transition,
    Physical,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Scaled gap ω̄ = ωα.
    #[arg(long, allow_hyphen_values = true)]
    pub wbar: Option<f64>,
    /// Gap in physical units; ω̄ = omega × alpha.
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    /// Inverse proper acceleration.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// End of the τ̄ range [default: 15].
    #[arg(long)]
    pub tau_max: Option<f64>,
    /// Number of τ̄ samples [default: 241].
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub rel_tol: f64,
    /// Output format [default: csv, or json for scan and reversed].
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Freeze the rates at their eternal-acceleration values.
    #[arg(long)]
    pub markovian_baseline: bool,
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    /// How scaled rates convert to rates per unit τ̄.
    #[arg(long, value_enum, default_value_t = Scale::Transition)]
    pub time_scale: Scale,
    /// Append columns in physical units.
    #[arg(long)]
    pub physical: bool,
    /// Output file; `-` for stdout.
    #[arg(long, short)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    /// File of `key = value` lines mirroring the flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Describe the output columns and exit.
    #[arg(long)]
    #[serde(skip)]
    pub describe: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RatesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Keep only the dephasing channel (allows --wbar 0).
    #[arg(long)]
    pub dephasing_only: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CpArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    /// First ω̄ where the ground population goes negative.
    Cp,
    /// First ω̄ where the emission rate goes negative.
    Gamma2,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ScanArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = Target::Cp)]
    pub target: Target,
    /// Lower end of the range [default: 1.2 for cp, 0.5 for gamma2].
    #[arg(long)]
    pub wbar_min: Option<f64>,
    /// Upper end of the range [default: 2.0].
    #[arg(long)]
    pub wbar_max: Option<f64>,
    #[arg(long, default_value_t = 1e-3)]
    pub resolution: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// `ground`, `excited`, or Bloch components such as `z=+1` or `x=0.6,z=0.8`.
    #[arg(long, default_value = "z=+1", allow_hyphen_values = true)]
    pub init: String,
    /// Include the free Hamiltonian.
    #[arg(long)]
    pub hamiltonian: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputChoice {
    /// Two orthogonal maximally entangled states, two-level ancilla.
    Bell,
    /// Orthogonal maximally entangled states with distinct ancilla support, three-level ancilla.
    Shifted,
    /// The excited state tagged by orthogonal ancilla levels, three-level ancilla.
    Flagged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BackflowArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = InputChoice::Bell)]
    pub input: InputChoice,
    /// Axis of the antipodal pair used for the trace distance.
    #[arg(long, value_enum, default_value_t = Axis::X)]
    pub pair: Axis,
    /// Pairs sampled for the BLP measure.
    #[arg(long, default_value_t = 200)]
    pub pairs: usize,
    #[arg(long)]
    pub hamiltonian: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Interval on the inertial branch taken as written (`+s̄²`).
    Literal,
    /// Timelike-negative interval (`-s̄²`).
    Timelike,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ReversedArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Comma-separated probe times.
    #[arg(long, default_value = "0.01,0.1,1")]
    pub probes: String,
    #[arg(long, value_enum, default_value_t = Convention::Literal)]
    pub convention: Convention,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Rates(_) => "rates",
            Command::Cp(_) => "cp",
            Command::Scan(_) => "scan",
            Command::Evolve(_) => "evolve",
            Command::Backflow(_) => "backflow",
            Command::Reversed(_) => "reversed",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Rates(a) => &a.common,
            Command::Cp(a) => &a.common,
            Command::Scan(a) => &a.common,
            Command::Evolve(a) => &a.common,
            Command::Backflow(a) => &a.common,
            Command::Reversed(a) => &a.common,
        }
    }

    fn default_format(&self) -> Format {
        match self {
            Command::Scan(_) | Command::Reversed(_) => Format::Json,
            _ => Format::Csv,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit status. Failures print a JSON error record on `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match run_inner(args.into_iter().map(Into::into).collect(), out) {
        Ok(()) => 0,
        Err(Outcome::Early(code)) => code,
        Err(Outcome::Failed(e)) => {
            let _ = writeln!(err, "{}", e.record());
            e.exit_code()
        }
    }
}

enum Outcome {
    Early(i32),
    Failed(CliError),
}

impl From<CliError> for Outcome {
    fn from(e: CliError) -> Self {
        Outcome::Failed(e)
    }
}

fn run_inner(args: Vec<OsString>, out: &mut dyn Write) -> Result<(), Outcome> {
    let args = config::expand(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return Err(Outcome::Early(0));
            }
            return Err(CliError::Usage(e.render().to_string().trim_end().to_string()).into());
        }
    };
    let name = cli.command.name();
    let common = cli.command.common().clone();
    if common.describe {
        out.write_all(commands::describe(name).as_bytes()).map_err(CliError::from)?;
        return Ok(());
    }
    let report = commands::execute(&cli.command)?;
    let format = common.format.unwrap_or(cli.command.default_format());
    let text = report.render(format);
    let dir = std::env::var_os("UNRUH_OUTPUT_DIR").map(PathBuf::from);
    match output::destination(common.output.as_deref(), dir.as_deref(), name, format) {
        Some(path) => output::write_to(&path, &text)?,
        None => out.write_all(text.as_bytes()).map_err(CliError::from)?,
    }
    Ok(())
}
