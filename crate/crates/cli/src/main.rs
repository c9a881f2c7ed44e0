//! `dcp`: command-line front end for the dynamical Casimir-Polder model.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "dcp",
    version,
    about = "Time-dependent atom-wall Casimir-Polder energies and forces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate energies and forces at a single (d, t) point.
    #[command(allow_negative_numbers = true)]
    Eval(EvalArgs),
    /// Tabulate energies and forces over a time or distance grid.
    #[command(allow_negative_numbers = true)]
    Sweep(SweepArgs),
    /// Write the three figure tables and a gnuplot script.
    #[command(allow_negative_numbers = true)]
    Figures(FiguresArgs),
    /// Cross-check closed forms against quadrature and finite differences.
    Validate(ValidateArgs),
}

#[derive(Args, Clone)]
pub struct ModelArgs {
    /// Transition dipole magnitude.
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
    /// Wavenumber after the frequency change (ω0/c).
    #[arg(long, default_value_t = 1.0)]
    pub k0: f64,
    /// Wavenumber before the frequency change (ω0'/c).
    #[arg(long, default_value_t = 2.0)]
    pub k0p: f64,
    /// Speed of light.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Half-width of the excluded window around a = 1.
    #[arg(long = "lightcone-eps", default_value_t = 1e-3)]
    pub lightcone_eps: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Atom-wall distance.
    #[arg(long)]
    pub d: f64,
    /// Time since the frequency change.
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Vary {
    Time,
    Distance,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Swept coordinate.
    #[arg(long, value_enum, default_value_t = Vary::Time)]
    pub vary: Vary,
    /// Fixed distance (time sweeps).
    #[arg(long, default_value_t = 10.0)]
    pub d: f64,
    /// Fixed time (distance sweeps).
    #[arg(long, default_value_t = 0.0)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub tmin: f64,
    #[arg(long, default_value_t = 19.9)]
    pub tmax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub dmin: f64,
    #[arg(long, default_value_t = 20.0)]
    pub dmax: f64,
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    /// Keep light-cone points as NaN rows instead of excluding them.
    #[arg(long)]
    pub keep_lightcone: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct FiguresArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 10.0)]
    pub d: f64,
    /// Grid points of the t < 2d/c table; the later tables use 2× and 2.5×.
    #[arg(long, default_value_t = 400)]
    pub steps: usize,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Small,
    Full,
}

#[derive(Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Grid::Small)]
    pub grid: Grid,
    /// Absolute tolerance of the quadrature oracle.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flip the sign of the lπ term for a < m (mutation testing).
    #[arg(long, hide = true)]
    pub inject_branch_fault: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval(args) => commands::cmd_eval(&args),
        Command::Sweep(args) => commands::cmd_sweep(&args),
        Command::Figures(args) => commands::cmd_figures(&args),
        Command::Validate(args) => commands::cmd_validate(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dcp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
