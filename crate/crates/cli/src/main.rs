//! `twirlc`: colour a device, synthesise and verify a decoupling group, emit
//! its schedule, and check it numerically.

mod commands;
mod compile;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twirlc_core::Error;

pub const EXIT_COUNTEREXAMPLE: u8 = 2;
pub const EXIT_INFEASIBLE: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "twirlc", version, about = "Dynamical-decoupling sequences from additive codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Colour a device and write the colouring as JSON.
    Color(ColorArgs),
    /// Pick, verify and sequence a decoupling group for a device.
    Compile(CompileArgs),
    /// Check a group file against the terms of a device.
    Verify(VerifyArgs),
    /// Sequence length against colour count for each code family.
    Scaling(ScalingArgs),
    /// Stroboscopic error of a schedule under a Hamiltonian.
    Simulate(SimulateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DeviceArgs {
    /// Device JSON path, bundled name (e.g. `heavy_hex`) or `complete:N`.
    #[arg(long)]
    pub device: String,
    /// Colouring JSON; defaults to the bundled colouring or DSATUR.
    #[arg(long)]
    pub coloring: Option<PathBuf>,
    /// JSON array of vertex ids fixing the DSATUR tie-break order.
    #[arg(long)]
    pub seed_order: Option<PathBuf>,
    /// Interaction model applied to every hyperedge: all, Z, heisenberg, chirality.
    #[arg(long)]
    pub model: Option<String>,
}

#[derive(Args, Debug)]
pub struct ColorArgs {
    #[command(flatten)]
    pub device: DeviceArgs,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Universal2,
    Universal3,
    Zz,
    Zzz,
    Heisenberg,
    Chirality,
    Selective,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Bb,
    Bounded,
}

#[derive(Args, Debug)]
pub struct CompileArgs {
    #[command(flatten)]
    pub device: DeviceArgs,
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, value_enum, default_value = "bb")]
    pub mode: ModeArg,
    /// Hamiltonian file of terms to keep (selective target).
    #[arg(long)]
    pub preserve: Option<PathBuf>,
    /// Hamiltonian file of terms to remove (selective target); defaults to
    /// every other device term.
    #[arg(long)]
    pub suppress: Option<PathBuf>,
    /// Output directory for group, verdict and schedule files.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub device: DeviceArgs,
    /// Group JSON as written by `compile`.
    #[arg(long)]
    pub group: PathBuf,
    /// Largest term weight checked.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value = "bb")]
    pub mode: ModeArg,
    /// Verdict output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    /// Comma-separated family names; all families when absent.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<String>,
    #[arg(long, default_value_t = 2)]
    pub chi_min: usize,
    #[arg(long, default_value_t = 64)]
    pub chi_max: usize,
    /// Build every code with χ up to this bound and compare its size with the table.
    #[arg(long, default_value_t = 0)]
    pub check_upto: usize,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Optional SVG plot of L against χ.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Schedule JSON as written by `compile`.
    #[arg(long, required_unless_present = "kitaev")]
    pub schedule: Option<PathBuf>,
    /// Hamiltonian JSON.
    #[arg(long, required_unless_present = "kitaev")]
    pub hamiltonian: Option<PathBuf>,
    /// Comma-separated slot lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [1e-3, 3e-3, 1e-2, 3e-2, 1e-1])]
    pub deltas: Vec<f64>,
    /// Run the folded Kitaev check instead.
    #[arg(long, conflicts_with_all = ["schedule", "hamiltonian"])]
    pub kitaev: bool,
    /// Report output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Verification(_) => EXIT_COUNTEREXAMPLE,
            Error::Infeasible(_) | Error::Unsupported(_) | Error::TooLarge(_) => EXIT_INFEASIBLE,
            _ => EXIT_IO,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

pub type CmdResult = Result<(), Failure>;

fn configure_threads() -> CmdResult {
    if let Ok(v) = std::env::var("TWIRLC_THREADS") {
        let n: usize = v.parse().map_err(|_| Failure::new(EXIT_IO, format!("TWIRLC_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::new(EXIT_IO, e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let run = configure_threads().and_then(|_| match cli.command {
        Command::Color(a) => commands::color(&a),
        Command::Compile(a) => compile::run(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Scaling(a) => commands::scaling(&a),
        Command::Simulate(a) => commands::simulate(&a),
    });
    match run {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("twirlc: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
