//! `densetsp`: instance generation, tour construction and seeded experiments
//! for the dense-cities TSP model.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 usage or parameter error,
//! 3 capability limit (exact solver cap, exact-only policy), 4 invariant
//! violation (the message names the trial seed).

mod commands;
mod manifest;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dense_tsp::Error;

#[derive(Parser, Debug)]
#[command(name = "densetsp", version, about = "Random Euclidean TSP across dense cities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample an instance and write it as JSON.
    Generate(GenerateArgs),
    /// Build a tour for an instance file.
    Tour(TourArgs),
    /// Run a study described by a key=value config file.
    Experiment(ExperimentArgs),
    /// Binomial versus Poisson pmf sweep over the typical-count window.
    Pmf(PmfArgs),
    /// Recompute the locked empirical constants.
    Calibrate(CalibrateArgs),
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// City side; omit together with --s for an instance on the whole unit square.
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long = "N", default_value_t = 1)]
    pub n_cities: usize,
    /// Node count (binomial) or mean node count (poisson).
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = ProcessArg::Binomial)]
    pub process: ProcessArg,
    /// `uniform` or `checker:<ratio>`.
    #[arg(long, default_value = "uniform")]
    pub density: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcessArg {
    Binomial,
    Poisson,
}

#[derive(Args, Debug)]
pub struct TourArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Fixed strip width for `strips` (default: automatic).
    #[arg(long)]
    pub strip_width: Option<f64>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Strips,
    Exact,
    Merge,
}

#[derive(Args, Debug)]
pub struct ExperimentArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Also write an SVG plot of the main ratio with 3σ bands.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Args, Debug)]
pub struct PmfArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long = "N")]
    pub n_cities: u64,
    /// Cell probability; defaults to 1/N.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub eta1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eta2: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct CalibrateArgs {
    #[arg(long, default_value_t = dense_tsp::experiments::calibration::CALIBRATION_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Io(_) => 1,
        Error::TooLarge { .. } | Error::Policy(_) => 3,
        Error::Invariant { .. } => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().collect();
    let result = match cli.command {
        Command::Generate(a) => commands::generate(&a, &argv),
        Command::Tour(a) => commands::tour(&a, &argv),
        Command::Experiment(a) => commands::experiment(&a, &argv),
        Command::Pmf(a) => commands::pmf(&a, &argv),
        Command::Calibrate(a) => commands::calibrate(&a, &argv),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("densetsp: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
