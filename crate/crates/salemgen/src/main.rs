//! `salemgen`: construct, evaluate, and verify generalized Salem functions
//! from a JSON configuration.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;
mod digits;
mod fmtnum;
mod par;

use commands::{Check, Method};

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn new(code: u8, message: String) -> Self {
        Failure { code, message }
    }

    pub fn verify(message: String) -> Self {
        Failure::new(1, message)
    }

    pub fn config(message: String) -> Self {
        Failure::new(2, message)
    }

    pub fn point(message: String) -> Self {
        Failure::new(3, message)
    }

    pub fn io(message: String) -> Self {
        Failure::new(4, message)
    }

    pub fn integral(message: String) -> Self {
        Failure::new(5, message)
    }

    pub fn distributional(message: String) -> Self {
        Failure::new(6, message)
    }
}

#[derive(Parser)]
#[command(
    name = "salemgen",
    version,
    about = "Generalized Salem functions: evaluation, plotting, integrals, classification, sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the function at a point (a real or a digit literal).
    Eval {
        #[arg(long)]
        config: PathBuf,
        /// A real in [0,1] or `digits:<list>;tail:(zeros|max|periodic:<list>|seeded:<int>)`.
        #[arg(long)]
        point: String,
        #[arg(long, value_enum, default_value = "series")]
        method: Method,
        /// Truncation tolerance (defaults to the config's `tol`).
        #[arg(long)]
        tol: Option<f64>,
        /// Unroll depth for the functional-equation method.
        #[arg(long, default_value_t = 32)]
        depth: u32,
    },
    /// Emit a CSV of function values on a digit-grid.
    Plot {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the closed-form integral, optionally against quadrature.
    Integral {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "none")]
        check: Check,
        /// Allowed gap between the closed form and quadrature.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Largest quadrature cell length.
        #[arg(long, default_value_t = 1e-6)]
        cell_len: f64,
    },
    /// Continuity at a point plus the global classifications.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        point: Option<String>,
    },
    /// Draw samples of the associated random variable.
    Sample {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        n: usize,
        /// Sampling seed (defaults to the config's `seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Also compare the empirical CDF against the model.
        #[arg(long)]
        ks: bool,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        #[arg(long, default_value_t = 0.01)]
        threshold: f64,
    },
    /// Run the invariant battery for the configured function.
    Verify {
        #[arg(long)]
        config: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Eval {
            config,
            point,
            method,
            tol,
            depth,
        } => {
            let loaded = config::load(&config)?;
            commands::eval(&loaded, &point, method, tol, depth)
        }
        Command::Plot {
            config,
            samples,
            out,
        } => {
            let loaded = config::load(&config)?;
            commands::plot(&loaded, samples, &out)
        }
        Command::Integral {
            config,
            check,
            tol,
            cell_len,
        } => {
            let loaded = config::load(&config)?;
            commands::integral_cmd(&loaded, check, tol, cell_len)
        }
        Command::Classify { config, point } => {
            let loaded = config::load(&config)?;
            commands::classify(&loaded, point.as_deref())
        }
        Command::Sample {
            config,
            n,
            seed,
            ks,
            grid,
            threshold,
        } => {
            let loaded = config::load(&config)?;
            commands::sample(&loaded, n, seed, ks, grid, threshold)
        }
        Command::Verify { config } => {
            let loaded = config::load(&config)?;
            commands::verify(&loaded)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("salemgen: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
