//! `spintransfer`: command-line front end for spin-chain transfer analysis.
//!
//! Exit codes: 0 success (or certification pass), 2 certification fail,
//! 3 validation error, 4 I/O error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "spintransfer",
    version,
    about = "Spin-chain state transfer: spectra, certificates, fidelity curves, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues with parity labels; engineered models also get
    /// closed-form values and residuals.
    Spectrum(CommonArgs),
    /// Certify the spectrum-parity matching condition and report the
    /// transfer time. Exits 2 when the chain fails certification.
    CheckSpmc(CommonArgs),
    /// Evolve a site excitation to a fixed time and dump the amplitudes.
    Evolve(CommonArgs),
    /// Fidelity curve of transfer toward the mirror state, with the
    /// harmonic-limit reference for parabolic models.
    Transfer(CommonArgs),
    /// Scan field factors for the best peak transfer fidelity.
    Sweep(CommonArgs),
}

#[derive(Args)]
pub struct CommonArgs {
    /// Run configuration file (line-oriented key = value sections).
    #[arg(long)]
    config: PathBuf,
    /// Output path; stdout when absent. Files are written whole-or-not-at-all.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or text.
    #[arg(long)]
    format: Option<output::Format>,
    /// Commensurability and parity tolerance (default 1e-9).
    #[arg(long)]
    tol: Option<f64>,
    /// Largest admissible spectral level integer (default 1000).
    #[arg(long = "max-integer")]
    max_integer: Option<u64>,
    /// Time horizon override for evolve/transfer windows.
    #[arg(long)]
    tmax: Option<f64>,
    /// Margin override for distance-based parabolic models.
    #[arg(long)]
    margin: Option<usize>,
}

/// Failures carry the exit code distinction: bad inputs vs filesystem.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Io(String),
}

impl From<spintransfer::Error> for Failure {
    fn from(e: spintransfer::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(3);
        }
    };

    let (args, run) = match &cli.command {
        Command::Spectrum(a) => (a, commands::cmd_spectrum as commands::CmdFn),
        Command::CheckSpmc(a) => (a, commands::cmd_check_spmc as commands::CmdFn),
        Command::Evolve(a) => (a, commands::cmd_evolve as commands::CmdFn),
        Command::Transfer(a) => (a, commands::cmd_transfer as commands::CmdFn),
        Command::Sweep(a) => (a, commands::cmd_sweep as commands::CmdFn),
    };

    match run(args) {
        Ok(code) => std::process::exit(code),
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(4);
        }
    }
}
