//! Command-line front end for secrecy capacity region computations.
//!
//! ```text
//! secrecy-region <region|gaussian|fading|verify> --config <path> --out <path>
//!                [--seed <u64>] [--threads <n>]
//! ```
//!
//! Each run reads one JSON config, writes one CSV (atomically) and a
//! `<out>.manifest.json` sidecar recording the canonical config hash, the
//! effective seed, and the tool version. Exit codes: 0 success, 1 config or
//! usage error, 2 solver convergence error, 3 verification gap exceeded.

mod commands;
mod config;
mod error;
mod output;

use clap::{Args, Parser, Subcommand};
use error::{CliError, Result};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "secrecy-region",
    version,
    about = "Secrecy capacity regions of parallel Gaussian broadcast channels \
             with confidential messages"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace a rate-region boundary over a sweep of weight ratios
    Region(RunArgs),
    /// Sweep the confidential power fraction of a single subchannel
    Gaussian(RunArgs),
    /// Trace ergodic boundaries of a Monte Carlo discretized fading channel
    Fading(RunArgs),
    /// Certify the closed-form solver against the brute-force grid oracle
    Verify(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Path to the JSON run configuration
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path (a .manifest.json sidecar is written next to it)
    #[arg(long)]
    out: PathBuf,
    /// Overrides the config seed for commands that draw randomness
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for parallel tracing (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: &Cli) -> Result<()> {
    let args = match &cli.command {
        Command::Region(a) | Command::Gaussian(a) | Command::Fading(a) | Command::Verify(a) => a,
    };
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot configure {n} threads: {e}")))?;
    }
    match &cli.command {
        Command::Region(a) => commands::cmd_region(&a.config, &a.out, a.seed),
        Command::Gaussian(a) => commands::cmd_gaussian(&a.config, &a.out, a.seed),
        Command::Fading(a) => commands::cmd_fading(&a.config, &a.out, a.seed),
        Command::Verify(a) => commands::cmd_verify(&a.config, &a.out, a.seed),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage error.
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(&cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
