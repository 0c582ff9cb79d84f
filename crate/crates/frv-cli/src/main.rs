//! `frv`: run convergence studies, uncorrelatedness checks, and
//! decomposition diagnostics for fuzzy random sequences from a config file.
//!
//! Exit codes: 0 success (study converged / no flags / bound holds),
//! 1 usage or config error, 2 study did not converge or flags were raised,
//! 3 decomposition bound violation (never expected).

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "frv", version, about = "Fuzzy random variable simulator")]
struct Cli {
    /// Experiment configuration file (required).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for CSV and plot output.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    out: PathBuf,

    /// Suppress progress output; files and exit codes are unaffected.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the convergence study and write CSV plus plot data.
    Study,
    /// Run the uncorrelatedness report and variance-condition sweep.
    CheckModel,
    /// Replay one trial's three-term distance decomposition.
    Diagnose {
        /// Members in the trial mean; defaults to the last schedule entry.
        #[arg(long)]
        n: Option<usize>,
        /// Sample-point seed; defaults to the study master seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(run(cli))
}

fn run(cli: Cli) -> u8 {
    let Some(config_path) = cli.config else {
        eprintln!("error: --config <PATH> is required");
        return 1;
    };
    let text = match std::fs::read_to_string(&config_path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config_path.display());
            return 1;
        }
    };
    let config = match config::ExperimentConfig::parse(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}: {e}", config_path.display());
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Study => commands::study(&config, &cli.out, cli.quiet),
        Command::CheckModel => commands::check_model(&config, &cli.out, cli.quiet),
        Command::Diagnose { n, seed } => commands::diagnose(&config, n, seed, cli.quiet),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}: {e}", config_path.display());
            1
        }
    }
}
