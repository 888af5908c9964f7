use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use evorl_cli::config::parse_config;
use evorl_cli::oracles::run_all;
use evorl_cli::output::execute_run;
use evorl_cli::{CliError, EXIT_RUNTIME};

/// Seeded evolutionary and reinforcement-learning experiments with CSV
/// output.
#[derive(Parser)]
#[command(name = "evorl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write trajectories, summary, and manifest.
    Run {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        /// Override the config's root seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the config's replicate count.
        #[arg(long)]
        replicates: Option<u32>,
    },
    /// Parse and validate a config file without running it.
    Validate {
        /// JSON config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the built-in oracle checks and report each result.
    Oracles,
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run {
            config,
            out,
            seed,
            replicates,
        } => {
            let mut cfg = parse_config(&config)?;
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(replicates) = replicates {
                cfg.replicates = replicates;
                cfg.validate().map_err(|e| CliError::Config {
                    path: config.display().to_string(),
                    message: e.to_string(),
                })?;
            }
            let paths = execute_run(&cfg, &out)?;
            println!("wrote {}", paths.trajectories.display());
            println!("wrote {}", paths.summary.display());
            println!("wrote {}", paths.manifest.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let cfg = parse_config(&config)?;
            println!(
                "ok: {} scenario, {} replicates, seed {}",
                cfg.scenario.as_str(),
                cfg.replicates,
                cfg.seed
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracles => {
            let reports = run_all();
            let mut all_passed = true;
            for r in &reports {
                let verdict = if r.passed { "PASS" } else { "FAIL" };
                println!("{verdict} {}: {}", r.name, r.detail);
                all_passed &= r.passed;
            }
            if all_passed {
                println!("all {} oracle checks passed", reports.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(EXIT_RUNTIME as u8))
            }
        }
    }
}
