//! `gmk`: verification, meshing, solving and refinement studies from a JSON
//! configuration.
//!
//! Exit codes: 0 success, 1 a check failed (reports are still written),
//! 2 usage or configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "gmk", version, about = "Symmetric positive system for the Guderley-Morawetz-Keldysh problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// JSON configuration file; defaults apply when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Number of boundary samples (overrides the configuration).
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Seed for interior sampling (overrides the configuration).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Check the hypotheses: positivity, coefficient bound, characteristics, admissibility.
    Verify,
    /// Write the mesh and its boundary samples.
    Mesh,
    /// Solve with the configured source and homogeneous boundary data.
    Solve,
    /// Run the manufactured-solution refinement study.
    Convergence,
}

pub enum Status {
    Pass,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };

    let mut config = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(2);
            }
        },
        None => RunConfig::default(),
    };
    if let Some(n) = cli.samples {
        config.sampling.boundary_samples = n;
    }
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    let resolved = match config.resolve() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&cli.out) {
        eprintln!("cannot create {}: {e}", cli.out.display());
        return ExitCode::from(2);
    }

    let result = match cli.command {
        Command::Verify => commands::verify(&config, &resolved, &cli.out),
        Command::Mesh => commands::mesh(&config, &resolved, &cli.out),
        Command::Solve => commands::solve(&config, &resolved, &cli.out),
        Command::Convergence => commands::convergence(&config, &resolved, &cli.out),
    };
    match result {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
