// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ert_core::cli::{load_config, run, sweep, Overrides, MEMORY_CAP_ENV};
use ert_core::Error;

/// Open-quantum-system dynamics with ensemble rank truncation.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads for sweeps and trajectory batches.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override the config's output directory.
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,
    /// Override the random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation described by a TOML config.
    Run { config: PathBuf },
    /// Run the accuracy-versus-runtime sweep in a config's [sweep] table.
    Sweep { config: PathBuf },
}

fn execute(cli: Cli) -> Result<(), Error> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Error::Config("--workers must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    }
    let overrides = Overrides {
        output_dir: cli.output_dir,
        seed: cli.seed,
        memory_cap_bytes: None,
    }
    .with_env()?;
    match cli.command {
        Command::Run { config } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg);
            let series = run(&cfg)?;
            println!(
                "{} samples written to {} ({:.3}s)",
                series.len(),
                cfg.output_dir.display(),
                series.meta.timings.total
            );
        }
        Command::Sweep { config } => {
            let mut cfg = load_config(&config)?;
            overrides.apply(&mut cfg);
            let result = sweep(&cfg)?;
            println!(
                "{} sweep rows written to {}",
                result.rows.len(),
                cfg.output_dir.join("sweep.csv").display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if matches!(e, Error::ResourceCap { .. }) {
                eprintln!("hint: raise memory_cap_bytes or set {MEMORY_CAP_ENV}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
