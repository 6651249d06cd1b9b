use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use pls_deception::experiments::{self, ExperimentConfig, ExperimentError, ExperimentId};

#[derive(Parser)]
#[command(version, about = "Key-length and power allocation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV files and manifest.
    Run {
        #[arg(long)]
        experiment: ExperimentId,
        /// JSON config; defaults apply when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Dotted override such as `scenario.z_eve_db=-5`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Check a config file without running it.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the theorem checks.
    Theorems {
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    Config(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<ExperimentError> for Failure {
    fn from(e: ExperimentError) -> Self {
        if e.is_config() {
            Failure::Config(e.into())
        } else {
            Failure::Runtime(e.into())
        }
    }
}

fn load(config: Option<&PathBuf>) -> Result<ExperimentConfig, Failure> {
    match config {
        Some(path) => ExperimentConfig::from_path(path)
            .with_context(|| format!("loading {}", path.display()))
            .map_err(Failure::Config),
        None => Ok(ExperimentConfig::default()),
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Run {
            experiment,
            config,
            out,
            overrides,
        } => {
            let mut cfg = load(config.as_ref())?.with_overrides(&overrides)?;
            cfg.experiment_id = experiment;
            let manifest = experiments::run(&cfg, &out)?;
            for f in &manifest.files {
                println!("{} ({} rows)", out.join(&f.name).display(), f.rows);
            }
        }
        Command::Validate { config } => {
            let cfg = load(Some(&config))?;
            let issues = cfg.validate();
            if !issues.is_empty() {
                for issue in &issues {
                    eprintln!("error: {issue}");
                }
                return Err(Failure::Config(anyhow::anyhow!("{} problem(s) in {}", issues.len(), config.display())));
            }
            println!("{}: ok ({})", config.display(), cfg.experiment_id);
        }
        Command::Theorems { out } => {
            let cfg = ExperimentConfig::for_experiment(ExperimentId::Theorems);
            experiments::run(&cfg, &out)?;
            let text = std::fs::read_to_string(out.join("theorems.csv"))
                .context("reading theorems.csv")
                .map_err(Failure::Runtime)?;
            print!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
