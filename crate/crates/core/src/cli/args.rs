use std::path::PathBuf;

use clap::{Parser, Subcommand};

use super::config::parse_config;
use super::manifest::{resolve_out_dir, run_to_dir, ARTIFACT_VERSION, OUT_DIR_ENV};
use super::Result;
use crate::experiments::ExperimentName;

#[derive(Debug, Parser)]
#[command(name = "rr-collapse", about = "Radiation-reaction collapse experiments", disable_version_flag = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a JSON config file.
    Run {
        config: PathBuf,
        /// Override a parameter, `seed` or `sample_interval` (repeatable).
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Output directory (default: $RR_COLLAPSE_OUT, else rr-collapse-out/<experiment>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List experiment names with a one-line description.
    ListExperiments,
    /// Print the artifact version.
    Version,
}

/// Execute a parsed command and return what should go to stdout.
pub fn execute(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Run { config, set, out } => {
            let config = parse_config(config, set)?;
            let env = std::env::var(OUT_DIR_ENV).ok();
            let dir = resolve_out_dir(out.as_deref(), env.as_deref(), config.experiment.as_str());
            let manifest = run_to_dir(&config, &dir)?;
            let mut msg = format!("wrote {} files to {}", manifest.files.len(), dir.display());
            for w in &manifest.warnings {
                msg.push_str(&format!("\nwarning: {w}"));
            }
            Ok(msg)
        }
        Command::ListExperiments => Ok(ExperimentName::ALL
            .iter()
            .map(|n| format!("{:<24}{}", n.as_str(), n.description()))
            .collect::<Vec<_>>()
            .join("\n")),
        Command::Version => Ok(format!("rr-collapse {ARTIFACT_VERSION}")),
    }
}
