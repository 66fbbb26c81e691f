//! Command-line plumbing: config parsing, trace CSV, plot data and run manifests.

mod args;
mod config;
mod csv;
mod manifest;
mod plot;

pub use args::{execute, Cli, Command};
pub use config::{apply_override, parse_config, parse_config_str};
pub use csv::{format_trace, parse_trace, read_trace, write_trace};
pub use manifest::{resolve_out_dir, run_to_dir, RunManifest, ARTIFACT_VERSION, OUT_DIR_ENV};
pub use plot::{emit_plot_data, write_plot_data, PlotData};

use std::path::PathBuf;

use thiserror::Error;

use crate::experiments::ExperimentError;
use crate::trace::TraceError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Io { path: PathBuf, message: String },
    #[error("{path}:{line}:{column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("usage: {0}")]
    Usage(String),
    #[error("unknown observable `{name}`; available: {available}")]
    UnknownObservable { name: String, available: String },
    #[error("malformed trace at line {line}: {message}")]
    MalformedTrace { line: usize, message: String },
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

impl CliError {
    pub(crate) fn io(path: impl Into<PathBuf>, err: std::io::Error) -> Self {
        CliError::Io { path: path.into(), message: err.to_string() }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
