use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::Serialize;

use super::csv::write_trace;
use super::plot::{emit_plot_data, write_plot_data};
use super::{CliError, Result};
use crate::experiments::{run, ExperimentConfig};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Environment variable that replaces the default output directory.
pub const OUT_DIR_ENV: &str = "RR_COLLAPSE_OUT";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub config_echo: ExperimentConfig,
    pub artifact_version: String,
    pub started: String,
    pub finished: String,
    /// File names relative to the output directory.
    pub files: Vec<String>,
    pub warnings: Vec<String>,
}

/// `--out` wins, then the environment variable, then `rr-collapse-out/<experiment>`.
pub fn resolve_out_dir(flag: Option<&Path>, env: Option<&str>, experiment: &str) -> PathBuf {
    match (flag, env) {
        (Some(dir), _) => dir.to_path_buf(),
        (None, Some(dir)) if !dir.is_empty() => PathBuf::from(dir),
        _ => Path::new("rr-collapse-out").join(experiment),
    }
}

/// Run `config` and write `trace.csv`, `summary.json`, `config.json`, plot data
/// and finally `manifest.json` into `dir`.
pub fn run_to_dir(config: &ExperimentConfig, dir: &Path) -> Result<RunManifest> {
    let started = now();
    let output = run(config)?;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;

    let mut files = Vec::new();
    let trace_path = dir.join("trace.csv");
    write_trace(&output.trace, &trace_path)?;
    files.push("trace.csv".to_string());

    write_json(&dir.join("summary.json"), &output.summary)?;
    files.push("summary.json".to_string());
    write_json(&dir.join("config.json"), &output.config)?;
    files.push("config.json".to_string());

    let columns: Vec<&str> = output.plot_columns.iter().map(String::as_str).collect();
    let plot = emit_plot_data(&output.trace, &columns, "plot", config.experiment.as_str())?;
    for path in write_plot_data(&plot, dir)? {
        files.push(path.file_name().expect("file").to_string_lossy().into_owned());
    }

    files.push("manifest.json".to_string());
    let manifest = RunManifest {
        config_echo: output.config.clone(),
        artifact_version: ARTIFACT_VERSION.to_string(),
        started,
        finished: now(),
        files,
        warnings: output.warnings,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    Ok(manifest)
}

fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
