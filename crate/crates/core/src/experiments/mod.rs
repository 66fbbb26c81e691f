//! Named, reproducible experiments built from the other modules.
//!
//! Each experiment takes an [`ExperimentConfig`] whose parameter map is fully
//! resolved against the experiment's defaults, and returns a [`Trace`] plus a
//! JSON summary.

mod cascade;
mod classical;
mod config;
mod ehrenfest;
mod fermi;
mod metrics;
mod sweep;
mod two_well;

pub use cascade::{classify_path, run_cascade, CascadePath, CascadeSummary};
pub use classical::{run_preacceleration, run_runaway, PreaccelerationSummary, RunawaySummary};
pub use config::{ExperimentConfig, ExperimentName};
pub use ehrenfest::{run_ehrenfest, EhrenfestSummary};
pub use fermi::{run_fermi_decay, FermiSummary};
pub use metrics::LocalizationMetrics;
pub use sweep::run_sweep;
pub use two_well::{run_two_well, TwoWellSummary};

pub use crate::trace::{Trace, TraceRecord};

use serde::Serialize;
use thiserror::Error;

use crate::classical_rr::ClassicalError;
use crate::dissipative::DissipativeError;
use crate::spectral::SpectralError;
use crate::trace::TraceError;
use crate::unitary::UnitaryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExperimentError {
    #[error("unknown experiment `{name}`; valid names: {valid}")]
    UnknownExperiment { name: String, valid: String },
    #[error("unknown parameter `{name}` for {experiment}; valid parameters: {valid}")]
    UnknownParameter { experiment: &'static str, name: String, valid: String },
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter { name: String, value: f64, reason: String },
    #[error(transparent)]
    Dissipative(#[from] DissipativeError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Everything an experiment produces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub trace: Trace,
    pub summary: serde_json::Value,
    /// Observables worth plotting by default.
    pub plot_columns: Vec<String>,
    pub warnings: Vec<String>,
}

impl ExperimentOutput {
    fn new<S: Serialize>(config: &ExperimentConfig, trace: Trace, summary: &S, plot: &[&str]) -> Self {
        Self {
            config: config.clone(),
            trace,
            summary: serde_json::to_value(summary).expect("summaries contain only plain data"),
            plot_columns: plot.iter().map(|s| s.to_string()).collect(),
            warnings: Vec::new(),
        }
    }
}

/// Dispatch on the experiment name.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    match config.experiment {
        ExperimentName::FermiDecay => run_fermi_decay(config).map(|(o, _)| o),
        ExperimentName::ThreeLevelCascade => run_cascade(config).map(|(o, _)| o),
        ExperimentName::TwoWellLocalization => run_two_well(config).map(|(o, _)| o),
        ExperimentName::EhrenfestCheck => run_ehrenfest(config).map(|(o, _)| o),
        ExperimentName::RunawayDemo => run_runaway(config).map(|(o, _)| o),
        ExperimentName::PreaccelerationDemo => run_preacceleration(config).map(|(o, _)| o),
    }
}

/// Number of fixed steps covering `[0, t_max]`.
fn step_count(t_max: f64, dt: f64) -> usize {
    (t_max / dt).round().max(1.0) as usize
}

/// Least-squares slope of `y` against `x`.
fn slope(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len() as f64;
    if x.len() < 2 {
        return None;
    }
    let xm = x.iter().sum::<f64>() / n;
    let ym = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let sxx: f64 = x.iter().map(|a| (a - xm) * (a - xm)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
