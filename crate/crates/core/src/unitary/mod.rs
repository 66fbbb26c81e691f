//! Dissipation-free dynamics: grid wave functions, eigenbasis superpositions,
//! Crank–Nicolson propagation and the Ehrenfest diagnostic.

mod observables;
mod propagate;
mod superposition;
mod wavefunction;

pub use observables::{
    ehrenfest_residual, expectation_grid, expectation_state, force_expectation, EhrenfestSample, Observables,
};
pub use propagate::{propagate_grid, CrankNicolson, GridSystem};
pub use superposition::{project, project_with, reconstruct, Projection, SuperpositionState, DEFAULT_TRUNCATION_THRESHOLD};
pub use wavefunction::WaveFunction;

use thiserror::Error;

use crate::spectral::SpectralError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitaryError {
    #[error("timestep too large: |dt|·ΔE/ħ = {ratio:.3} (must stay below 0.5; dt = {dt})")]
    TimestepTooLarge { dt: f64, ratio: f64 },
    #[error("basis truncation: residual norm {residual:.3e} exceeds threshold {threshold:.3e}")]
    BasisTruncation { residual: f64, threshold: f64 },
    #[error("grid mismatch between wave function and basis")]
    GridMismatch,
    #[error("insufficient data: need at least 3 snapshots, got {0}")]
    InsufficientData(usize),
    #[error("state not normalised: norm² = {0}")]
    NotNormalized(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
}

pub type Result<T> = std::result::Result<T, UnitaryError>;

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}
