//! Fermi-type radiation-reaction dissipation in an energy eigenbasis.
//!
//! Population moves pairwise from upper to lower levels at the rate
//! `A_jk p_j p_k`; the two-level case reproduces the logistic closed form in
//! [`fermi_closed_form`]. Phases evolve unitarily and are not damped.

mod combined;
mod constants;
mod evolve;
mod fermi;
mod rates;

pub use combined::{evolve_combined, CombinedOptions, CombinedRun, CombinedSystem, NoiseSpec, DEFAULT_GATE_EPSILON};
pub use constants::PhysicalConstants;
pub use evolve::{evolve_dissipative, population_derivative, DissipativeState, Dissipator, MAX_RATE_STEP};
pub use fermi::fermi_closed_form;
pub use rates::{decay_rates, DecayRateMatrix, DIPOLE_ZERO_TOLERANCE};

use thiserror::Error;

use crate::spectral::SpectralError;
use crate::trace::TraceError;
use crate::unitary::UnitaryError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DissipativeError {
    #[error("timestep too large: dt·max(A) = {product:.4} must stay below {limit}")]
    TimestepTooLarge { product: f64, limit: f64 },
    #[error("integrator instability: population {index} reached {value:e} at t = {t}")]
    IntegratorInstability { index: usize, value: f64, t: f64 },
    #[error("probability out of range: {0}")]
    Domain(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid rate matrix: {0}")]
    InvalidRates(String),
    #[error("invalid constant `{name}`: {value}")]
    InvalidConstant { name: &'static str, value: f64 },
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

pub type Result<T> = std::result::Result<T, DissipativeError>;
