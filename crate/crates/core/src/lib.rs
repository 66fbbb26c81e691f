//! Radiation-reaction-augmented quantum dynamics.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: finite-difference 1-D Hamiltonians and their lowest eigenpairs.
//! * [`unitary`]: Crank–Nicolson propagation, eigenbasis projection and Ehrenfest diagnostics.
//! * [`dissipative`]: Fermi-type population decay driven by dipole decay rates.
//! * [`classical_rr`]: the Abraham–Lorentz equation, runaway and preacceleration.
//! * [`experiments`]: named, reproducible runs composing the above and emitting traces.
//! * [`cli`]: config parsing, CSV traces, plot data and run manifests.
//!
//! Batch workloads (eigenpair refinement, parameter sweeps) run on rayon when the
//! `parallel` feature is enabled and fall back to plain iterators otherwise; see [`par`].

pub mod classical_rr;
pub mod cli;
pub mod dissipative;
pub mod experiments;
pub mod par;
pub mod spectral;
pub mod trace;
pub mod unitary;

pub use dissipative::{DecayRateMatrix, DissipativeState, PhysicalConstants};
pub use experiments::{ExperimentConfig, ExperimentName};
pub use trace::{Trace, TraceRecord};
pub use par::Parallelism;
pub use spectral::{EigenBasis, Grid1D, PotentialSpec};
pub use unitary::{SuperpositionState, WaveFunction};
