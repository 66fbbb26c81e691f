//! Stationary 1-D Schrödinger problem on a uniform Dirichlet grid.
//!
//! The Hamiltonian is discretised with the 3-point Laplacian, giving a real
//! symmetric tridiagonal matrix. Its lowest eigenpairs are found with Sturm
//! sequence bisection followed by inverse iteration.

mod basis;
mod eigen;
mod grid;
mod hamiltonian;
mod potential;

pub use basis::{dipole_matrix, solve_eigenproblem, solve_eigenproblem_with, EigenBasis, SolverOptions};
pub use eigen::{count_sign_changes, sturm_count};
pub use grid::Grid1D;
pub use hamiltonian::{build_hamiltonian, SymTridiagonal};
pub use potential::{bond_forces, PotentialSpec};

use thiserror::Error;

/// Default number of retained eigenstates.
pub const DEFAULT_N_STATES: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("grid too small: {n_points} interior points (need at least 3)")]
    GridTooSmall { n_points: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid potential at grid index {index}: value {value}")]
    InvalidPotential { index: usize, value: f64 },
    #[error("invalid potential parameters: {0}")]
    InvalidPotentialSpec(String),
    #[error("invalid parameter `{name}`: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("requested {requested} states but the grid only supports {available}")]
    TooManyStates { requested: usize, available: usize },
    #[error("eigensolver failed to converge after {iterations} iterations (state {state})")]
    SolverFailure { state: usize, iterations: usize },
}

pub type Result<T> = std::result::Result<T, SpectralError>;
