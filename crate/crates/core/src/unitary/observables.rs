use num_complex::Complex64;
use serde::Serialize;

use super::{compensated_sum, reconstruct, GridSystem, Result, SuperpositionState, UnitaryError, WaveFunction};
use crate::spectral::bond_forces;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Observables {
    pub x_mean: f64,
    pub p_mean: f64,
    pub e_mean: f64,
    pub e_variance: f64,
}

/// Expectation values of a grid wave function.
///
/// Momentum uses the central difference `-iħ (Ψ_{i+1} - Ψ_{i-1}) / 2dx`;
/// energy moments use the same tridiagonal `H` that drives propagation.
pub fn expectation_grid(psi: &WaveFunction, system: &GridSystem) -> Observables {
    let dx = psi.grid().dx();
    let amps = psi.amplitudes();
    let n = amps.len();
    let x_mean = psi.mean_position();
    let zero = Complex64::new(0.0, 0.0);
    let p_mean = compensated_sum((0..n).map(|i| {
        let right = if i + 1 < n { amps[i + 1] } else { zero };
        let left = if i > 0 { amps[i - 1] } else { zero };
        // Re[Ψ* (-iħ) ∂Ψ] = ħ Im[Ψ* ∂Ψ]
        (amps[i].conj() * (right - left)).im / (2.0 * dx)
    })) * system.hbar
        * dx;
    let h_psi = system.apply(amps);
    let e_mean = compensated_sum(amps.iter().zip(&h_psi).map(|(a, h)| (a.conj() * h).re)) * dx;
    let e2 = compensated_sum(h_psi.iter().map(|h| h.norm_sqr())) * dx;
    Observables { x_mean, p_mean, e_mean, e_variance: (e2 - e_mean * e_mean).max(0.0) }
}

/// Expectation values of an eigenbasis superposition; energy moments come
/// straight from the populations, `⟨E⟩ = Σ|a_k|² E_k`.
pub fn expectation_state(state: &SuperpositionState) -> Observables {
    let basis = state.basis();
    let pops = state.populations();
    let e_mean: f64 = pops.iter().zip(basis.energies()).map(|(p, e)| p * e).sum();
    let e2: f64 = pops.iter().zip(basis.energies()).map(|(p, e)| p * e * e).sum();
    let psi = reconstruct(state, 0.0);
    let system = GridSystem::from_basis(basis).expect("basis potential is valid");
    let grid_obs = expectation_grid(&psi, &system);
    Observables {
        x_mean: grid_obs.x_mean,
        p_mean: grid_obs.p_mean,
        e_mean,
        e_variance: (e2 - e_mean * e_mean).max(0.0),
    }
}

/// `⟨-dV/dx⟩` in the lattice form `Σ_i f_{i+½} Re(Ψ_i* Ψ_{i+1}) dx` with
/// `f_{i+½} = -(V_{i+1} - V_i)/dx`, which makes the Ehrenfest relation exact
/// for the 3-point Hamiltonian.
pub fn force_expectation(psi: &WaveFunction, potential: &[f64]) -> f64 {
    let dx = psi.grid().dx();
    let f = bond_forces(potential, dx);
    let a = psi.amplitudes();
    compensated_sum(f.iter().enumerate().map(|(i, fi)| fi * (a[i].conj() * a[i + 1]).re)) * dx
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EhrenfestSample {
    /// Snapshot index of the centre point.
    pub index: usize,
    /// `m d²⟨x⟩/dt²` from the second difference.
    pub mass_accel: f64,
    pub force: f64,
    pub residual: f64,
}

/// `|m (⟨x⟩(t+dt) - 2⟨x⟩(t) + ⟨x⟩(t-dt)) / dt² - ⟨-dV/dx⟩(t)|` for every
/// interior snapshot of a uniformly spaced trajectory.
pub fn ehrenfest_residual(snapshots: &[WaveFunction], system: &GridSystem, dt: f64) -> Result<Vec<EhrenfestSample>> {
    if snapshots.len() < 3 {
        return Err(UnitaryError::InsufficientData(snapshots.len()));
    }
    if !(dt.is_finite() && dt != 0.0) {
        return Err(UnitaryError::InvalidInput(format!("dt must be finite and non-zero, got {dt}")));
    }
    let xs: Vec<f64> = snapshots.iter().map(|s| s.mean_position()).collect();
    Ok((1..snapshots.len() - 1)
        .map(|i| {
            let mass_accel = system.mass * (xs[i + 1] - 2.0 * xs[i] + xs[i - 1]) / (dt * dt);
            let force = force_expectation(&snapshots[i], &system.potential);
            EhrenfestSample { index: i, mass_accel, force, residual: (mass_accel - force).abs() }
        })
        .collect())
}
