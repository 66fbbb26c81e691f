use std::sync::Arc;

use num_complex::Complex64;

use super::{Result, UnitaryError, WaveFunction};
use crate::par::{self, Parallelism};
use crate::spectral::EigenBasis;

/// Projection residual above which a basis is considered too small.
pub const DEFAULT_TRUNCATION_THRESHOLD: f64 = 0.01;

const NORM_TOL: f64 = 1e-9;

/// Complex coefficients `a_k` over an eigenbasis with `Σ|a_k|² = 1`.
#[derive(Debug, Clone)]
pub struct SuperpositionState {
    basis: Arc<EigenBasis>,
    coeffs: Vec<Complex64>,
}

impl SuperpositionState {
    /// Checks length and normalisation (within 1e-9).
    pub fn new(basis: Arc<EigenBasis>, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != basis.n_states() {
            return Err(UnitaryError::InvalidInput(format!(
                "{} coefficients for {} basis states",
                coeffs.len(),
                basis.n_states()
            )));
        }
        let n2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if !n2.is_finite() || (n2 - 1.0).abs() > NORM_TOL {
            return Err(UnitaryError::NotNormalized(n2));
        }
        Ok(Self { basis, coeffs })
    }

    /// Rescales the coefficients to unit norm.
    pub fn normalized(basis: Arc<EigenBasis>, mut coeffs: Vec<Complex64>) -> Result<Self> {
        let n2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(UnitaryError::NotNormalized(n2));
        }
        let s = 1.0 / n2.sqrt();
        coeffs.iter_mut().for_each(|c| *c *= s);
        Self::new(basis, coeffs)
    }

    pub fn eigenstate(basis: Arc<EigenBasis>, k: usize) -> Result<Self> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); basis.n_states()];
        if k >= coeffs.len() {
            return Err(UnitaryError::InvalidInput(format!("state {k} outside basis")));
        }
        coeffs[k] = Complex64::new(1.0, 0.0);
        Self::new(basis, coeffs)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn populations(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Coefficients after free evolution for time `t`: `a_k e^{-i E_k t/ħ}`.
    pub fn evolved(&self, t: f64) -> SuperpositionState {
        let hbar = self.basis.hbar();
        let coeffs = self
            .coeffs
            .iter()
            .zip(self.basis.energies())
            .map(|(a, e)| a * Complex64::from_polar(1.0, -e * t / hbar))
            .collect();
        SuperpositionState { basis: self.basis.clone(), coeffs }
    }
}

/// Result of projecting a grid wave function on an eigenbasis.
#[derive(Debug, Clone)]
pub struct Projection {
    /// Renormalised coefficients.
    pub state: SuperpositionState,
    /// `1 - Σ|a_k|²` before renormalisation.
    pub residual: f64,
}

/// `a_k = Σ_i ψ_k(x_i) Ψ(x_i) dx` with the default truncation threshold.
pub fn project(psi: &WaveFunction, basis: &Arc<EigenBasis>) -> Result<Projection> {
    project_with(psi, basis, DEFAULT_TRUNCATION_THRESHOLD, Parallelism::default())
}

pub fn project_with(
    psi: &WaveFunction,
    basis: &Arc<EigenBasis>,
    threshold: f64,
    mode: Parallelism,
) -> Result<Projection> {
    if psi.grid() != basis.grid() {
        return Err(UnitaryError::GridMismatch);
    }
    let dx = psi.grid().dx();
    let amps = psi.amplitudes();
    let coeffs: Vec<Complex64> = par::map_range(mode, basis.n_states(), |k| {
        let row = basis.state(k);
        let s: Complex64 = row.iter().zip(amps).map(|(p, a)| a * *p).sum();
        s * dx
    });
    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    let residual = 1.0 - captured / psi.norm_sq();
    if residual > threshold {
        return Err(UnitaryError::BasisTruncation { residual, threshold });
    }
    let state = SuperpositionState::normalized(basis.clone(), coeffs)?;
    Ok(Projection { state, residual })
}

/// `Ψ(x_i, t) = Σ_k a_k ψ_k(x_i) e^{-i E_k t/ħ}`, renormalised.
pub fn reconstruct(state: &SuperpositionState, t: f64) -> WaveFunction {
    let evolved = state.evolved(t);
    let basis = state.basis();
    let n = basis.grid().n_points();
    let mut amps = vec![Complex64::new(0.0, 0.0); n];
    for (a, row) in evolved.coeffs.iter().zip(basis.states().rows()) {
        if *a == Complex64::new(0.0, 0.0) {
            continue;
        }
        amps.iter_mut().zip(row).for_each(|(out, p)| *out += a * *p);
    }
    WaveFunction::normalized(*basis.grid(), amps).expect("basis states are finite and non-zero")
}
