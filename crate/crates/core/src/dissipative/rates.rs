use ndarray::Array2;
use super::{DissipativeError, PhysicalConstants, Result};
use crate::spectral::EigenBasis;

/// Pairwise decay rates `A[j][k]` from level `j` down to level `k`.
///
/// Also carries the level energies and ħ so the owner can advance phases and
/// rebuild rates for jittered energies.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayRateMatrix {
    rates: Array2<f64>,
    energies: Vec<f64>,
    hbar: f64,
}

impl DecayRateMatrix {
    /// `A_jk = C (E_j - E_k)³ / ħ³ · d_jk²` for `E_j > E_k`, zero otherwise.
    pub fn from_dipoles(energies: &[f64], d: &Array2<f64>, constants: &PhysicalConstants) -> Result<Self> {
        constants.validate()?;
        let n = energies.len();
        if d.dim() != (n, n) {
            return Err(DissipativeError::DimensionMismatch(format!(
                "{n} energies but dipole matrix is {:?}",
                d.dim()
            )));
        }
        if let Some(e) = energies.iter().find(|e| !e.is_finite()) {
            return Err(DissipativeError::InvalidRates(format!("non-finite energy {e}")));
        }
        let pref = constants.rate_prefactor();
        let cutoff = dipole_cutoff(d);
        let rates = Array2::from_shape_fn((n, n), |(j, k)| {
            let djk = if d[[j, k]].abs() <= cutoff { 0.0 } else { d[[j, k]] };
            rate_for_gap(pref, energies[j] - energies[k], djk, constants.hbar)
        });
        Ok(Self { rates, energies: energies.to_vec(), hbar: constants.hbar })
    }

    /// Explicit rates, checked against the matrix invariants.
    pub fn from_rates(rates: Array2<f64>, energies: Vec<f64>, hbar: f64) -> Result<Self> {
        let n = energies.len();
        if rates.dim() != (n, n) {
            return Err(DissipativeError::DimensionMismatch(format!(
                "{n} energies but rate matrix is {:?}",
                rates.dim()
            )));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(DissipativeError::InvalidConstant { name: "hbar", value: hbar });
        }
        for ((j, k), &a) in rates.indexed_iter() {
            if !(a.is_finite() && a >= 0.0) {
                return Err(DissipativeError::InvalidRates(format!("A[{j}][{k}] = {a}")));
            }
            if a > 0.0 && energies[j] <= energies[k] {
                return Err(DissipativeError::InvalidRates(format!(
                    "A[{j}][{k}] = {a} but E_{j} = {} is not above E_{k} = {}",
                    energies[j], energies[k]
                )));
            }
        }
        Ok(Self { rates, energies, hbar })
    }

    /// Two levels with energies `(0, gap)` and `A[1][0] = a`.
    pub fn two_level(a: f64) -> Result<Self> {
        let mut rates = Array2::zeros((2, 2));
        rates[[1, 0]] = a;
        Self::from_rates(rates, vec![0.0, 1.0], 1.0)
    }

    pub fn rates(&self) -> &Array2<f64> {
        &self.rates
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn n_levels(&self) -> usize {
        self.energies.len()
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.rates[[j, k]]
    }

    pub fn max_rate(&self) -> f64 {
        self.rates.iter().copied().fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { rates: &self.rates * factor, energies: self.energies.clone(), hbar: self.hbar }
    }

    /// Nonzero `(upper, lower, A)` triples in row-major order.
    pub fn channels(&self) -> Vec<(usize, usize, f64)> {
        self.rates
            .indexed_iter()
            .filter(|(_, &a)| a > 0.0)
            .map(|((j, k), &a)| (j, k, a))
            .collect()
    }
}

/// Relative size below which a dipole element counts as symmetry-forbidden.
///
/// Parity-forbidden elements come out of the quadrature at round-off level
/// rather than exactly zero; anything this far below the largest element is
/// treated as a selection-rule zero.
pub const DIPOLE_ZERO_TOLERANCE: f64 = 1e-12;

pub(crate) fn dipole_cutoff(d: &Array2<f64>) -> f64 {
    DIPOLE_ZERO_TOLERANCE * d.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

pub(crate) fn rate_for_gap(pref: f64, gap: f64, d: f64, hbar: f64) -> f64 {
    if gap > 0.0 {
        let w = gap / hbar;
        pref * w * w * w * d * d
    } else {
        0.0
    }
}

/// Rate matrix for `basis` with dipole matrix `d`.
pub fn decay_rates(basis: &EigenBasis, d: &Array2<f64>, constants: &PhysicalConstants) -> Result<DecayRateMatrix> {
    if (constants.hbar - basis.hbar()).abs() > 1e-12 * basis.hbar() {
        return Err(DissipativeError::InvalidRates(format!(
            "constants use hbar = {} but the basis was built with hbar = {}",
            constants.hbar,
            basis.hbar()
        )));
    }
    DecayRateMatrix::from_dipoles(basis.energies(), d, constants)
}
