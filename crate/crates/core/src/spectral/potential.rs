use serde::{Deserialize, Serialize};

use super::{Grid1D, Result, SpectralError};

/// External potential `V(x)` in simulation units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PotentialSpec {
    /// `V = m ω² x² / 2`, centred at the origin.
    Harmonic { omega: f64 },
    /// `V = 0` between the Dirichlet walls.
    Box,
    /// Two Gaussian wells, `V = -depth_a g(x - center_a) - depth_b g(x - center_b)`
    /// with `g(u) = exp(-u² / 2 width²)`.
    DoubleWell {
        center_a: f64,
        center_b: f64,
        depth_a: f64,
        depth_b: f64,
        width: f64,
    },
    /// One value per interior grid point.
    Tabulated { values: Vec<f64> },
}

impl PotentialSpec {
    pub fn double_well(center_a: f64, center_b: f64, depth_a: f64, depth_b: f64, width: f64) -> Self {
        PotentialSpec::DoubleWell { center_a, center_b, depth_a, depth_b, width }
    }

    /// Check parameters and compatibility with `grid`.
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        match self {
            PotentialSpec::Harmonic { omega } => {
                if !(omega.is_finite() && *omega > 0.0) {
                    return Err(SpectralError::InvalidPotentialSpec(format!(
                        "harmonic omega must be positive, got {omega}"
                    )));
                }
            }
            PotentialSpec::Box => {}
            PotentialSpec::DoubleWell { center_a, center_b, depth_a, depth_b, width } => {
                let all = [*center_a, *center_b, *depth_a, *depth_b, *width];
                if all.iter().any(|v| !v.is_finite()) {
                    return Err(SpectralError::InvalidPotentialSpec(
                        "double-well parameters must be finite".into(),
                    ));
                }
                if *width <= 0.0 {
                    return Err(SpectralError::InvalidPotentialSpec(format!(
                        "double-well width must be positive, got {width}"
                    )));
                }
                if *depth_a < 0.0 || *depth_b < 0.0 {
                    return Err(SpectralError::InvalidPotentialSpec(
                        "double-well depths must be non-negative".into(),
                    ));
                }
                if center_a >= center_b {
                    return Err(SpectralError::InvalidPotentialSpec(format!(
                        "need center_a < center_b, got {center_a} >= {center_b}"
                    )));
                }
            }
            PotentialSpec::Tabulated { values } => {
                if values.len() != grid.n_points() {
                    return Err(SpectralError::InvalidPotentialSpec(format!(
                        "tabulated potential has {} values for {} grid points",
                        values.len(),
                        grid.n_points()
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sample `V` on the interior grid points. Non-finite samples are rejected.
    pub fn sample(&self, grid: &Grid1D, mass: f64) -> Result<Vec<f64>> {
        self.validate(grid)?;
        let values: Vec<f64> = match self {
            PotentialSpec::Tabulated { values } => values.clone(),
            _ => grid.points().into_iter().map(|x| self.value_at(x, mass)).collect(),
        };
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(SpectralError::InvalidPotential { index, value });
        }
        Ok(values)
    }

    /// Analytic value at `x`; tabulated potentials return NaN off-grid.
    pub fn value_at(&self, x: f64, mass: f64) -> f64 {
        match self {
            PotentialSpec::Harmonic { omega } => 0.5 * mass * omega * omega * x * x,
            PotentialSpec::Box => 0.0,
            PotentialSpec::DoubleWell { center_a, center_b, depth_a, depth_b, width } => {
                let g = |c: f64| {
                    let u = (x - c) / width;
                    (-0.5 * u * u).exp()
                };
                -depth_a * g(*center_a) - depth_b * g(*center_b)
            }
            PotentialSpec::Tabulated { .. } => f64::NAN,
        }
    }

    /// Midpoint between the two wells, if this is a double well.
    pub fn midpoint(&self) -> Option<f64> {
        match self {
            PotentialSpec::DoubleWell { center_a, center_b, .. } => Some(0.5 * (center_a + center_b)),
            _ => None,
        }
    }
}

/// Lattice force on each bond `(i, i+1)`: `-(V[i+1] - V[i]) / dx`.
///
/// This is the force that appears in the exact Ehrenfest relation of the
/// 3-point Hamiltonian; for quadratic `V` it equals `-V'` at the bond midpoint.
pub fn bond_forces(potential: &[f64], dx: f64) -> Vec<f64> {
    potential.windows(2).map(|w| -(w[1] - w[0]) / dx).collect()
}
