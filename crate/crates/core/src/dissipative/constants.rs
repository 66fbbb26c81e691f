use serde::{Deserialize, Serialize};

use super::{DissipativeError, Result};

/// Charge, vacuum permittivity, light speed, ħ and particle mass in simulation units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    pub e: f64,
    pub eps0: f64,
    pub c: f64,
    pub hbar: f64,
    pub mass: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { e: 1.0, eps0: 1.0, c: 1.0, hbar: 1.0, mass: 1.0 }
    }
}

impl PhysicalConstants {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in
            [("e", self.e), ("eps0", self.eps0), ("c", self.c), ("hbar", self.hbar), ("mass", self.mass)]
        {
            if !(value.is_finite() && value > 0.0) {
                return Err(DissipativeError::InvalidConstant { name, value });
            }
        }
        Ok(())
    }

    /// `e² / (3π ε₀ c³ ħ)`.
    pub fn rate_prefactor(&self) -> f64 {
        self.e * self.e / (3.0 * std::f64::consts::PI * self.eps0 * self.c.powi(3) * self.hbar)
    }
}
