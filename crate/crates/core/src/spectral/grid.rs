use serde::{Deserialize, Serialize};

use super::{Result, SpectralError};

/// Uniform grid of interior points; the two Dirichlet endpoints are excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if n_points < 3 {
            return Err(SpectralError::GridTooSmall { n_points });
        }
        if !(x_min.is_finite() && x_max.is_finite()) || x_max <= x_min {
            return Err(SpectralError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Spacing `(x_max - x_min) / (n_points + 1)`.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points + 1) as f64
    }

    /// Position of interior point `i`.
    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i + 1) as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        let dx = self.dx();
        (0..self.n_points).map(|i| self.x_min + (i + 1) as f64 * dx).collect()
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }
}
