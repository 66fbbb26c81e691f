use num_complex::Complex64;

use super::{compensated_sum, Result, UnitaryError};
use crate::spectral::Grid1D;

/// Complex amplitudes on the interior points of a grid, normalised so that
/// `Σ|Ψ(x_i)|² dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: Grid1D,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// Wraps amplitudes as given; rejects wrong lengths and non-finite values.
    pub fn new(grid: Grid1D, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.n_points() {
            return Err(UnitaryError::InvalidInput(format!(
                "{} amplitudes for {} grid points",
                amplitudes.len(),
                grid.n_points()
            )));
        }
        if amplitudes.iter().any(|a| !(a.re.is_finite() && a.im.is_finite())) {
            return Err(UnitaryError::InvalidInput("non-finite amplitude".into()));
        }
        Ok(Self { grid, amplitudes })
    }

    /// Like [`WaveFunction::new`] but rescales to unit norm.
    pub fn normalized(grid: Grid1D, amplitudes: Vec<Complex64>) -> Result<Self> {
        let mut psi = Self::new(grid, amplitudes)?;
        let n2 = psi.norm_sq();
        if n2 <= 0.0 {
            return Err(UnitaryError::InvalidInput("zero wave function".into()));
        }
        let s = 1.0 / n2.sqrt();
        psi.amplitudes.iter_mut().for_each(|a| *a *= s);
        Ok(psi)
    }

    pub fn from_real(grid: Grid1D, values: &[f64]) -> Result<Self> {
        Self::normalized(grid, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Gaussian packet `exp(-(x-x0)²/(4σ²) + i k0 x)`; `σ` is the standard
    /// deviation of `|Ψ|²`.
    pub fn gaussian(grid: Grid1D, center: f64, sigma: f64, k0: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(UnitaryError::InvalidInput(format!("packet width must be positive, got {sigma}")));
        }
        let amps = grid
            .points()
            .into_iter()
            .map(|x| {
                let u = (x - center) / sigma;
                Complex64::from_polar((-0.25 * u * u).exp(), k0 * x)
            })
            .collect();
        Self::normalized(grid, amps)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sq(&self) -> f64 {
        compensated_sum(self.amplitudes.iter().map(|a| a.norm_sqr())) * self.grid.dx()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &WaveFunction) -> Complex64 {
        let s: Complex64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum();
        s * self.grid.dx()
    }

    /// `|<self|other>|`
    pub fn fidelity(&self, other: &WaveFunction) -> f64 {
        self.inner(other).norm()
    }

    pub fn density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability mass at `x < split`.
    pub fn probability_below(&self, split: f64) -> f64 {
        let dx = self.grid.dx();
        compensated_sum(
            self.amplitudes
                .iter()
                .enumerate()
                .filter(|(i, _)| self.grid.x(*i) < split)
                .map(|(_, a)| a.norm_sqr()),
        ) * dx
    }

    /// `Σ|Ψ|² x dx`
    pub fn mean_position(&self) -> f64 {
        let g = self.grid;
        compensated_sum(self.amplitudes.iter().enumerate().map(|(i, a)| a.norm_sqr() * g.x(i))) * g.dx()
    }
}
