use super::{Grid1D, PotentialSpec, Result, SpectralError};

/// Real symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len(), "off-diagonal must be one shorter than diagonal");
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// `y = T x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
        y
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Upper bound on the spectral norm.
    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }
}

/// Finite-difference Hamiltonian `-ħ²/2m d²/dx² + V` with Dirichlet walls.
///
/// Diagonal `ħ²/(m dx²) + V(x_i)`, off-diagonal `-ħ²/(2 m dx²)`.
pub fn build_hamiltonian(
    grid: &Grid1D,
    potential: &PotentialSpec,
    mass: f64,
    hbar: f64,
) -> Result<SymTridiagonal> {
    let v = potential.sample(grid, mass)?;
    hamiltonian_from_samples(grid, &v, mass, hbar)
}

pub(crate) fn hamiltonian_from_samples(
    grid: &Grid1D,
    v: &[f64],
    mass: f64,
    hbar: f64,
) -> Result<SymTridiagonal> {
    check_positive("mass", mass)?;
    check_positive("hbar", hbar)?;
    if grid.n_points() < 3 {
        return Err(SpectralError::GridTooSmall { n_points: grid.n_points() });
    }
    let dx = grid.dx();
    let kinetic = hbar * hbar / (mass * dx * dx);
    let diag = v.iter().map(|vi| kinetic + vi).collect();
    let off = vec![-0.5 * kinetic; grid.n_points() - 1];
    Ok(SymTridiagonal::new(diag, off))
}

pub(crate) fn check_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(SpectralError::InvalidParameter { name, value })
    }
}
