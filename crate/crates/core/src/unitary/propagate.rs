use num_complex::Complex64;

use super::{expectation_grid, Result, UnitaryError, WaveFunction};
use crate::spectral::{build_hamiltonian, EigenBasis, Grid1D, PotentialSpec, SymTridiagonal};

/// Largest allowed `|dt| ΔE / ħ`, with ΔE the spread of significantly
/// populated energies.
const PHASE_RESOLUTION: f64 = 0.5;
/// ΔE is taken as this many standard deviations of the energy distribution.
const ENERGY_SPREAD_SIGMAS: f64 = 6.0;

/// Discretised Hamiltonian together with the data needed for observables.
#[derive(Debug, Clone)]
pub struct GridSystem {
    pub grid: Grid1D,
    pub potential: Vec<f64>,
    pub hamiltonian: SymTridiagonal,
    pub mass: f64,
    pub hbar: f64,
}

impl GridSystem {
    pub fn new(grid: Grid1D, potential: &PotentialSpec, mass: f64, hbar: f64) -> Result<Self> {
        let samples = potential.sample(&grid, mass)?;
        let hamiltonian = build_hamiltonian(&grid, potential, mass, hbar)?;
        Ok(Self { grid, potential: samples, hamiltonian, mass, hbar })
    }

    /// The system whose eigenstates make up `basis`.
    pub fn from_basis(basis: &EigenBasis) -> Result<Self> {
        let pot = PotentialSpec::Tabulated { values: basis.potential().to_vec() };
        Self::new(*basis.grid(), &pot, basis.mass(), basis.hbar())
    }

    /// `H Ψ` on the grid.
    pub fn apply(&self, psi: &[Complex64]) -> Vec<Complex64> {
        let h = &self.hamiltonian;
        let n = psi.len();
        (0..n)
            .map(|i| {
                let mut s = psi[i] * h.diag[i];
                if i > 0 {
                    s += psi[i - 1] * h.off[i - 1];
                }
                if i + 1 < n {
                    s += psi[i + 1] * h.off[i];
                }
                s
            })
            .collect()
    }
}

/// Crank–Nicolson stepper `(1 + iH'dt/2ħ) Ψ' = (1 - iH'dt/2ħ) Ψ` with
/// `H' = H - E_ref`.
///
/// The reference energy only changes the global phase, but the scheme's phase
/// error grows like `((E - E_ref) dt / 2ħ)²`, so centring it on the state's
/// mean energy keeps level spacings accurate. The left-hand matrix has
/// positive-definite Hermitian part, so the Thomas algorithm without pivoting
/// is stable; its factorisation is computed once.
#[derive(Debug, Clone)]
pub struct CrankNicolson {
    system: GridSystem,
    dt: f64,
    coupling: Complex64,
    rhs_diag: Vec<Complex64>,
    c_prime: Vec<Complex64>,
    inv_denom: Vec<Complex64>,
}

impl CrankNicolson {
    /// `dt` may be negative (backward propagation) but not zero.
    pub fn new(system: GridSystem, dt: f64) -> Result<Self> {
        Self::with_reference_energy(system, dt, 0.0)
    }

    /// Uses `⟨H⟩` of `psi` as the reference energy.
    pub fn for_state(system: GridSystem, dt: f64, psi: &WaveFunction) -> Result<Self> {
        let e_ref = expectation_grid(psi, &system).e_mean;
        Self::with_reference_energy(system, dt, e_ref)
    }

    pub fn with_reference_energy(system: GridSystem, dt: f64, e_ref: f64) -> Result<Self> {
        if !(dt.is_finite() && dt != 0.0) {
            return Err(UnitaryError::InvalidInput(format!("dt must be finite and non-zero, got {dt}")));
        }
        let tau = Complex64::new(0.0, dt / (2.0 * system.hbar));
        let h = &system.hamiltonian;
        let n = h.len();
        // all off-diagonals are equal for the 3-point Laplacian
        let coupling = tau * h.off[0];
        let lhs_diag: Vec<Complex64> = h.diag.iter().map(|&d| 1.0 + tau * (d - e_ref)).collect();
        let rhs_diag = h.diag.iter().map(|&d| 1.0 - tau * (d - e_ref)).collect();
        let mut c_prime = vec![Complex64::new(0.0, 0.0); n];
        let mut inv_denom = vec![Complex64::new(0.0, 0.0); n];
        let mut prev = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let denom = lhs_diag[i] - coupling * prev;
            inv_denom[i] = 1.0 / denom;
            prev = coupling * inv_denom[i];
            c_prime[i] = prev;
        }
        Ok(Self { system, dt, coupling, rhs_diag, c_prime, inv_denom })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn system(&self) -> &GridSystem {
        &self.system
    }

    /// Rejects a timestep that does not resolve the state's energy spread.
    pub fn check_timestep(&self, psi: &WaveFunction) -> Result<()> {
        let obs = expectation_grid(psi, &self.system);
        let spread = ENERGY_SPREAD_SIGMAS * obs.e_variance.max(0.0).sqrt();
        let ratio = self.dt.abs() * spread / self.system.hbar;
        if ratio >= PHASE_RESOLUTION {
            return Err(UnitaryError::TimestepTooLarge { dt: self.dt, ratio });
        }
        Ok(())
    }

    pub fn step(&self, psi: &mut WaveFunction) {
        let n = self.rhs_diag.len();
        let off = -self.coupling;
        let amps = psi.amplitudes_mut();
        // rhs = (1 - iHdt/2ħ) Ψ, then forward sweep in place
        let mut prev_in = Complex64::new(0.0, 0.0);
        let mut prev_d = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let cur = amps[i];
            let mut r = self.rhs_diag[i] * cur + off * prev_in;
            if i + 1 < n {
                r += off * amps[i + 1];
            }
            prev_in = cur;
            let d = (r - self.coupling * prev_d) * self.inv_denom[i];
            amps[i] = d;
            prev_d = d;
        }
        for i in (0..n - 1).rev() {
            let next = amps[i + 1];
            amps[i] -= self.c_prime[i] * next;
        }
    }

    /// Advance `n_steps` after checking the timestep.
    pub fn run(&self, mut psi: WaveFunction, n_steps: usize) -> Result<WaveFunction> {
        self.check_grid(&psi)?;
        self.check_timestep(&psi)?;
        for _ in 0..n_steps {
            self.step(&mut psi);
        }
        Ok(psi)
    }

    /// Snapshots at steps `0, every, 2·every, …, n_steps`.
    pub fn trajectory(&self, psi: WaveFunction, n_steps: usize, every: usize) -> Result<Vec<WaveFunction>> {
        self.check_grid(&psi)?;
        self.check_timestep(&psi)?;
        let every = every.max(1);
        let mut out = vec![psi.clone()];
        let mut psi = psi;
        for s in 1..=n_steps {
            self.step(&mut psi);
            if s % every == 0 {
                out.push(psi.clone());
            }
        }
        Ok(out)
    }

    fn check_grid(&self, psi: &WaveFunction) -> Result<()> {
        if *psi.grid() != self.system.grid {
            return Err(UnitaryError::GridMismatch);
        }
        Ok(())
    }
}

/// Propagate `psi` under `potential` for `n_steps` Crank–Nicolson steps.
pub fn propagate_grid(
    psi: &WaveFunction,
    potential: &PotentialSpec,
    dt: f64,
    n_steps: usize,
    mass: f64,
    hbar: f64,
) -> Result<WaveFunction> {
    let system = GridSystem::new(*psi.grid(), potential, mass, hbar)?;
    CrankNicolson::for_state(system, dt, psi)?.run(psi.clone(), n_steps)
}
