use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::evolve::{advance_phases, check_rate_resolution, rk4_populations};
use super::rates::{dipole_cutoff, rate_for_gap};
use super::{DecayRateMatrix, DissipativeError, DissipativeState, PhysicalConstants, Result};
use crate::spectral::{bond_forces, dipole_matrix, EigenBasis};
use crate::trace::Trace;
use crate::unitary::{project_with, reconstruct, SuperpositionState, WaveFunction, DEFAULT_TRUNCATION_THRESHOLD};
use crate::Parallelism;

/// Force scale below which the free-packet gate shuts dissipation off.
pub const DEFAULT_GATE_EPSILON: f64 = 1e-6;

/// Independent Gaussian jitter on every level energy, redrawn each step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSpec {
    pub sigma_e: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CombinedOptions {
    /// Record every `sample_interval` steps; the first and last steps are always recorded.
    pub sample_interval: usize,
    pub gate_epsilon: f64,
    pub noise: Option<NoiseSpec>,
    /// Adds a `localization_left` column with the probability below this position.
    pub split: Option<f64>,
    pub truncation_threshold: f64,
    /// Record the first step time at which some population exceeds this value.
    pub localization_threshold: Option<f64>,
}

impl Default for CombinedOptions {
    fn default() -> Self {
        Self {
            sample_interval: 1,
            gate_epsilon: DEFAULT_GATE_EPSILON,
            noise: None,
            split: None,
            truncation_threshold: DEFAULT_TRUNCATION_THRESHOLD,
            localization_threshold: None,
        }
    }
}

/// Eigenbasis with the matrices needed to evaluate observables from coefficients.
#[derive(Debug, Clone)]
pub struct CombinedSystem {
    basis: Arc<EigenBasis>,
    rates: DecayRateMatrix,
    dipole: Array2<f64>,
    force: Array2<f64>,
    prefactor: f64,
}

impl CombinedSystem {
    /// Rates from the basis dipole matrix.
    pub fn new(basis: Arc<EigenBasis>, constants: &PhysicalConstants) -> Result<Self> {
        let dipole = dipole_matrix(&basis);
        let rates = super::decay_rates(&basis, &dipole, constants)?;
        Ok(Self::assemble(basis, rates, dipole, constants.rate_prefactor()))
    }

    /// Explicit rates. Jittered rates (with noise on) still use `constants`.
    pub fn with_rates(basis: Arc<EigenBasis>, rates: DecayRateMatrix, constants: &PhysicalConstants) -> Result<Self> {
        constants.validate()?;
        if rates.n_levels() != basis.n_states() || rates.energies() != basis.energies() {
            return Err(DissipativeError::DimensionMismatch(
                "rate matrix levels do not match the basis energies".into(),
            ));
        }
        let dipole = dipole_matrix(&basis);
        Ok(Self::assemble(basis, rates, dipole, constants.rate_prefactor()))
    }

    fn assemble(basis: Arc<EigenBasis>, rates: DecayRateMatrix, dipole: Array2<f64>, prefactor: f64) -> Self {
        let force = force_matrix(&basis);
        Self { basis, rates, dipole, force, prefactor }
    }

    /// Multiply every rate, including jittered ones, by `scale`.
    pub fn with_rate_scale(mut self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale >= 0.0) {
            return Err(DissipativeError::InvalidRates(format!("rate scale {scale}")));
        }
        self.rates = self.rates.scaled(scale);
        self.prefactor *= scale;
        Ok(self)
    }

    pub fn basis(&self) -> &Arc<EigenBasis> {
        &self.basis
    }

    pub fn rates(&self) -> &DecayRateMatrix {
        &self.rates
    }

    pub fn dipole(&self) -> &Array2<f64> {
        &self.dipole
    }

    /// `F_jk`, the lattice force operator in the eigenbasis.
    pub fn force(&self) -> &Array2<f64> {
        &self.force
    }

    pub fn position_expectation(&self, coeffs: &[Complex64]) -> f64 {
        quadratic_form(&self.dipole, coeffs)
    }

    pub fn force_expectation(&self, coeffs: &[Complex64]) -> f64 {
        quadratic_form(&self.force, coeffs)
    }

    /// Project `psi` and evolve it.
    pub fn evolve_wavefunction(
        &self,
        psi: &WaveFunction,
        dt: f64,
        n_steps: usize,
        options: &CombinedOptions,
    ) -> Result<CombinedRun> {
        let projection = project_with(psi, &self.basis, options.truncation_threshold, Parallelism::Sequential)?;
        let initial = DissipativeState::from_superposition(&projection.state, 0.0)?;
        self.run(&initial, dt, n_steps, options)
    }

    /// Strang-split evolution: half phase rotation, gated RK4 population step, half phase rotation.
    pub fn run(
        &self,
        initial: &DissipativeState,
        dt: f64,
        n_steps: usize,
        options: &CombinedOptions,
    ) -> Result<CombinedRun> {
        let n = self.basis.n_states();
        if initial.n_levels() != n {
            return Err(DissipativeError::DimensionMismatch(format!(
                "state has {} levels, basis {n}",
                initial.n_levels()
            )));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DissipativeError::Domain(format!("dt = {dt} must be positive")));
        }
        if !(options.gate_epsilon.is_finite() && options.gate_epsilon > 0.0) {
            return Err(DissipativeError::Domain(format!("gate epsilon {} must be positive", options.gate_epsilon)));
        }
        check_rate_resolution(dt, self.rates.max_rate())?;

        let mut noise = match options.noise {
            Some(spec) => {
                let normal = Normal::new(0.0, spec.sigma_e)
                    .map_err(|e| DissipativeError::Domain(format!("noise sigma {}: {e}", spec.sigma_e)))?;
                Some((normal, ChaCha8Rng::seed_from_u64(spec.seed)))
            }
            None => None,
        };

        let left = match options.split {
            Some(split) => Some(region_matrix(&self.basis, split)),
            None => None,
        };
        let mut names: Vec<String> = (0..n).map(|k| format!("p_{k}")).collect();
        for name in ["x_mean", "E_mean", "force", "gate", "participation_ratio", "max_population", "dominant_state"] {
            names.push(name.into());
        }
        if left.is_some() {
            names.push("localization_left".into());
        }
        let mut trace = Trace::new(names)?;
        let mut snapshots = Vec::new();

        let energies = self.basis.energies();
        let hbar = self.basis.hbar();
        let static_channels = self.rates.channels();
        let mut jittered = vec![0.0; n];

        let every = options.sample_interval.max(1);
        let mut state = initial.clone();
        let t0 = state.t();
        let mut gate = self.gate(&state.coefficients(), options.gate_epsilon);
        self.record(&mut trace, &mut snapshots, &state, gate, left.as_ref())?;
        let localized = |s: &DissipativeState| options.localization_threshold.is_some_and(|th| s.dominant().1 > th);
        let mut localized_at = localized(&state).then_some(t0);

        for i in 1..=n_steps {
            advance_phases(state.phases_mut(), energies, hbar, 0.5 * dt);
            let coeffs = state.coefficients();
            gate = self.gate(&coeffs, options.gate_epsilon);
            let t_mid = t0 + (i as f64 - 0.5) * dt;
            match noise.as_mut() {
                Some((normal, rng)) => {
                    for (out, e) in jittered.iter_mut().zip(energies) {
                        *out = e + normal.sample(rng);
                    }
                    let channels = self.jittered_channels(&jittered);
                    let max_rate = channels.iter().map(|c| c.2).fold(0.0, f64::max);
                    check_rate_resolution(dt, max_rate)?;
                    rk4_populations(state.populations_mut(), &channels, gate, dt, t_mid)?;
                }
                None => rk4_populations(state.populations_mut(), &static_channels, gate, dt, t_mid)?,
            }
            advance_phases(state.phases_mut(), energies, hbar, 0.5 * dt);
            state.set_time(t0 + i as f64 * dt);
            if localized_at.is_none() && localized(&state) {
                localized_at = Some(state.t());
            }
            if i % every == 0 || i == n_steps {
                self.record(&mut trace, &mut snapshots, &state, gate, left.as_ref())?;
            }
        }
        Ok(CombinedRun { trace, snapshots, final_state: state, localized_at })
    }

    fn gate(&self, coeffs: &[Complex64], epsilon: f64) -> f64 {
        (self.force_expectation(coeffs).abs() / epsilon).min(1.0)
    }

    fn jittered_channels(&self, energies: &[f64]) -> Vec<(usize, usize, f64)> {
        let n = energies.len();
        let hbar = self.basis.hbar();
        let cutoff = dipole_cutoff(&self.dipole);
        let mut channels = Vec::new();
        for j in 0..n {
            for k in 0..n {
                let d = self.dipole[[j, k]];
                if d.abs() <= cutoff {
                    continue;
                }
                let a = rate_for_gap(self.prefactor, energies[j] - energies[k], d, hbar);
                if a > 0.0 {
                    channels.push((j, k, a));
                }
            }
        }
        channels
    }

    fn record(
        &self,
        trace: &mut Trace,
        snapshots: &mut Vec<(f64, SuperpositionState)>,
        state: &DissipativeState,
        gate: f64,
        left: Option<&Array2<f64>>,
    ) -> Result<()> {
        let coeffs = state.coefficients();
        let (dominant, max_p) = state.dominant();
        let mut values = state.populations().to_vec();
        values.push(self.position_expectation(&coeffs));
        values.push(state.mean_energy(self.basis.energies()));
        values.push(self.force_expectation(&coeffs));
        values.push(gate);
        values.push(state.participation_ratio());
        values.push(max_p);
        values.push(dominant as f64);
        if let Some(l) = left {
            values.push(quadratic_form(l, &coeffs));
        }
        trace.push(state.t(), values)?;
        let snap = SuperpositionState::normalized(self.basis.clone(), coeffs)?;
        snapshots.push((state.t(), snap));
        Ok(())
    }
}

/// Output of a combined run.
#[derive(Debug, Clone)]
pub struct CombinedRun {
    pub trace: Trace,
    /// Eigenbasis coefficients (already phase-rotated to time `t`) at each recorded sample.
    pub snapshots: Vec<(f64, SuperpositionState)>,
    pub final_state: DissipativeState,
    /// First time some population exceeded the localization threshold, if one was set.
    pub localized_at: Option<f64>,
}

impl CombinedRun {
    /// Grid wave function at snapshot `i`.
    pub fn wavefunction(&self, i: usize) -> WaveFunction {
        reconstruct(&self.snapshots[i].1, 0.0)
    }
}

/// Project `psi` on the basis of `system` and evolve with default options plus `noise`.
pub fn evolve_combined(
    psi: &WaveFunction,
    system: &CombinedSystem,
    dt: f64,
    n_steps: usize,
    noise: Option<NoiseSpec>,
) -> Result<CombinedRun> {
    let options = CombinedOptions { noise, ..CombinedOptions::default() };
    system.evolve_wavefunction(psi, dt, n_steps, &options)
}

/// `Re Σ_jk a_j* a_k M_jk` for a real symmetric `M`.
fn quadratic_form(m: &Array2<f64>, coeffs: &[Complex64]) -> f64 {
    let n = coeffs.len();
    let mut total = 0.0;
    for j in 0..n {
        let aj = coeffs[j].conj();
        let mut row = Complex64::new(0.0, 0.0);
        for k in 0..n {
            row += coeffs[k] * m[[j, k]];
        }
        total += (aj * row).re;
    }
    total
}

/// `F_jk = Σ_i f_i (ψ_j[i] ψ_k[i+1] + ψ_j[i+1] ψ_k[i]) dx / 2` over the bonds of the grid.
fn force_matrix(basis: &EigenBasis) -> Array2<f64> {
    let dx = basis.grid().dx();
    let f = bond_forces(basis.potential(), dx);
    let n = basis.n_states();
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        let pj = basis.state(j);
        for k in j..n {
            let pk = basis.state(k);
            let mut s = 0.0;
            for (i, fi) in f.iter().enumerate() {
                if *fi != 0.0 {
                    s += fi * (pj[i] * pk[i + 1] + pj[i + 1] * pk[i]);
                }
            }
            let v = 0.5 * s * dx;
            m[[j, k]] = v;
            m[[k, j]] = v;
        }
    }
    m
}

/// Overlap of each pair restricted to `x < split`.
fn region_matrix(basis: &EigenBasis, split: f64) -> Array2<f64> {
    let grid = basis.grid();
    let dx = grid.dx();
    let inside: Vec<usize> = (0..grid.n_points()).filter(|&i| grid.x(i) < split).collect();
    let n = basis.n_states();
    let mut m = Array2::zeros((n, n));
    for j in 0..n {
        let pj = basis.state(j);
        for k in j..n {
            let pk = basis.state(k);
            let v = inside.iter().map(|&i| pj[i] * pk[i]).sum::<f64>() * dx;
            m[[j, k]] = v;
            m[[k, j]] = v;
        }
    }
    m
}
