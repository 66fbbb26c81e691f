use num_complex::Complex64;
use serde::Serialize;

use super::{DecayRateMatrix, DissipativeError, Result};
use crate::trace::Trace;
use crate::unitary::SuperpositionState;

/// Upper bound on `dt · max(A)` for the fixed-step integrator.
pub const MAX_RATE_STEP: f64 = 0.1;

const NEGATIVE_TOLERANCE: f64 = 1e-12;

/// Populations and phases of the eigenbasis amplitudes `a_k = √p_k e^{iφ_k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DissipativeState {
    populations: Vec<f64>,
    phases: Vec<f64>,
    t: f64,
}

impl DissipativeState {
    pub fn new(populations: Vec<f64>, phases: Vec<f64>, t: f64) -> Result<Self> {
        if populations.len() != phases.len() {
            return Err(DissipativeError::DimensionMismatch(format!(
                "{} populations but {} phases",
                populations.len(),
                phases.len()
            )));
        }
        if populations.is_empty() {
            return Err(DissipativeError::DimensionMismatch("state has no levels".into()));
        }
        if let Some(p) = populations.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(DissipativeError::Domain(format!("population {p} is outside [0, 1]")));
        }
        let total: f64 = populations.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(DissipativeError::Domain(format!("populations sum to {total}, not 1")));
        }
        if phases.iter().any(|f| !f.is_finite()) || !t.is_finite() {
            return Err(DissipativeError::Domain("phases and time must be finite".into()));
        }
        Ok(Self { populations, phases, t })
    }

    pub fn from_populations(populations: Vec<f64>) -> Result<Self> {
        let n = populations.len();
        Self::new(populations, vec![0.0; n], 0.0)
    }

    /// All weight in level `k` of `n`.
    pub fn eigenstate(n: usize, k: usize) -> Result<Self> {
        if k >= n {
            return Err(DissipativeError::DimensionMismatch(format!("level {k} of {n}")));
        }
        let mut p = vec![0.0; n];
        p[k] = 1.0;
        Self::from_populations(p)
    }

    pub fn from_superposition(state: &SuperpositionState, t: f64) -> Result<Self> {
        let coeffs = state.coeffs();
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        let populations = coeffs.iter().map(|c| (c.norm_sqr() / norm).min(1.0)).collect();
        let phases = coeffs.iter().map(|c| c.arg()).collect();
        Self::new(populations, phases, t)
    }

    pub fn populations(&self) -> &[f64] {
        &self.populations
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn n_levels(&self) -> usize {
        self.populations.len()
    }

    /// Amplitudes `√p_k e^{iφ_k}`.
    pub fn coefficients(&self) -> Vec<Complex64> {
        self.populations
            .iter()
            .zip(&self.phases)
            .map(|(&p, &phi)| Complex64::from_polar(p.sqrt(), phi))
            .collect()
    }

    pub fn mean_energy(&self, energies: &[f64]) -> f64 {
        self.populations.iter().zip(energies).map(|(p, e)| p * e).sum()
    }

    /// `1 / Σ p_k²`: 1 for an eigenstate, `n` for uniform weight.
    pub fn participation_ratio(&self) -> f64 {
        1.0 / self.populations.iter().map(|p| p * p).sum::<f64>()
    }

    /// Index and weight of the most populated level (lowest index on ties).
    pub fn dominant(&self) -> (usize, f64) {
        self.populations
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (k, p)| if p > best.1 { (k, p) } else { best })
    }

    pub(crate) fn populations_mut(&mut self) -> &mut [f64] {
        &mut self.populations
    }

    pub(crate) fn phases_mut(&mut self) -> &mut [f64] {
        &mut self.phases
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.t = t;
    }
}

/// `dp/dt` of the pairwise logistic transfer, with every channel scaled by `gate`.
///
/// Each channel `(j, k, A)` moves `gate · A · p_j · p_k` from `j` to `k`, so the
/// derivative sums to zero by construction.
pub fn population_derivative(p: &[f64], channels: &[(usize, usize, f64)], gate: f64, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    for &(j, k, a) in channels {
        let flow = gate * a * p[j] * p[k];
        out[j] -= flow;
        out[k] += flow;
    }
}

/// Fixed-step RK4 integrator for the population equations.
#[derive(Debug, Clone)]
pub struct Dissipator {
    rates: DecayRateMatrix,
    channels: Vec<(usize, usize, f64)>,
    dt: f64,
}

impl Dissipator {
    pub fn new(rates: DecayRateMatrix, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(DissipativeError::Domain(format!("dt = {dt} must be positive")));
        }
        check_rate_resolution(dt, rates.max_rate())?;
        let channels = rates.channels();
        Ok(Self { rates, channels, dt })
    }

    pub fn rates(&self) -> &DecayRateMatrix {
        &self.rates
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// One RK4 step of the populations alone.
    pub fn step_populations(&self, p: &mut [f64], gate: f64, t: f64) -> Result<()> {
        rk4_populations(p, &self.channels, gate, self.dt, t)
    }

    /// Rotate phases by `-E_k h / ħ`.
    pub fn advance_phases(&self, phases: &mut [f64], h: f64) {
        advance_phases(phases, self.rates.energies(), self.rates.hbar(), h);
    }

    /// One full step: populations by RK4, phases by the exact unitary rotation.
    pub fn step(&self, state: &mut DissipativeState, gate: f64) -> Result<()> {
        self.check_levels(state)?;
        let t = state.t;
        self.step_populations(state.populations_mut(), gate, t)?;
        self.advance_phases(state.phases_mut(), self.dt);
        state.set_time(t + self.dt);
        Ok(())
    }

    /// `n_steps` ungated steps, sampling every `sample_interval` steps (and at start and end).
    pub fn run(
        &self,
        state: &DissipativeState,
        n_steps: usize,
        sample_interval: usize,
    ) -> Result<(DissipativeState, Trace)> {
        self.check_levels(state)?;
        let every = sample_interval.max(1);
        let n = state.n_levels();
        let mut names: Vec<String> = (0..n).map(|k| format!("p_{k}")).collect();
        names.push("E_mean".into());
        let mut trace = Trace::new(names)?;
        let energies = self.rates.energies();
        let record = |trace: &mut Trace, s: &DissipativeState| {
            let mut values = s.populations.clone();
            values.push(s.mean_energy(energies));
            trace.push(s.t, values)
        };

        let mut s = state.clone();
        let t0 = s.t;
        record(&mut trace, &s)?;
        for i in 1..=n_steps {
            let t = s.t;
            self.step_populations(s.populations_mut(), 1.0, t)?;
            self.advance_phases(s.phases_mut(), self.dt);
            s.set_time(t0 + i as f64 * self.dt);
            if i % every == 0 || i == n_steps {
                record(&mut trace, &s)?;
            }
        }
        Ok((s, trace))
    }

    fn check_levels(&self, state: &DissipativeState) -> Result<()> {
        if state.n_levels() != self.rates.n_levels() {
            return Err(DissipativeError::DimensionMismatch(format!(
                "state has {} levels, rate matrix {}",
                state.n_levels(),
                self.rates.n_levels()
            )));
        }
        Ok(())
    }
}

pub(crate) fn check_rate_resolution(dt: f64, max_rate: f64) -> Result<()> {
    let product = dt.abs() * max_rate;
    if product >= MAX_RATE_STEP {
        return Err(DissipativeError::TimestepTooLarge { product, limit: MAX_RATE_STEP });
    }
    Ok(())
}

pub(crate) fn advance_phases(phases: &mut [f64], energies: &[f64], hbar: f64, h: f64) {
    for (phi, e) in phases.iter_mut().zip(energies) {
        *phi = (*phi - e * h / hbar).rem_euclid(std::f64::consts::TAU);
    }
}

pub(crate) fn rk4_populations(
    p: &mut [f64],
    channels: &[(usize, usize, f64)],
    gate: f64,
    dt: f64,
    t: f64,
) -> Result<()> {
    if gate == 0.0 || channels.is_empty() {
        return Ok(());
    }
    let n = p.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    population_derivative(p, channels, gate, &mut k1);
    for i in 0..n {
        tmp[i] = p[i] + 0.5 * dt * k1[i];
    }
    population_derivative(&tmp, channels, gate, &mut k2);
    for i in 0..n {
        tmp[i] = p[i] + 0.5 * dt * k2[i];
    }
    population_derivative(&tmp, channels, gate, &mut k3);
    for i in 0..n {
        tmp[i] = p[i] + dt * k3[i];
    }
    population_derivative(&tmp, channels, gate, &mut k4);

    for i in 0..n {
        let next = p[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        if !next.is_finite() || next < -NEGATIVE_TOLERANCE {
            return Err(DissipativeError::IntegratorInstability { index: i, value: next, t: t + dt });
        }
        p[i] = next.clamp(0.0, 1.0);
    }
    Ok(())
}

/// Integrate `state` for `n_steps` of size `dt`, recording every step.
pub fn evolve_dissipative(
    state: &DissipativeState,
    rates: &DecayRateMatrix,
    dt: f64,
    n_steps: usize,
) -> Result<(DissipativeState, Trace)> {
    Dissipator::new(rates.clone(), dt)?.run(state, n_steps, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn derivative_sums_to_zero() {
        let ch = vec![(1, 0, 0.7), (2, 0, 0.3), (2, 1, 1.1)];
        let mut out = vec![0.0; 3];
        population_derivative(&[0.2, 0.3, 0.5], &ch, 1.0, &mut out);
        assert!(out.iter().sum::<f64>().abs() < 1e-16);
        assert!(out[2] < 0.0 && out[0] > 0.0);
    }

    #[test]
    fn rejects_coarse_step() {
        let rates = DecayRateMatrix::two_level(1.0).unwrap();
        assert!(matches!(Dissipator::new(rates.clone(), 0.1), Err(DissipativeError::TimestepTooLarge { .. })));
        assert!(Dissipator::new(rates, 0.09).is_ok());
    }

    #[test]
    fn eigenstate_is_fixed() {
        let rates = DecayRateMatrix::from_rates(
            array![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [1.0, 1.0, 0.0]],
            vec![0.0, 1.0, 2.0],
            1.0,
        )
        .unwrap();
        for k in 0..3 {
            let s = DissipativeState::eigenstate(3, k).unwrap();
            let (end, _) = evolve_dissipative(&s, &rates, 0.01, 1000).unwrap();
            assert_eq!(end.populations(), s.populations());
        }
    }

    #[test]
    fn overshoot_is_reported() {
        let mut p = vec![0.5, 0.5];
        let err = rk4_populations(&mut p, &[(1, 0, 100.0)], 1.0, 1.0, 0.0).unwrap_err();
        assert!(matches!(err, DissipativeError::IntegratorInstability { .. }));
    }

    #[test]
    fn state_validation() {
        assert!(DissipativeState::from_populations(vec![0.5, 0.6]).is_err());
        assert!(DissipativeState::from_populations(vec![-0.1, 1.1]).is_err());
        assert!(DissipativeState::new(vec![1.0], vec![0.0, 0.0], 0.0).is_err());
        let s = DissipativeState::from_populations(vec![0.25, 0.75]).unwrap();
        assert_eq!(s.dominant(), (1, 0.75));
        assert!((s.participation_ratio() - 1.6).abs() < 1e-12);
    }
}
