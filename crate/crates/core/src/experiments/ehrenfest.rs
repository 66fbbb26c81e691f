use serde::Serialize;

use super::{step_count, ExperimentConfig, ExperimentOutput, Result};
use crate::spectral::{Grid1D, PotentialSpec};
use crate::trace::Trace;
use crate::unitary::{expectation_grid, force_expectation, CrankNicolson, GridSystem, WaveFunction};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EhrenfestSummary {
    pub potential: String,
    pub max_residual: f64,
    /// Largest `|⟨F⟩ - F(⟨x⟩)|`: zero for quadratic potentials, the size of
    /// the non-classical correction otherwise.
    pub max_closure_gap: f64,
    pub norm_drift: f64,
}

/// `V = m ω² x²/2 + quartic·x⁴`; zero when both coefficients vanish.
pub fn run_ehrenfest(config: &ExperimentConfig) -> Result<(ExperimentOutput, EhrenfestSummary)> {
    let p = config.checked();
    let omega = p.non_negative("omega")?;
    let quartic = p.non_negative("quartic")?;
    let grid = Grid1D::new(p.any("x_min")?, p.any("x_max")?, p.count("n_points")?)?;
    let dt = p.positive("dt")?;
    let n_steps = step_count(p.positive("t_max")?, dt).max(2);
    let (mass, hbar) = (1.0, 1.0);

    let (potential, label) = if quartic == 0.0 && omega == 0.0 {
        (PotentialSpec::Box, "zero".to_string())
    } else if quartic == 0.0 {
        (PotentialSpec::Harmonic { omega }, format!("harmonic(omega={omega})"))
    } else {
        let values = grid.points().iter().map(|x| 0.5 * mass * omega * omega * x * x + quartic * x.powi(4)).collect();
        (PotentialSpec::Tabulated { values }, format!("anharmonic(omega={omega}, quartic={quartic})"))
    };
    let classical_force = |x: f64| -(mass * omega * omega * x + 4.0 * quartic * x.powi(3));

    let system = GridSystem::new(grid, &potential, mass, hbar)?;
    let mut psi = WaveFunction::gaussian(grid, p.any("x0")?, p.positive("sigma")?, p.any("k0")?)?;
    let cn = CrankNicolson::for_state(system.clone(), dt, &psi)?;
    cn.check_timestep(&psi)?;

    let mut trace = Trace::new(["x_mean", "p_mean", "force", "mass_accel", "residual", "closure_gap"])?;
    // Sliding window of ⟨x⟩ for the centred second difference.
    let mut xs = [0.0; 3];
    let mut forces = [0.0; 3];
    let mut p_means = [0.0; 3];
    let (mut max_residual, mut max_closure_gap, mut norm_drift): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for i in 0..=n_steps {
        if i > 0 {
            cn.step(&mut psi);
        }
        xs.rotate_left(1);
        forces.rotate_left(1);
        p_means.rotate_left(1);
        let obs = expectation_grid(&psi, &system);
        xs[2] = obs.x_mean;
        p_means[2] = obs.p_mean;
        forces[2] = force_expectation(&psi, &system.potential);
        norm_drift = norm_drift.max((psi.norm_sq() - 1.0).abs());
        if i < 2 {
            continue;
        }
        // Centre of the window is step i-1.
        let centre = i - 1;
        let mass_accel = mass * (xs[2] - 2.0 * xs[1] + xs[0]) / (dt * dt);
        let residual = (mass_accel - forces[1]).abs();
        let gap = forces[1] - classical_force(xs[1]);
        max_residual = max_residual.max(residual);
        max_closure_gap = max_closure_gap.max(gap.abs());
        if centre % config.sample_interval == 0 || i == n_steps {
            trace.push(centre as f64 * dt, vec![xs[1], p_means[1], forces[1], mass_accel, residual, gap])?;
        }
    }
    let summary = EhrenfestSummary { potential: label, max_residual, max_closure_gap, norm_drift };
    let out = ExperimentOutput::new(config, trace, &summary, &["x_mean", "force", "residual"]);
    Ok((out, summary))
}
