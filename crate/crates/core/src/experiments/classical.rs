use serde::Serialize;

use super::{step_count, ExperimentConfig, ExperimentOutput, Result};
use crate::classical_rr::{
    divergence_onset, energy_audit, fit_growth_rate, integrate_direct, integrate_reduced, ALParams, ALState,
    ForceProfile,
};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunawaySummary {
    /// Slope of `ln|a - F0/m|`, the homogeneous mode.
    pub growth_rate_fit: Option<f64>,
    pub expected_rate: f64,
    pub relative_error: Option<f64>,
    pub runaway_time: Option<f64>,
}

/// Direct integration with a constant force `f0` switched on at `t = 0` and
/// initial acceleration `a0`.
pub fn run_runaway(config: &ExperimentConfig) -> Result<(ExperimentOutput, RunawaySummary)> {
    let p = config.checked();
    let tau = p.positive("tau")?;
    let m = p.positive("m_eff")?;
    let a0 = p.any("a0")?;
    let f0 = p.any("f0")?;
    let dt = p.positive("dt")?;
    let n_steps = step_count(p.positive("t_max")?, dt);
    let force = if f0 == 0.0 { ForceProfile::Zero } else { ForceProfile::Step { f0, t_on: 0.0 } };
    let params = ALParams::new(m, tau, force)?;
    let traj = integrate_direct(ALState::new(0.0, 0.0, 0.0, a0), &params, dt, n_steps)?;

    let steady = f0 / m;
    let mut trace = Trace::new(["a_direct", "a_analytic", "v", "x"])?;
    for (i, s) in traj.states.iter().enumerate() {
        if i % config.sample_interval == 0 || i == n_steps {
            let analytic = steady + (a0 - steady) * (s.t / tau).exp();
            trace.push(s.t, vec![s.a, analytic, s.v, s.x])?;
        }
    }
    let homogeneous: Vec<f64> = traj.states.iter().map(|s| s.a - steady).collect();
    let growth_rate_fit = fit_growth_rate(&traj.times(), &homogeneous);
    let expected_rate = 1.0 / tau;
    let summary = RunawaySummary {
        growth_rate_fit,
        expected_rate,
        relative_error: growth_rate_fit.map(|g| (g - expected_rate).abs() / expected_rate),
        runaway_time: traj.runaway_time(),
    };
    let out = ExperimentOutput::new(config, trace, &summary, &["a_direct", "a_analytic"]);
    Ok((out, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreaccelerationSummary {
    /// `a(t_on - τ) / a(∞)` of the reduced-order solution.
    pub preacceleration_ratio: Option<f64>,
    pub expected_ratio: f64,
    /// First time the direct solution leaves the reduced one by more than 1e-4 relative.
    pub divergence_onset: Option<f64>,
    pub runaway_time: Option<f64>,
    pub work: f64,
    pub radiated: f64,
    /// `ΔKE + radiated - work`.
    pub energy_drift: f64,
    /// Change of the Schott energy `m τ a v`, which accounts for the drift.
    pub schott_change: f64,
}

/// Step force `f0` at `t_on`: reduced-order solution, direct integration started
/// on the reduced-order acceleration, and the reduced-order energy audit.
pub fn run_preacceleration(config: &ExperimentConfig) -> Result<(ExperimentOutput, PreaccelerationSummary)> {
    let p = config.checked();
    let tau = p.positive("tau")?;
    let m = p.positive("m_eff")?;
    let f0 = p.any("f0")?;
    let t_on = p.any("t_on")?;
    let t_min = p.any("t_min")?;
    let t_max = p.any("t_max")?;
    let dt = p.positive("dt")?;
    let n_steps = step_count(t_max - t_min, dt);
    let t_grid: Vec<f64> = (0..=n_steps).map(|i| t_min + i as f64 * dt).collect();

    let force = if f0 == 0.0 { ForceProfile::Zero } else { ForceProfile::Step { f0, t_on } };
    let params = ALParams::new(m, tau, force)?;
    let reduced = integrate_reduced(&params, &t_grid)?;
    let direct = integrate_direct(ALState::new(t_min, 0.0, 0.0, reduced.a[0]), &params, dt, n_steps)?;
    let states = reduced.to_states(0.0, 0.0);
    let audit = energy_audit(&states, &params);
    let schott = |s: &ALState| m * tau * s.a * s.v;

    let mut trace = Trace::new(["force", "a_reduced", "a_direct", "a_newton", "kinetic", "radiated", "work"])?;
    for i in 0..=n_steps {
        if i % config.sample_interval == 0 || i == n_steps {
            let t = t_grid[i];
            let f = params.force_at(t);
            trace.push(
                t,
                vec![f, reduced.a[i], direct.states[i].a, f / m, audit.kinetic[i], audit.radiated[i], audit.work[i]],
            )?;
        }
    }

    let probe = integrate_reduced(&params, &[t_on - tau, t_on, t_on + tau])?;
    let asymptote = f0 / m;
    let summary = PreaccelerationSummary {
        preacceleration_ratio: (asymptote != 0.0).then(|| probe.a[0] / asymptote),
        expected_ratio: (-1.0_f64).exp(),
        divergence_onset: divergence_onset(&t_grid, &direct.accelerations(), &reduced.a, 1e-4, asymptote.abs()),
        runaway_time: direct.runaway_time(),
        work: audit.final_work(),
        radiated: audit.final_radiated(),
        energy_drift: audit.final_drift(),
        schott_change: schott(states.last().expect("non-empty")) - schott(&states[0]),
    };
    let mut out = ExperimentOutput::new(config, trace, &summary, &["force", "a_reduced", "a_direct"]);
    out.warnings = reduced.warnings;
    Ok((out, summary))
}
