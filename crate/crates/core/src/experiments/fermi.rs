use serde::Serialize;

use super::{slope, step_count, ExperimentConfig, ExperimentOutput, Result};
use crate::dissipative::{fermi_closed_form, DecayRateMatrix, Dissipator, DissipativeState};
use crate::trace::Trace;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FermiSummary {
    /// First time `p2` drops through 1/2, linearly interpolated between steps.
    pub turning_point_t: Option<f64>,
    /// `ln((p2_0) / (1 - p2_0)) / A` from the closed form.
    pub expected_turning_point: Option<f64>,
    /// Least-squares slope of `ln p2` over the last 20% of the run.
    pub tail_rate_fit: Option<f64>,
    pub max_abs_error: f64,
}

pub fn run_fermi_decay(config: &ExperimentConfig) -> Result<(ExperimentOutput, FermiSummary)> {
    let p = config.checked();
    let p2_0 = p.probability("p2_initial")?;
    let a = p.non_negative("A")?;
    let t_max = p.positive("t_max")?;
    let dt = p.positive("dt")?;
    let n_steps = step_count(t_max, dt);

    let integrator = Dissipator::new(DecayRateMatrix::two_level(a)?, dt)?;
    let mut state = DissipativeState::from_populations(vec![1.0 - p2_0, p2_0])?;
    let mut trace = Trace::new(["p2_closed", "p2_ode", "p1_ode", "abs_error"])?;
    let every = config.sample_interval;

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut p2 = Vec::with_capacity(n_steps + 1);
    let mut max_abs_error: f64 = 0.0;
    for i in 0..=n_steps {
        if i > 0 {
            integrator.step(&mut state, 1.0)?;
        }
        let t = i as f64 * dt;
        let closed = fermi_closed_form(p2_0, a, t)?;
        let ode = state.populations()[1];
        let err = (ode - closed).abs();
        max_abs_error = max_abs_error.max(err);
        times.push(t);
        p2.push(ode);
        if i % every == 0 || i == n_steps {
            trace.push(t, vec![closed, ode, state.populations()[0], err])?;
        }
    }

    let turning_point_t = p2.windows(2).zip(times.windows(2)).find(|(w, _)| w[0] >= 0.5 && w[1] < 0.5).map(
        |(w, t)| t[0] + (w[0] - 0.5) / (w[0] - w[1]) * (t[1] - t[0]),
    );
    let expected_turning_point = (a > 0.0 && p2_0 > 0.5 && p2_0 < 1.0).then(|| (p2_0 / (1.0 - p2_0)).ln() / a);
    let tail_start = n_steps - n_steps / 5;
    let (tx, ty): (Vec<f64>, Vec<f64>) =
        times[tail_start..].iter().zip(&p2[tail_start..]).filter(|(_, v)| **v > 0.0).map(|(t, v)| (*t, v.ln())).unzip();
    let summary = FermiSummary { turning_point_t, expected_turning_point, tail_rate_fit: slope(&tx, &ty), max_abs_error };
    let out = ExperimentOutput::new(config, trace, &summary, &["p2_closed", "p2_ode"]);
    Ok((out, summary))
}
