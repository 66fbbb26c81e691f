use ndarray::Array2;
use serde::Serialize;

use super::{step_count, ExperimentConfig, ExperimentError, ExperimentOutput, Result};
use crate::dissipative::{DecayRateMatrix, Dissipator, DissipativeState};
use crate::trace::Trace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CascadePath {
    /// The middle level takes over most of the weight on the way down.
    Cascade,
    /// The middle level stays nearly empty while the ground level fills.
    Direct,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CascadeSummary {
    pub path: CascadePath,
    pub max_p2: f64,
    pub t_max_p2: f64,
    pub final_p1: f64,
}

/// Cascade if `max p2 > cascade_threshold`; direct if `max p2 < direct_threshold`
/// while `p1` grows; mixed otherwise.
pub fn classify_path(max_p2: f64, p1_grew: bool, cascade_threshold: f64, direct_threshold: f64) -> CascadePath {
    if max_p2 > cascade_threshold {
        CascadePath::Cascade
    } else if max_p2 < direct_threshold && p1_grew {
        CascadePath::Direct
    } else {
        CascadePath::Mixed
    }
}

pub fn run_cascade(config: &ExperimentConfig) -> Result<(ExperimentOutput, CascadeSummary)> {
    let p = config.checked();
    let p1 = p.probability("p1_initial")?;
    let p2 = p.probability("p2_initial")?;
    if p1 + p2 > 1.0 {
        return Err(ExperimentError::InvalidParameter {
            name: "p2_initial".into(),
            value: p2,
            reason: format!("p1_initial + p2_initial = {} exceeds 1", p1 + p2),
        });
    }
    let energies = vec![p.any("E1")?, p.any("E2")?, p.any("E3")?];
    let (a21, a31, a32) = (p.non_negative("A21")?, p.non_negative("A31")?, p.non_negative("A32")?);
    let dt = p.positive("dt")?;
    let t_max = p.positive("t_max")?;
    let cascade_th = p.probability("cascade_threshold")?;
    let direct_th = p.probability("direct_threshold")?;

    let mut rates = Array2::zeros((3, 3));
    rates[[1, 0]] = a21;
    rates[[2, 0]] = a31;
    rates[[2, 1]] = a32;
    let integrator = Dissipator::new(DecayRateMatrix::from_rates(rates, energies.clone(), 1.0)?, dt)?;
    let mut state = DissipativeState::from_populations(vec![p1, p2, 1.0 - p1 - p2])?;

    let mut trace = Trace::new(["p1", "p2", "p3", "E_mean"])?;
    let n_steps = step_count(t_max, dt);
    let (mut max_p2, mut t_max_p2) = (p2, 0.0);
    for i in 0..=n_steps {
        if i > 0 {
            integrator.step(&mut state, 1.0)?;
        }
        let t = i as f64 * dt;
        let pops = state.populations();
        if pops[1] > max_p2 {
            max_p2 = pops[1];
            t_max_p2 = t;
        }
        if i % config.sample_interval == 0 || i == n_steps {
            trace.push(t, vec![pops[0], pops[1], pops[2], state.mean_energy(&energies)])?;
        }
    }
    let final_p1 = state.populations()[0];
    let summary = CascadeSummary {
        path: classify_path(max_p2, final_p1 > p1, cascade_th, direct_th),
        max_p2,
        t_max_p2,
        final_p1,
    };
    let out = ExperimentOutput::new(config, trace, &summary, &["p1", "p2", "p3"]);
    Ok((out, summary))
}
