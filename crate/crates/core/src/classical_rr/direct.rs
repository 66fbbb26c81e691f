use serde::Serialize;

use super::{ALParams, ALState, ClassicalError, Result};

/// `|a|` above this multiple of the initial acceleration scale counts as runaway.
pub const RUNAWAY_FACTOR: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectTrajectory {
    pub states: Vec<ALState>,
    /// First index whose acceleration crossed the runaway threshold.
    pub runaway_at: Option<usize>,
}

impl DirectTrajectory {
    pub fn times(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.t).collect()
    }

    pub fn accelerations(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.a).collect()
    }

    pub fn runaway_time(&self) -> Option<f64> {
        self.runaway_at.map(|i| self.states[i].t)
    }
}

/// RK4 on `(x, v, a)` with `ȧ = (m a - F(t)) / (m τ)`, starting from `initial`.
///
/// The last stage of each step uses the left limit of `F`, so a force jump that
/// falls on a step boundary is integrated without an O(dt) error.
pub fn integrate_direct(initial: ALState, params: &ALParams, dt: f64, n_steps: usize) -> Result<DirectTrajectory> {
    params.validate()?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ClassicalError::InvalidParameter { name: "dt", value: dt });
    }
    if dt >= params.tau / 10.0 {
        return Err(ClassicalError::TimestepTooLarge { dt, tau: params.tau });
    }
    if !initial.is_finite() {
        return Err(ClassicalError::Overflow { last: initial });
    }

    let scale = initial.a.abs().max(params.force.max_abs() / params.m_eff);
    let threshold = RUNAWAY_FACTOR * scale;
    let deriv = |f: f64, y: [f64; 3]| [y[1], y[2], params.jerk_with_force(f, y[2])];
    let force = &params.force;

    let mut states = Vec::with_capacity(n_steps + 1);
    states.push(initial);
    let mut runaway_at = None;
    let mut y = [initial.x, initial.v, initial.a];
    for i in 0..n_steps {
        let t = initial.t + i as f64 * dt;
        let t_next = initial.t + (i + 1) as f64 * dt;
        let f_mid = force.value(t + 0.5 * dt);
        let k1 = deriv(force.value(t), y);
        let k2 = deriv(f_mid, add(y, k1, 0.5 * dt));
        let k3 = deriv(f_mid, add(y, k2, 0.5 * dt));
        let k4 = deriv(force.value_left(t_next), add(y, k3, dt));
        for c in 0..3 {
            y[c] += dt / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
        }
        let s = ALState::new(t_next, y[0], y[1], y[2]);
        if !s.is_finite() {
            return Err(ClassicalError::Overflow { last: *states.last().expect("non-empty") });
        }
        if runaway_at.is_none() && scale > 0.0 && s.a.abs() > threshold {
            runaway_at = Some(states.len());
        }
        states.push(s);
    }
    Ok(DirectTrajectory { states, runaway_at })
}

fn add(y: [f64; 3], k: [f64; 3], h: f64) -> [f64; 3] {
    [y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]]
}

/// Least-squares slope of `ln|a|` against `t`, skipping zero samples.
pub fn fit_growth_rate(times: &[f64], a: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        times.iter().zip(a).filter(|(_, a)| **a != 0.0).map(|(t, a)| (*t, a.abs().ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = pts.iter().map(|(t, _)| (t - tm) * (t - tm)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
