use serde::Serialize;

use super::{ALParams, ALState, ClassicalError, ForceProfile, Result};

/// Tabulated forces are integrated this many `τ` ahead; the neglected weight is `e^{-40}`.
pub const TAIL_CUTOFF_TAUS: f64 = 40.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReducedTrajectory {
    pub t: Vec<f64>,
    pub a: Vec<f64>,
    pub warnings: Vec<String>,
}

impl ReducedTrajectory {
    /// Integrate the acceleration with the trapezoid rule from `(x0, v0)` at the first time.
    pub fn to_states(&self, x0: f64, v0: f64) -> Vec<ALState> {
        let mut out = Vec::with_capacity(self.t.len());
        let (mut x, mut v) = (x0, v0);
        for i in 0..self.t.len() {
            if i > 0 {
                let h = self.t[i] - self.t[i - 1];
                let v_next = v + 0.5 * h * (self.a[i - 1] + self.a[i]);
                x += 0.5 * h * (v + v_next) + h * h / 12.0 * (self.a[i - 1] - self.a[i]);
                v = v_next;
            }
            out.push(ALState::new(self.t[i], x, v, self.a[i]));
        }
        out
    }
}

/// `a(t) = (1/(m τ)) ∫_t^∞ e^{(t-t')/τ} F(t') dt'` on a uniform grid.
pub fn integrate_reduced(params: &ALParams, t_grid: &[f64]) -> Result<ReducedTrajectory> {
    params.validate()?;
    check_uniform(t_grid)?;
    let m = params.m_eff;
    let tau = params.tau;
    let mut warnings = Vec::new();
    let a: Vec<f64> = match &params.force {
        ForceProfile::Zero => vec![0.0; t_grid.len()],
        ForceProfile::Step { f0, t_on } => t_grid
            .iter()
            .map(|&t| if t < *t_on { f0 / m * ((t - t_on) / tau).exp() } else { f0 / m })
            .collect(),
        ForceProfile::Pulse { f0, t_on, t_off } => t_grid
            .iter()
            .map(|&t| {
                if t < *t_on {
                    f0 / m * (((t - t_on) / tau).exp() - ((t - t_off) / tau).exp())
                } else if t < *t_off {
                    -f0 / m * ((t - t_off) / tau).exp_m1()
                } else {
                    0.0
                }
            })
            .collect(),
        ForceProfile::Tabulated { t0, dt, values } => {
            let fmax = params.force.max_abs();
            let tail = values.last().copied().unwrap_or(0.0).abs();
            if fmax > 0.0 && tail > 1e-6 * fmax {
                warnings.push(format!(
                    "tabulated force does not decay: last sample {tail:e} vs peak {fmax:e}; \
                     it is treated as zero after the table ends"
                ));
            }
            t_grid.iter().map(|&t| tabulated_integral(*t0, *dt, values, t, tau) / (m * tau)).collect()
        }
    };
    Ok(ReducedTrajectory { t: t_grid.to_vec(), a, warnings })
}

/// `∫_t^{t+40τ} e^{(t-t')/τ} F(t') dt'` for piecewise-linear `F`, exact on each segment.
fn tabulated_integral(t0: f64, dt: f64, values: &[f64], t: f64, tau: f64) -> f64 {
    let end = t0 + (values.len() - 1) as f64 * dt;
    let start = t.max(t0);
    let stop = (t + TAIL_CUTOFF_TAUS * tau).min(end);
    if start >= stop {
        return 0.0;
    }
    let at = |s: f64| {
        let x = (s - t0) / dt;
        let i = (x.floor().max(0.0) as usize).min(values.len() - 2);
        let w = x - i as f64;
        values[i] + w * (values[i + 1] - values[i])
    };
    // Breakpoints: start, every node strictly inside, stop.
    let first_node = ((start - t0) / dt).floor() as usize + 1;
    let mut knots = vec![start];
    let mut i = first_node;
    while i < values.len() {
        let s = t0 + i as f64 * dt;
        if s >= stop {
            break;
        }
        if s > start {
            knots.push(s);
        }
        i += 1;
    }
    knots.push(stop);

    let mut total = 0.0;
    for w in knots.windows(2) {
        let (s0, s1) = (w[0], w[1]);
        let (f0, f1) = (at(s0), at(s1));
        let h = s1 - s0;
        let u0 = (s0 - t) / tau;
        let r = h / tau;
        let e0 = (-u0).exp();
        let slope = (f1 - f0) / h;
        // ∫ e^{-u/τ} du over the segment and ∫ (u-u0) e^{-u/τ} du
        let i0 = tau * e0 * -(-r).exp_m1();
        let i1 = tau * tau * e0 * (-(-r).exp_m1() - r * (-r).exp());
        total += f0 * i0 + slope * i1;
    }
    total
}

fn check_uniform(t: &[f64]) -> Result<()> {
    if t.len() < 2 {
        return Ok(());
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(ClassicalError::BadGrid("non-finite time".into()));
    }
    let h = (t[t.len() - 1] - t[0]) / (t.len() - 1) as f64;
    if h <= 0.0 {
        return Err(ClassicalError::BadGrid("times must increase".into()));
    }
    let scale = t[0].abs().max(t[t.len() - 1].abs()).max(h);
    for (i, w) in t.windows(2).enumerate() {
        if ((w[1] - w[0]) - h).abs() > 1e-9 * scale {
            return Err(ClassicalError::BadGrid(format!("spacing {} at index {i} differs from {h}", w[1] - w[0])));
        }
    }
    Ok(())
}

/// First time at which `|direct - reduced| > rel_tol · max(|reduced|, floor)`.
///
/// `floor` keeps the test meaningful where the reduced solution passes through zero.
pub fn divergence_onset(t: &[f64], direct: &[f64], reduced: &[f64], rel_tol: f64, floor: f64) -> Option<f64> {
    t.iter()
        .zip(direct.iter().zip(reduced))
        .find(|(_, (d, r))| (*d - *r).abs() > rel_tol * r.abs().max(floor))
        .map(|(t, _)| *t)
}
