use serde::Serialize;

use super::{ALParams, ALState};

/// Cumulative energy bookkeeping along a trajectory.
///
/// `drift = ΔKE + radiated - work`. It does not vanish in general: the Schott
/// term `m τ a v` is left out and shows up here.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyAudit {
    pub t: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub radiated: Vec<f64>,
    pub work: Vec<f64>,
    pub drift: Vec<f64>,
}

impl EnergyAudit {
    pub fn final_drift(&self) -> f64 {
        self.drift.last().copied().unwrap_or(0.0)
    }

    pub fn final_work(&self) -> f64 {
        self.work.last().copied().unwrap_or(0.0)
    }

    pub fn final_radiated(&self) -> f64 {
        self.radiated.last().copied().unwrap_or(0.0)
    }
}

/// Kinetic energy `m v²/2`, radiated `∫ m τ a² dt` and work `∫ F v dt` (trapezoid rule).
pub fn energy_audit(trajectory: &[ALState], params: &ALParams) -> EnergyAudit {
    let m = params.m_eff;
    let n = trajectory.len();
    let mut audit = EnergyAudit {
        t: Vec::with_capacity(n),
        kinetic: Vec::with_capacity(n),
        radiated: Vec::with_capacity(n),
        work: Vec::with_capacity(n),
        drift: Vec::with_capacity(n),
    };
    let (mut radiated, mut work) = (0.0, 0.0);
    let ke0 = trajectory.first().map(|s| 0.5 * m * s.v * s.v).unwrap_or(0.0);
    for (i, s) in trajectory.iter().enumerate() {
        if i > 0 {
            let p = &trajectory[i - 1];
            let h = s.t - p.t;
            radiated += 0.5 * h * m * params.tau * (p.a * p.a + s.a * s.a);
            work += 0.5 * h * (params.force_at(p.t) * p.v + params.force_at(s.t) * s.v);
        }
        let ke = 0.5 * m * s.v * s.v;
        audit.t.push(s.t);
        audit.kinetic.push(ke);
        audit.radiated.push(radiated);
        audit.work.push(work);
        audit.drift.push(ke - ke0 + radiated - work);
    }
    audit
}
