use serde::{Deserialize, Serialize};

use super::{ClassicalError, Result};

/// Applied force `F(t)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ForceProfile {
    Zero,
    /// `F0` for `t >= t_on`, zero before.
    Step { f0: f64, t_on: f64 },
    /// `F0` on `[t_on, t_off)`, zero elsewhere.
    Pulse { f0: f64, t_on: f64, t_off: f64 },
    /// Piecewise linear through `values[i]` at `t0 + i·dt`, zero outside the table.
    Tabulated { t0: f64, dt: f64, values: Vec<f64> },
}

impl ForceProfile {
    pub fn validate(&self) -> Result<()> {
        let finite = |vals: &[f64]| vals.iter().all(|v| v.is_finite());
        match self {
            ForceProfile::Zero => Ok(()),
            ForceProfile::Step { f0, t_on } => {
                if finite(&[*f0, *t_on]) {
                    Ok(())
                } else {
                    Err(ClassicalError::InvalidForce("step parameters must be finite".into()))
                }
            }
            ForceProfile::Pulse { f0, t_on, t_off } => {
                if !finite(&[*f0, *t_on, *t_off]) {
                    return Err(ClassicalError::InvalidForce("pulse parameters must be finite".into()));
                }
                if t_off <= t_on {
                    return Err(ClassicalError::InvalidForce(format!("pulse needs t_on < t_off, got {t_on} >= {t_off}")));
                }
                Ok(())
            }
            ForceProfile::Tabulated { t0, dt, values } => {
                if !(t0.is_finite() && dt.is_finite() && *dt > 0.0) {
                    return Err(ClassicalError::InvalidForce(format!("table start {t0} / spacing {dt}")));
                }
                if values.len() < 2 {
                    return Err(ClassicalError::InvalidForce("table needs at least two samples".into()));
                }
                if !finite(values) {
                    return Err(ClassicalError::InvalidForce("table contains non-finite values".into()));
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self {
            ForceProfile::Zero => 0.0,
            ForceProfile::Step { f0, t_on } => {
                if t >= *t_on {
                    *f0
                } else {
                    0.0
                }
            }
            ForceProfile::Pulse { f0, t_on, t_off } => {
                if t >= *t_on && t < *t_off {
                    *f0
                } else {
                    0.0
                }
            }
            ForceProfile::Tabulated { t0, dt, values } => {
                let s = (t - t0) / dt;
                let last = (values.len() - 1) as f64;
                if !(0.0..=last).contains(&s) {
                    return 0.0;
                }
                let i = (s.floor() as usize).min(values.len() - 2);
                let w = s - i as f64;
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    /// Left limit `F(t⁻)`. Differs from [`ForceProfile::value`] only at jumps.
    pub fn value_left(&self, t: f64) -> f64 {
        match self {
            ForceProfile::Zero => 0.0,
            ForceProfile::Step { f0, t_on } => {
                if t > *t_on {
                    *f0
                } else {
                    0.0
                }
            }
            ForceProfile::Pulse { f0, t_on, t_off } => {
                if t > *t_on && t <= *t_off {
                    *f0
                } else {
                    0.0
                }
            }
            ForceProfile::Tabulated { t0, dt, values } => {
                let s = (t - t0) / dt;
                if s <= 0.0 || s > (values.len() - 1) as f64 {
                    return 0.0;
                }
                let i = (s.ceil() as usize - 1).min(values.len() - 2);
                let w = s - i as f64;
                values[i] + w * (values[i + 1] - values[i])
            }
        }
    }

    /// Largest `|F|` over all time.
    pub fn max_abs(&self) -> f64 {
        match self {
            ForceProfile::Zero => 0.0,
            ForceProfile::Step { f0, .. } | ForceProfile::Pulse { f0, .. } => f0.abs(),
            ForceProfile::Tabulated { values, .. } => values.iter().fold(0.0, |m, v| m.max(v.abs())),
        }
    }
}
