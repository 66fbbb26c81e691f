//! Classical point charge with Abraham–Lorentz radiation reaction,
//! `m ẍ = F + m τ x⃛`, in one dimension.
//!
//! [`integrate_direct`] treats the equation as a third-order initial value
//! problem and therefore exposes the runaway mode `e^{t/τ}`.
//! [`integrate_reduced`] applies the future boundary condition instead, which
//! removes runaways at the price of preacceleration.

mod direct;
mod energy;
mod force;
mod reduced;

pub use direct::{fit_growth_rate, integrate_direct, DirectTrajectory, RUNAWAY_FACTOR};
pub use energy::{energy_audit, EnergyAudit};
pub use force::ForceProfile;
pub use reduced::{divergence_onset, integrate_reduced, ReducedTrajectory, TAIL_CUTOFF_TAUS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassicalError {
    #[error("invalid parameter `{name}`: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error("invalid force profile: {0}")]
    InvalidForce(String),
    #[error("timestep {dt} must be below tau/10 = {}", tau / 10.0)]
    TimestepTooLarge { dt: f64, tau: f64 },
    #[error("state overflowed after t = {}", last.t)]
    Overflow { last: ALState },
    #[error("time grid must be uniform and increasing: {0}")]
    BadGrid(String),
}

pub type Result<T> = std::result::Result<T, ClassicalError>;

/// Effective mass, radiation-reaction time and applied force.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ALParams {
    pub m_eff: f64,
    pub tau: f64,
    pub force: ForceProfile,
}

impl ALParams {
    pub fn new(m_eff: f64, tau: f64, force: ForceProfile) -> Result<Self> {
        let p = Self { m_eff, tau, force };
        p.validate()?;
        Ok(p)
    }

    /// `τ = 2e² / (3 m c³)`.
    pub fn from_charge(e: f64, c: f64, m_eff: f64, force: ForceProfile) -> Result<Self> {
        for (name, value) in [("e", e), ("c", c)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ClassicalError::InvalidParameter { name, value });
            }
        }
        Self::new(m_eff, 2.0 * e * e / (3.0 * m_eff * c.powi(3)), force)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("m_eff", self.m_eff), ("tau", self.tau)] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ClassicalError::InvalidParameter { name, value });
            }
        }
        self.force.validate()
    }

    pub fn force_at(&self, t: f64) -> f64 {
        self.force.value(t)
    }

    /// `ȧ = (m a - F) / (m τ)`.
    pub fn jerk(&self, t: f64, a: f64) -> f64 {
        self.jerk_with_force(self.force.value(t), a)
    }

    pub fn jerk_with_force(&self, f: f64, a: f64) -> f64 {
        (self.m_eff * a - f) / (self.m_eff * self.tau)
    }
}

/// Time, position, velocity and acceleration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ALState {
    pub t: f64,
    pub x: f64,
    pub v: f64,
    pub a: f64,
}

impl ALState {
    pub fn new(t: f64, x: f64, v: f64, a: f64) -> Self {
        Self { t, x, v, a }
    }

    pub fn at_rest(t: f64) -> Self {
        Self::new(t, 0.0, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.x.is_finite() && self.v.is_finite() && self.a.is_finite()
    }
}
