use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    FermiDecay,
    ThreeLevelCascade,
    TwoWellLocalization,
    EhrenfestCheck,
    RunawayDemo,
    PreaccelerationDemo,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 6] = [
        ExperimentName::FermiDecay,
        ExperimentName::ThreeLevelCascade,
        ExperimentName::TwoWellLocalization,
        ExperimentName::EhrenfestCheck,
        ExperimentName::RunawayDemo,
        ExperimentName::PreaccelerationDemo,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExperimentName::FermiDecay => "fermi_decay",
            ExperimentName::ThreeLevelCascade => "three_level_cascade",
            ExperimentName::TwoWellLocalization => "two_well_localization",
            ExperimentName::EhrenfestCheck => "ehrenfest_check",
            ExperimentName::RunawayDemo => "runaway_demo",
            ExperimentName::PreaccelerationDemo => "preacceleration_demo",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ExperimentName::FermiDecay => "two-level logistic decay, RK4 against the closed form",
            ExperimentName::ThreeLevelCascade => "three-level populations, classified as cascade, direct or mixed",
            ExperimentName::TwoWellLocalization => "broad packet in an asymmetric double well with radiative decay",
            ExperimentName::EhrenfestCheck => "Crank-Nicolson packet, m d²<x>/dt² against <-dV/dx>",
            ExperimentName::RunawayDemo => "Abraham-Lorentz runaway mode from direct integration",
            ExperimentName::PreaccelerationDemo => "step force: reduced-order preacceleration vs direct integration",
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.iter().map(|n| n.as_str()).collect::<Vec<_>>().join(", ")
    }

    /// Complete default parameter set.
    pub fn default_parameters(self) -> &'static [(&'static str, f64)] {
        match self {
            ExperimentName::FermiDecay => &[("p2_initial", 0.99), ("A", 1.0), ("t_max", 30.0), ("dt", 0.01)],
            ExperimentName::ThreeLevelCascade => &[
                ("p1_initial", 1e-4),
                ("p2_initial", 1e-2),
                ("E1", 0.0),
                ("E2", 1.0),
                ("E3", 2.0),
                ("A21", 1.0),
                ("A31", 1.0),
                ("A32", 1.0),
                ("dt", 0.005),
                ("t_max", 60.0),
                ("cascade_threshold", 0.5),
                ("direct_threshold", 0.1),
            ],
            ExperimentName::TwoWellLocalization => &[
                ("separation", 5.0),
                ("depth_b", 1.5),
                ("delta", 0.5),
                ("width", 1.0),
                ("x_min", -20.0),
                ("x_max", 20.0),
                ("n_points", 800.0),
                ("n_states", 32.0),
                ("packet_center", 0.0),
                ("packet_sigma", 5.0),
                ("packet_k0", 0.0),
                ("c", 0.8),
                ("rate_scale", 1.0),
                ("dt", 0.25),
                ("t_max", 1e5),
                ("sigma_e", 0.0),
                ("localization_threshold", 0.99),
                ("truncation_threshold", 0.01),
                ("gate_epsilon", 1e-6),
            ],
            ExperimentName::EhrenfestCheck => &[
                ("omega", 1.0),
                ("quartic", 0.0),
                ("x0", 1.0),
                ("sigma", std::f64::consts::FRAC_1_SQRT_2),
                ("k0", 0.0),
                ("x_min", -10.0),
                ("x_max", 10.0),
                ("n_points", 1999.0),
                ("dt", 1e-3),
                ("t_max", 3.0),
            ],
            ExperimentName::RunawayDemo => {
                &[("tau", 1.0), ("m_eff", 1.0), ("a0", 1.0), ("f0", 0.0), ("t_max", 20.0), ("dt", 0.01)]
            }
            ExperimentName::PreaccelerationDemo => &[
                ("tau", 1.0),
                ("m_eff", 1.0),
                ("f0", 1.0),
                ("t_on", 0.0),
                ("t_min", -5.0),
                ("t_max", 20.0),
                ("dt", 0.01),
            ],
        }
    }

    pub fn default_sample_interval(self) -> usize {
        match self {
            ExperimentName::TwoWellLocalization => 400,
            _ => 10,
        }
    }

    fn valid_parameters(self) -> String {
        self.default_parameters().iter().map(|(k, _)| *k).collect::<Vec<_>>().join(", ")
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| ExperimentError::UnknownExperiment { name: s.to_string(), valid: Self::valid_names() })
    }
}

/// Fully resolved experiment configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentName,
    pub parameters: BTreeMap<String, f64>,
    pub seed: u64,
    pub sample_interval: usize,
}

impl ExperimentConfig {
    /// Defaults for `experiment`, seed 0.
    pub fn new(experiment: ExperimentName) -> Self {
        let parameters = experiment.default_parameters().iter().map(|(k, v)| (k.to_string(), *v)).collect();
        Self { experiment, parameters, seed: 0, sample_interval: experiment.default_sample_interval() }
    }

    /// Override one parameter; unknown names are rejected.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !self.parameters.contains_key(name) {
            return Err(ExperimentError::UnknownParameter {
                experiment: self.experiment.as_str(),
                name: name.to_string(),
                valid: self.experiment.valid_parameters(),
            });
        }
        if !value.is_finite() {
            return Err(ExperimentError::InvalidParameter {
                name: name.to_string(),
                value,
                reason: "must be finite".into(),
            });
        }
        self.parameters.insert(name.to_string(), value);
        Ok(())
    }

    pub fn with(mut self, name: &str, value: f64) -> Result<Self> {
        self.set(name, value)?;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sample_interval(mut self, every: usize) -> Self {
        self.sample_interval = every;
        self
    }

    /// Every key known, every default present, all values finite, interval positive.
    pub fn validate(&self) -> Result<()> {
        let defaults = self.experiment.default_parameters();
        for name in self.parameters.keys() {
            if !defaults.iter().any(|(k, _)| k == name) {
                return Err(ExperimentError::UnknownParameter {
                    experiment: self.experiment.as_str(),
                    name: name.clone(),
                    valid: self.experiment.valid_parameters(),
                });
            }
        }
        for (k, _) in defaults {
            let v = self.parameters.get(*k).copied().unwrap_or(f64::NAN);
            if !v.is_finite() {
                return Err(ExperimentError::InvalidParameter {
                    name: k.to_string(),
                    value: v,
                    reason: "missing or non-finite".into(),
                });
            }
        }
        if self.sample_interval == 0 {
            return Err(ExperimentError::InvalidParameter {
                name: "sample_interval".into(),
                value: 0.0,
                reason: "must be at least 1".into(),
            });
        }
        Ok(())
    }

    pub fn get(&self, name: &str) -> f64 {
        self.parameters.get(name).copied().unwrap_or(f64::NAN)
    }

    pub(crate) fn checked(&self) -> Checked<'_> {
        Checked(self)
    }
}

/// Typed parameter accessors that report the offending name on failure.
pub(crate) struct Checked<'a>(&'a ExperimentConfig);

impl Checked<'_> {
    fn fail(&self, name: &str, reason: &str) -> ExperimentError {
        ExperimentError::InvalidParameter { name: name.to_string(), value: self.0.get(name), reason: reason.to_string() }
    }

    pub fn any(&self, name: &str) -> Result<f64> {
        let v = self.0.get(name);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(self.fail(name, "missing or non-finite"))
        }
    }

    pub fn positive(&self, name: &str) -> Result<f64> {
        let v = self.any(name)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(self.fail(name, "must be positive"))
        }
    }

    pub fn non_negative(&self, name: &str) -> Result<f64> {
        let v = self.any(name)?;
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(self.fail(name, "must be non-negative"))
        }
    }

    pub fn probability(&self, name: &str) -> Result<f64> {
        let v = self.any(name)?;
        if (0.0..=1.0).contains(&v) {
            Ok(v)
        } else {
            Err(self.fail(name, "must lie in [0, 1]"))
        }
    }

    pub fn count(&self, name: &str) -> Result<usize> {
        let v = self.any(name)?;
        if v >= 1.0 && v.fract() == 0.0 && v < 1e9 {
            Ok(v as usize)
        } else {
            Err(self.fail(name, "must be a positive integer"))
        }
    }
}
