use std::sync::Arc;

use serde::Serialize;

use super::{step_count, ExperimentConfig, ExperimentError, ExperimentOutput, LocalizationMetrics, Result};
use crate::dissipative::{CombinedOptions, CombinedSystem, NoiseSpec, PhysicalConstants};
use crate::spectral::{solve_eigenproblem, Grid1D, PotentialSpec};
use crate::unitary::{project_with, reconstruct, SuperpositionState, WaveFunction};
use crate::Parallelism;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoWellSummary {
    pub initial: LocalizationMetrics,
    #[serde(rename = "final")]
    pub final_metrics: LocalizationMetrics,
    pub final_max_population: f64,
    /// First step time at which some population exceeded the localization threshold.
    pub time_to_localization: Option<f64>,
    pub projection_residual: f64,
    pub max_rate: f64,
    /// Weight of the ground state in well A (left of the midpoint).
    pub ground_state_prob_left: f64,
    pub energies: Vec<f64>,
}

pub fn run_two_well(config: &ExperimentConfig) -> Result<(ExperimentOutput, TwoWellSummary)> {
    let p = config.checked();
    let separation = p.positive("separation")?;
    let depth_b = p.non_negative("depth_b")?;
    let delta = p.any("delta")?;
    let depth_a = depth_b + delta;
    if depth_a < 0.0 {
        return Err(ExperimentError::InvalidParameter {
            name: "delta".into(),
            value: delta,
            reason: "makes well A repulsive".into(),
        });
    }
    let width = p.positive("width")?;
    let grid = Grid1D::new(p.any("x_min")?, p.any("x_max")?, p.count("n_points")?)?;
    let n_states = p.count("n_states")?;
    let constants = PhysicalConstants { c: p.positive("c")?, ..PhysicalConstants::default() };
    let rate_scale = p.non_negative("rate_scale")?;
    let dt = p.positive("dt")?;
    let n_steps = step_count(p.positive("t_max")?, dt);
    let sigma_e = p.non_negative("sigma_e")?;

    let center = 0.5 * (grid.x_min() + grid.x_max());
    let potential =
        PotentialSpec::double_well(center - 0.5 * separation, center + 0.5 * separation, depth_a, depth_b, width);
    let midpoint = potential.midpoint().expect("double well");
    let basis = Arc::new(solve_eigenproblem(&grid, &potential, n_states, constants.mass, constants.hbar)?);
    let system = CombinedSystem::new(basis.clone(), &constants)?.with_rate_scale(rate_scale)?;

    let psi = WaveFunction::gaussian(grid, p.any("packet_center")?, p.positive("packet_sigma")?, p.any("packet_k0")?)?;
    let threshold = p.positive("truncation_threshold")?;
    let projection = project_with(&psi, &basis, threshold, Parallelism::Sequential)?;

    let options = CombinedOptions {
        sample_interval: config.sample_interval,
        gate_epsilon: p.positive("gate_epsilon")?,
        noise: (sigma_e > 0.0).then_some(NoiseSpec { sigma_e, seed: config.seed }),
        split: Some(midpoint),
        truncation_threshold: threshold,
        localization_threshold: Some(p.probability("localization_threshold")?),
    };
    let initial = crate::dissipative::DissipativeState::from_superposition(&projection.state, 0.0)?;
    let run = system.run(&initial, dt, n_steps, &options)?;

    let ground = reconstruct(&SuperpositionState::eigenstate(basis.clone(), 0)?, 0.0);
    let last = run.trace.len() - 1;
    let summary = TwoWellSummary {
        initial: LocalizationMetrics::from_trace(&run.trace, 0).expect("split column present"),
        final_metrics: LocalizationMetrics::from_trace(&run.trace, last).expect("split column present"),
        final_max_population: run.final_state.dominant().1,
        time_to_localization: run.localized_at,
        projection_residual: projection.residual,
        max_rate: system.rates().max_rate(),
        ground_state_prob_left: ground.probability_below(midpoint),
        energies: basis.energies().to_vec(),
    };
    let out = ExperimentOutput::new(
        config,
        run.trace,
        &summary,
        &["p_0", "p_1", "localization_left", "participation_ratio", "E_mean"],
    );
    Ok((out, summary))
}
