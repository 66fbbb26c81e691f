use super::{run, ExperimentConfig, ExperimentOutput, Result};
use crate::par;
use crate::Parallelism;

/// Run independent configurations, in parallel when `mode` allows.
///
/// Results come back in input order. Each run owns its RNG stream (seeded from
/// its own config), so the output does not depend on scheduling.
pub fn run_sweep(configs: &[ExperimentConfig], mode: Parallelism) -> Vec<Result<ExperimentOutput>> {
    par::map_slice(mode, configs, run)
}
