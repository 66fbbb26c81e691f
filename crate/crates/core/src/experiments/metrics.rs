use serde::Serialize;

use crate::trace::Trace;

/// Where the state sits: probability below the well midpoint, effective number
/// of occupied eigenstates, and the most populated one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalizationMetrics {
    pub prob_left: f64,
    pub participation_ratio: f64,
    pub dominant_state: usize,
}

impl LocalizationMetrics {
    /// Read the metrics from row `row` of a combined-evolution trace.
    pub fn from_trace(trace: &Trace, row: usize) -> Option<Self> {
        let get = |name: &str| trace.index_of(name).map(|i| trace.records()[row].values[i]);
        Some(Self {
            prob_left: get("localization_left")?.clamp(0.0, 1.0),
            participation_ratio: get("participation_ratio")?,
            dominant_state: get("dominant_state")? as usize,
        })
    }
}
