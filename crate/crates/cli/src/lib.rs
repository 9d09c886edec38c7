//! Batch front-end for the simulator: loads scenario documents, dispatches
//! to the computational modules, and writes machine-readable results with a
//! run manifest.
//!
//! One scenario document describes one run; sweeps live inside the document
//! so a manifest always captures the full input. Primary outputs (CSV and
//! JSON-lines) are byte-identical for identical document + seed; the
//! manifest additionally records wall time and is excluded from that
//! guarantee.

// `!(x > 0.0)` guards are deliberate: they reject NaN where `x <= 0.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
mod hubbard_doc;
mod output;
mod run;
mod scenario;
pub mod schema;

pub use error::CliError;
pub use hubbard_doc::HubbardSystemDoc;
pub use run::{run_scenario, validate_scenario, Overrides, RunOutcome};
pub use scenario::{Scenario, ScenarioKind};

/// Heralded-link rate estimate.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct RateEstimate {
    pub attempts_per_s: f64,
    pub successes_per_s: f64,
    pub effective_cycle_ps: f64,
}

/// Attempt and success rates for a repeat-until-success link.
///
/// The cycle cannot be shorter than the detector dead time, and the herald
/// probability is capped at the protocol ceiling of 1/2 before collection
/// losses are applied.
pub fn estimate_rate(
    p_herald: f64,
    collection_efficiency: f64,
    cycle_time_ps: f64,
    detector_dead_time_ps: f64,
) -> Result<RateEstimate, CliError> {
    if !(0.0..=1.0).contains(&p_herald) || !(0.0..=1.0).contains(&collection_efficiency) {
        return Err(CliError::schema("probabilities must lie in [0, 1]"));
    }
    if !(cycle_time_ps > 0.0) || detector_dead_time_ps < 0.0 {
        return Err(CliError::schema("times must be positive"));
    }
    let effective_cycle_ps = cycle_time_ps.max(detector_dead_time_ps);
    let attempts_per_s = 1.0e12 / effective_cycle_ps;
    let successes_per_s = p_herald.min(0.5) * collection_efficiency * attempts_per_s;
    Ok(RateEstimate {
        attempts_per_s,
        successes_per_s,
        effective_cycle_ps,
    })
}
