//! Repeat-until-success driver for the full entanglement-transfer cycle.

use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{HeraldOutcome, RegisterState};
use crate::hubbard::EffectiveCouplings;
use crate::noise::NoiseModel;
use crate::units::cz_time_ps;

/// Errors from protocol execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegisterError {
    /// An operation was applied out of protocol order.
    ProtocolOrder(&'static str),
    /// Correction requested before the ledger was completed by a herald.
    CalibrationIncomplete,
    /// A parameter violated its domain.
    InvalidParameter(&'static str),
}

impl fmt::Display for RegisterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ProtocolOrder(what) => write!(f, "protocol-order violation: {what}"),
            Self::CalibrationIncomplete => {
                write!(f, "phase ledger incomplete: no heralded success recorded")
            }
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for RegisterError {}

pub type Result<T> = core::result::Result<T, RegisterError>;

/// Fixed inputs of one protocol execution.
#[derive(Clone, Copy, Debug)]
pub struct ProtocolParams {
    /// Optical exchange splitting at photon creation, μeV.
    pub j_o_emit: f64,
    /// Couplings in the entangling configuration.
    pub couplings: EffectiveCouplings,
    /// Duration of the entangling window, ps.
    pub t_cz_ps: f64,
    /// Probability that the erasure photon is collected and detected.
    pub detection_efficiency: f64,
    /// Duration of one full attempt cycle, ps.
    pub cycle_time_ps: f64,
    /// Attempt budget before giving up.
    pub max_attempts: u64,
    /// Probability that optical pumping leaves the qubit in |S⟩; a failed
    /// initialization produces no photon and burns the cycle.
    pub init_fidelity: f64,
    /// Uncompensated memory-qubit phase from finite pulse ramps, radians.
    pub ramp_phase: f64,
    /// Idle time inserted between emission and the preparation pulse, ps.
    pub post_emit_wait_ps: f64,
    /// Idle time between the basis rotation and the herald (memory gated to
    /// degeneracy), ps.
    pub pre_herald_wait_ps: f64,
}

impl ProtocolParams {
    /// Canonical parameters: entangling window πħ/(2·J_OE), emission
    /// splitting consistent with the stored δJ_O, no waits, no ramp error.
    pub fn from_couplings(
        couplings: EffectiveCouplings,
        detection_efficiency: f64,
        cycle_time_ps: f64,
    ) -> Self {
        Self {
            j_o_emit: couplings.j_o - couplings.delta_j_o,
            couplings,
            t_cz_ps: cz_time_ps(couplings.j_oe),
            detection_efficiency,
            cycle_time_ps,
            max_attempts: 1_000_000,
            init_fidelity: 1.0,
            ramp_phase: 0.0,
            post_emit_wait_ps: 0.0,
            pre_herald_wait_ps: 0.0,
        }
    }

    /// Splitting difference that drives the |T₀⟩ branch phase during the
    /// entangling window, μeV.
    pub fn delta_j_o(&self) -> f64 {
        self.couplings.j_o - self.j_o_emit
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.couplings.j_oe > 0.0) {
            return Err(RegisterError::InvalidParameter(
                "ZZ coupling must be positive; relabel memory dots 1 and 2 to flip its sign",
            ));
        }
        if !(self.t_cz_ps > 0.0) {
            return Err(RegisterError::InvalidParameter("t_cz must be positive"));
        }
        if !(0.0..=1.0).contains(&self.detection_efficiency) {
            return Err(RegisterError::InvalidParameter(
                "detection efficiency must lie in [0, 1]",
            ));
        }
        if !(0.0..=1.0).contains(&self.init_fidelity) {
            return Err(RegisterError::InvalidParameter(
                "init fidelity must lie in [0, 1]",
            ));
        }
        if !(self.cycle_time_ps > 0.0) {
            return Err(RegisterError::InvalidParameter(
                "cycle time must be positive",
            ));
        }
        if self.max_attempts == 0 {
            return Err(RegisterError::InvalidParameter(
                "max_attempts must be nonzero",
            ));
        }
        Ok(())
    }
}

/// Terminal outcome of a repeat-until-success run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProtocolOutcome {
    /// A herald fired and the corrected state was delivered.
    Success,
    /// The attempt budget ran out (a failure record, not an error).
    Exhausted,
}

/// Result record of one protocol execution (one shot).
#[derive(Clone, Debug)]
pub struct ProtocolRecord {
    pub seed: u64,
    pub outcome: ProtocolOutcome,
    /// Attempts consumed, including the successful one.
    pub attempts: u64,
    /// Bell fidelity of the corrected state; `None` when exhausted.
    pub fidelity: Option<f64>,
    /// Simulated elapsed time, attempts × cycle time, ps.
    pub elapsed_ps: f64,
    /// Leakage-level population of the delivered state.
    pub leak_population: f64,
    /// Final corrected state on success.
    pub final_state: Option<RegisterState>,
}

/// Runs init → emit → prepare → entangle → rotate → herald until a herald
/// fires or the attempt budget is exhausted, then inverts the tracked local
/// rotation and scores the delivered state against the Bell target.
///
/// A quasi-static noise realization is drawn once per shot and held fixed
/// across attempts; leakage is sampled per cycle. Identical seeds reproduce
/// identical records bit for bit.
pub fn run_protocol(
    params: &ProtocolParams,
    noise: Option<&NoiseModel>,
    seed: u64,
) -> Result<ProtocolRecord> {
    params.validate()?;
    if let Some(model) = noise {
        if model.validate().is_err() {
            return Err(RegisterError::InvalidParameter("invalid noise model"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let realization = noise.map(|m| m.sample_quasistatic(&mut rng));
    let (t0_shift, j_e_shift) = realization
        .as_ref()
        .map(|r| r.exchange_shifts(&params.couplings))
        .unwrap_or((0.0, 0.0));
    let leak_rate = noise.map(|m| m.leakage_rate).unwrap_or(0.0);

    for attempt in 1..=params.max_attempts {
        let mut state = RegisterState::init_saqdm();
        if leak_rate > 0.0 && rng.gen_bool(leak_rate) {
            state = state.leak_memory();
        }
        if params.init_fidelity < 1.0 && !rng.gen_bool(params.init_fidelity) {
            // pumping left the qubit outside |S⟩: no photon this cycle
            continue;
        }
        let state = state
            .emit_entangled_photon()?
            .wait(params.post_emit_wait_ps, params.couplings.j_e)
            .apply_calibrated_re_pulse(params.couplings.j_23)
            .evolve_cz_perturbed(params.t_cz_ps, params, t0_shift, j_e_shift)
            .apply_stark_rotation()
            .wait(params.pre_herald_wait_ps, 0.0);
        let (outcome, state) = state.herald_erasure(&mut rng, params)?;
        if outcome == HeraldOutcome::Success {
            let corrected = state.correct_local_rotation()?;
            return Ok(ProtocolRecord {
                seed,
                outcome: ProtocolOutcome::Success,
                attempts: attempt,
                fidelity: Some(corrected.bell_fidelity()),
                elapsed_ps: attempt as f64 * params.cycle_time_ps,
                leak_population: corrected.leak_population(),
                final_state: Some(corrected),
            });
        }
    }
    Ok(ProtocolRecord {
        seed,
        outcome: ProtocolOutcome::Exhausted,
        attempts: params.max_attempts,
        fidelity: None,
        elapsed_ps: params.max_attempts as f64 * params.cycle_time_ps,
        leak_population: 0.0,
        final_state: None,
    })
}
