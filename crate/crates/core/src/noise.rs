//! Quasi-static error models and echo mitigation.
//!
//! The bath is resampled once per shot and held fixed within it. Hyperfine
//! gradients enter as random frequency shifts of each molecule's qubit
//! coherence (the standard Gaussian quasi-static picture, giving the
//! free-induction envelope exp(−t²σ²/2ħ²) and T₂* = √2·ħ/σ); charge noise
//! enters as detuning shifts that propagate to the exchange splittings
//! through the slope ∂J/∂ε = −sin²(θ/2). Refocusing pulses anticommute with
//! these effective Z-type terms, which is what makes a mid-point echo exact
//! for a static realization.

use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Normal};

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;
use crate::hubbard::{half_angle_weight, EffectiveCouplings};
use crate::register::{run_protocol, ProtocolOutcome, ProtocolParams};
use crate::units::HBAR_UEV_PS;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoiseError {
    InvalidModel(&'static str),
    InvalidSequence(&'static str),
    InvalidParameter(&'static str),
}

impl fmt::Display for NoiseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidModel(what) => write!(f, "invalid noise model: {what}"),
            Self::InvalidSequence(what) => write!(f, "invalid echo sequence: {what}"),
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for NoiseError {}

pub type Result<T> = core::result::Result<T, NoiseError>;

/// Which molecule a single-qubit noise quantity refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseTarget {
    Optical,
    Electrical,
}

/// Quasi-static bath parameters, all rms values in μeV.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoiseModel {
    /// Hyperfine-gradient rms acting on the optical qubit coherence.
    pub hyperfine_sigma_o: f64,
    /// Hyperfine-gradient rms acting on the memory qubit coherence.
    pub hyperfine_sigma_e: f64,
    /// Rms detuning shift of the optical pair.
    pub charge_sigma_o: f64,
    /// Rms detuning shift of dots 1-2.
    pub charge_sigma_e: f64,
    /// Probability per cycle that the memory escapes to the leakage level.
    pub leakage_rate: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let sigmas = [
            self.hyperfine_sigma_o,
            self.hyperfine_sigma_e,
            self.charge_sigma_o,
            self.charge_sigma_e,
        ];
        if sigmas.iter().any(|s| *s < 0.0 || !s.is_finite()) {
            return Err(NoiseError::InvalidModel("rms amplitudes must be >= 0"));
        }
        if !(0.0..=1.0).contains(&self.leakage_rate) {
            return Err(NoiseError::InvalidModel("leakage rate must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Draws one static realization of the bath.
    pub fn sample_quasistatic<R: Rng + ?Sized>(&self, rng: &mut R) -> NoiseRealization {
        let mut draw = |sigma: f64| -> f64 {
            if sigma > 0.0 {
                Normal::new(0.0, sigma).unwrap().sample(rng)
            } else {
                0.0
            }
        };
        NoiseRealization {
            hyperfine_o: draw(self.hyperfine_sigma_o),
            hyperfine_e: draw(self.hyperfine_sigma_e),
            detuning_o: draw(self.charge_sigma_o),
            detuning_e: draw(self.charge_sigma_e),
        }
    }

    /// Gaussian quasi-static T₂* = √2·ħ/σ for the selected molecule, ps
    /// (infinite at zero σ).
    pub fn t2_star_ps(&self, target: NoiseTarget) -> f64 {
        let sigma = match target {
            NoiseTarget::Optical => self.hyperfine_sigma_o,
            NoiseTarget::Electrical => self.hyperfine_sigma_e,
        };
        if sigma > 0.0 {
            core::f64::consts::SQRT_2 * HBAR_UEV_PS / sigma
        } else {
            f64::INFINITY
        }
    }

    /// Ensemble-averaged free-induction-decay envelope exp(−t²σ²/2ħ²) at the
    /// given times, with the closed-form T₂*.
    pub fn dephasing_envelope(&self, target: NoiseTarget, times_ps: &[f64]) -> DephasingCurve {
        let sigma = match target {
            NoiseTarget::Optical => self.hyperfine_sigma_o,
            NoiseTarget::Electrical => self.hyperfine_sigma_e,
        };
        let envelope = times_ps.iter().map(|t| fid_envelope(sigma, *t)).collect();
        DephasingCurve {
            times_ps: times_ps.to_vec(),
            envelope,
            t2_star_ps: self.t2_star_ps(target),
        }
    }
}

/// Closed-form quasi-static coherence envelope exp(−t²σ²/(2ħ²)).
pub fn fid_envelope(sigma_uev: f64, t_ps: f64) -> f64 {
    let x = sigma_uev * t_ps / HBAR_UEV_PS;
    (-0.5 * x * x).exp()
}

/// Free-induction decay curve with its characteristic time.
#[derive(Clone, Debug)]
pub struct DephasingCurve {
    pub times_ps: Vec<f64>,
    pub envelope: Vec<f64>,
    pub t2_star_ps: f64,
}

/// One static draw of the bath, μeV.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NoiseRealization {
    pub hyperfine_o: f64,
    pub hyperfine_e: f64,
    pub detuning_o: f64,
    pub detuning_e: f64,
}

impl NoiseRealization {
    /// Effective shifts seen by the protocol: the |T₀⟩-branch rate picks up
    /// the optical hyperfine shift plus the detuning shift times the exchange
    /// slope −sin²(θ_O/2); the memory splitting likewise. The second-order
    /// response of the ZZ coupling itself is neglected.
    pub fn exchange_shifts(&self, couplings: &EffectiveCouplings) -> (f64, f64) {
        let s_o = half_angle_weight(couplings.theta_o);
        let s_e = half_angle_weight(couplings.theta_e);
        (
            self.hyperfine_o - s_o * self.detuning_o,
            self.hyperfine_e - s_e * self.detuning_e,
        )
    }
}

/// Which molecule's qubit the refocusing pulses act on; pulses are π
/// rotations about the qubit X axis in both cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EchoAxis {
    OpticalX,
    ElectricalX,
}

/// Refocusing-pulse schedule within a free-evolution interval.
#[derive(Clone, Debug)]
pub struct EchoSequence {
    pub pulse_times_ps: Vec<f64>,
    pub axis: EchoAxis,
}

impl EchoSequence {
    /// Single π pulse at the midpoint (Hahn echo).
    pub fn hahn(total_time_ps: f64, axis: EchoAxis) -> Self {
        Self {
            pulse_times_ps: alloc::vec![0.5 * total_time_ps],
            axis,
        }
    }

    /// Evenly spaced pulses at k·T/n, k = 1..n.
    pub fn evenly_spaced(n: usize, total_time_ps: f64, axis: EchoAxis) -> Self {
        let pulse_times_ps = (1..=n)
            .map(|k| k as f64 * total_time_ps / n as f64)
            .collect();
        Self {
            pulse_times_ps,
            axis,
        }
    }

    pub fn validate(&self, total_time_ps: f64) -> Result<()> {
        let t = &self.pulse_times_ps;
        if t.windows(2).any(|w| w[0] > w[1]) {
            return Err(NoiseError::InvalidSequence("pulse times must be sorted"));
        }
        if t.iter().any(|x| *x < 0.0 || *x > total_time_ps) {
            return Err(NoiseError::InvalidSequence("pulse outside the interval"));
        }
        Ok(())
    }

    fn noise_target(&self) -> NoiseTarget {
        match self.axis {
            EchoAxis::OpticalX => NoiseTarget::Optical,
            EchoAxis::ElectricalX => NoiseTarget::Electrical,
        }
    }
}

/// Qubit coherence 2·conj(a₀)·a₁ after free evolution under one static
/// frequency-shift realization with the sequence's π pulses interleaved,
/// starting from |+⟩. A mid-point echo returns exactly 1 for any
/// realization.
pub fn echo_coherence(
    sequence: &EchoSequence,
    total_time_ps: f64,
    freq_shift_uev: f64,
) -> Result<Complex64> {
    sequence.validate(total_time_ps)?;
    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    let mut a = [Complex64::new(inv_sqrt2, 0.0); 2];
    evolve_qubit(&mut a, sequence, total_time_ps, freq_shift_uev, 0.0);
    Ok(2.0 * a[0].conj() * a[1])
}

/// Rotation angle actually realized when a logical X(θ) rotation rides along
/// with the decoupling sequence, starting from |0⟩. Pulsed exchange
/// rotations about the pulse axis commute with the refocusing pulses, so the
/// angle survives while the static gradient cancels.
pub fn echoed_rotation_angle(
    sequence: &EchoSequence,
    total_time_ps: f64,
    freq_shift_uev: f64,
    drive_angle_rad: f64,
) -> Result<f64> {
    sequence.validate(total_time_ps)?;
    let mut a = [Complex64::ONE, Complex64::ZERO];
    evolve_qubit(
        &mut a,
        sequence,
        total_time_ps,
        freq_shift_uev,
        drive_angle_rad,
    );
    Ok(2.0 * a[0].norm().clamp(0.0, 1.0).acos())
}

/// 2×2 evolution: Z-precession segments at rate `freq/ħ`, instantaneous X π
/// pulses at the sequence times, and an optional X(θ) drive pulse at t = 0.
fn evolve_qubit(
    a: &mut [Complex64; 2],
    sequence: &EchoSequence,
    total_time_ps: f64,
    freq_shift_uev: f64,
    drive_angle_rad: f64,
) {
    let x_rot = |a: &mut [Complex64; 2], angle: f64| {
        let (c, s) = ((0.5 * angle).cos(), (0.5 * angle).sin());
        let (a0, a1) = (a[0], a[1]);
        a[0] = Complex64::new(c, 0.0) * a0 + Complex64::new(0.0, -s) * a1;
        a[1] = Complex64::new(0.0, -s) * a0 + Complex64::new(c, 0.0) * a1;
    };
    let z_seg = |a: &mut [Complex64; 2], dt: f64| {
        let half = 0.5 * freq_shift_uev * dt / HBAR_UEV_PS;
        a[0] *= Complex64::cis(-half);
        a[1] *= Complex64::cis(half);
    };
    if drive_angle_rad != 0.0 {
        x_rot(a, drive_angle_rad);
    }
    let mut t = 0.0;
    for &tp in &sequence.pulse_times_ps {
        z_seg(a, tp - t);
        x_rot(a, core::f64::consts::PI);
        t = tp;
    }
    z_seg(a, total_time_ps - t);
}

/// Ensemble echo experiment: mean recovered |+⟩ fidelity (1 + Re⟨c⟩)/2 over
/// `n_shots` static realizations, with its standard error.
pub fn apply_echo<R: Rng + ?Sized>(
    sequence: &EchoSequence,
    total_time_ps: f64,
    model: &NoiseModel,
    n_shots: usize,
    rng: &mut R,
) -> Result<EchoResult> {
    model.validate()?;
    sequence.validate(total_time_ps)?;
    let sigma = match sequence.noise_target() {
        NoiseTarget::Optical => model.hyperfine_sigma_o,
        NoiseTarget::Electrical => model.hyperfine_sigma_e,
    };
    let normal = if sigma > 0.0 {
        Some(Normal::new(0.0, sigma).unwrap())
    } else {
        None
    };
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_shots {
        let h = normal.as_ref().map(|n| n.sample(rng)).unwrap_or(0.0);
        let c = echo_coherence(sequence, total_time_ps, h)?;
        let f = 0.5 * (1.0 + c.re);
        sum += f;
        sum_sq += f * f;
    }
    let n = n_shots as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(EchoResult {
        mean_fidelity: mean,
        stderr: (var / n).sqrt(),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct EchoResult {
    pub mean_fidelity: f64,
    pub stderr: f64,
}

/// Heralded-success-conditioned Bell fidelity statistics over independent
/// protocol shots with per-shot bath realizations.
#[derive(Clone, Copy, Debug)]
pub struct FidelityStats {
    pub mean_fidelity: f64,
    pub stderr: f64,
    pub n_success: usize,
    pub n_shots: usize,
    /// Successful heralds divided by total attempted cycles.
    pub success_per_attempt: f64,
    pub mean_attempts: f64,
    /// Mean leakage-level population of the delivered states.
    pub mean_leak_population: f64,
}

/// Runs `n_shots` protocol executions with seeds `seed..seed+n_shots` and
/// per-shot noise realizations; reports success-conditioned Bell fidelity.
pub fn noisy_protocol_fidelity(
    params: &ProtocolParams,
    model: &NoiseModel,
    n_shots: usize,
    seed: u64,
) -> Result<FidelityStats> {
    if n_shots < 100 {
        return Err(NoiseError::InvalidParameter("need at least 100 shots"));
    }
    model.validate()?;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n_success = 0usize;
    let mut attempts_total = 0u64;
    let mut leak_sum = 0.0;
    for k in 0..n_shots {
        let record = run_protocol(params, Some(model), seed.wrapping_add(k as u64))
            .map_err(|_| NoiseError::InvalidParameter("protocol rejected the parameters"))?;
        attempts_total += record.attempts;
        if record.outcome == ProtocolOutcome::Success {
            let f = record.fidelity.unwrap_or(0.0);
            sum += f;
            sum_sq += f * f;
            leak_sum += record.leak_population;
            n_success += 1;
        }
    }
    let n = n_success.max(1) as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(FidelityStats {
        mean_fidelity: mean,
        stderr: (var / n).sqrt(),
        n_success,
        n_shots,
        success_per_attempt: n_success as f64 / attempts_total.max(1) as f64,
        mean_attempts: attempts_total as f64 / n_shots as f64,
        mean_leak_population: leak_sum / n,
    })
}
