//! Two-photon interference of the memory-entangled photon with a network
//! photon, and the entanglement fidelity left after correcting the beat
//! phase with jittery detector timestamps.
//!
//! Both photons enter a non-polarizing beam splitter whose outputs pass
//! through polarizing splitters onto four detectors. The canonical herald is
//! an H click at time t₁ on output one and a V click at time t₂ on output
//! two; the other coincidence patterns follow by relabeling. Conditioned on
//! that pattern, the memory and the network degree of freedom are left in
//! the unnormalized two-branch state
//!
//! ```text
//! ¼ ζ_H2(t₁) ζ_V1(t₂) |0⟩|β⟩  +  ¼ ζ_H1(t₁) ζ_V2(t₂) |1⟩|α⟩,
//! ```
//!
//! where ζ_Pj is the mode function of the polarization-P packet entering
//! port j. Packets are lifetime-limited exponentials with a carrier offset:
//! ζ(t) = √(2κ)·e^{−κ(t−τ)}·e^{−iδt} for t > τ.

use core::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp};

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InterferenceError {
    InvalidPacket(&'static str),
    /// Both branch amplitudes vanish at the requested times.
    UndefinedEvent,
    InvalidParameter(&'static str),
    /// Monte Carlo produced no usable events.
    NoValidEvents,
}

impl fmt::Display for InterferenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidPacket(what) => write!(f, "invalid wavepacket: {what}"),
            Self::UndefinedEvent => {
                write!(
                    f,
                    "conditional state undefined: both branch amplitudes vanish"
                )
            }
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Self::NoValidEvents => write!(f, "sampling produced no valid events"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for InterferenceError {}

pub type Result<T> = core::result::Result<T, InterferenceError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarization {
    H,
    V,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Port {
    One,
    Two,
}

/// Spatio-temporal single-photon mode: exponential envelope with a carrier
/// offset, normalized to ∫|ζ|² dt = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavepacket {
    pub polarization: Polarization,
    pub port: Port,
    /// Carrier offset δ from the common reference frequency, rad/ps.
    pub carrier_offset: f64,
    /// Field decay rate κ, 1/ps.
    pub decay: f64,
    /// Arrival time τ, ps.
    pub arrival: f64,
}

impl Wavepacket {
    pub fn new(
        polarization: Polarization,
        port: Port,
        carrier_offset: f64,
        decay: f64,
        arrival: f64,
    ) -> Result<Self> {
        if !(decay > 0.0) || !decay.is_finite() {
            return Err(InterferenceError::InvalidPacket(
                "decay rate must be positive",
            ));
        }
        Ok(Self {
            polarization,
            port,
            carrier_offset,
            decay,
            arrival,
        })
    }

    /// Complex mode function at time `t_ps` (zero before arrival).
    pub fn mode(&self, t_ps: f64) -> Complex64 {
        if t_ps <= self.arrival {
            return Complex64::ZERO;
        }
        let magnitude = (2.0 * self.decay).sqrt() * (-self.decay * (t_ps - self.arrival)).exp();
        magnitude * Complex64::cis(-self.carrier_offset * t_ps)
    }
}

/// The four packets meeting at the beam splitter, one per (polarization,
/// input port) pair.
#[derive(Clone, Copy, Debug)]
pub struct PacketSet {
    pub h1: Wavepacket,
    pub h2: Wavepacket,
    pub v1: Wavepacket,
    pub v2: Wavepacket,
}

impl PacketSet {
    pub fn new(h1: Wavepacket, h2: Wavepacket, v1: Wavepacket, v2: Wavepacket) -> Result<Self> {
        for (packet, pol, port) in [
            (&h1, Polarization::H, Port::One),
            (&h2, Polarization::H, Port::Two),
            (&v1, Polarization::V, Port::One),
            (&v2, Polarization::V, Port::Two),
        ] {
            if packet.polarization != pol || packet.port != port {
                return Err(InterferenceError::InvalidPacket(
                    "packet labels do not match their slots",
                ));
            }
        }
        Ok(Self { h1, h2, v1, v2 })
    }

    /// Degenerate-carrier set with per-port decay rates and arrivals.
    #[allow(clippy::too_many_arguments)]
    pub fn per_port(
        kappa1: f64,
        kappa2: f64,
        tau1: f64,
        tau2: f64,
        delta_h1: f64,
        delta_h2: f64,
        delta_v1: f64,
        delta_v2: f64,
    ) -> Result<Self> {
        Self::new(
            Wavepacket::new(Polarization::H, Port::One, delta_h1, kappa1, tau1)?,
            Wavepacket::new(Polarization::H, Port::Two, delta_h2, kappa2, tau2)?,
            Wavepacket::new(Polarization::V, Port::One, delta_v1, kappa1, tau1)?,
            Wavepacket::new(Polarization::V, Port::Two, delta_v2, kappa2, tau2)?,
        )
    }
}

/// Unnormalized amplitudes of the two conditional branches.
#[derive(Clone, Copy, Debug)]
pub struct ConditionalAmplitudes {
    /// Memory |0⟩ branch, ¼·ζ_H2(t₁)·ζ_V1(t₂).
    pub branch_zero: Complex64,
    /// Memory |1⟩ branch, ¼·ζ_H1(t₁)·ζ_V2(t₂).
    pub branch_one: Complex64,
}

impl ConditionalAmplitudes {
    /// True when neither detector time lies inside any contributing packet.
    pub fn is_null(&self) -> bool {
        self.branch_zero == Complex64::ZERO && self.branch_one == Complex64::ZERO
    }
}

/// Conditional two-branch state for an (H at out-1, t₁; V at out-2, t₂)
/// coincidence. Deliberately not normalized: the squared norm is the
/// coincidence density for this pattern at these times.
pub fn conditional_state(t1_ps: f64, t2_ps: f64, packets: &PacketSet) -> ConditionalAmplitudes {
    ConditionalAmplitudes {
        branch_zero: 0.25 * packets.h2.mode(t1_ps) * packets.v1.mode(t2_ps),
        branch_one: 0.25 * packets.h1.mode(t1_ps) * packets.v2.mode(t2_ps),
    }
}

/// Correctable relative phase φ₋ = (δ_H1 − δ_H2)·t₁/2 + (δ_V2 − δ_V1)·t₂/2.
pub fn relative_phase(t1_ps: f64, t2_ps: f64, packets: &PacketSet) -> f64 {
    0.5 * (packets.h1.carrier_offset - packets.h2.carrier_offset) * t1_ps
        + 0.5 * (packets.v2.carrier_offset - packets.v1.carrier_offset) * t2_ps
}

/// Companion overall phase φ₊ (irrelevant to fidelity, reported for
/// completeness) for a common carrier `omega` rad/ps.
pub fn overall_phase(t1_ps: f64, t2_ps: f64, packets: &PacketSet, omega: f64) -> f64 {
    (omega + 0.5 * (packets.h1.carrier_offset + packets.h2.carrier_offset)) * t1_ps
        + (omega + 0.5 * (packets.v1.carrier_offset + packets.v2.carrier_offset)) * t2_ps
}

/// Wavepacket-overlap factor G = 2|A₀A₁| / (|A₀|² + |A₁|²) ∈ (0, 1].
///
/// Equals 1 iff the branch magnitudes agree; for per-port exponential
/// packets it reduces to sech[(κ₂ − κ₁)(t₂ − t₁)] on the common support,
/// independent of the arrival times.
pub fn g_factor(t1_ps: f64, t2_ps: f64, packets: &PacketSet) -> Result<f64> {
    let amps = conditional_state(t1_ps, t2_ps, packets);
    if amps.is_null() {
        return Err(InterferenceError::UndefinedEvent);
    }
    let a = amps.branch_zero.norm();
    let b = amps.branch_one.norm();
    Ok(2.0 * a * b / (a * a + b * b))
}

/// Detector timing model: rms timestamp errors per output arm, an overall
/// efficiency (pure event-rate scale), and an optional digitizer resolution
/// that quantizes the measured times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetectorModel {
    pub jitter1_ps: f64,
    pub jitter2_ps: f64,
    pub efficiency: f64,
    pub time_resolution_ps: f64,
}

impl DetectorModel {
    pub fn ideal() -> Self {
        Self {
            jitter1_ps: 0.0,
            jitter2_ps: 0.0,
            efficiency: 1.0,
            time_resolution_ps: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.jitter1_ps < 0.0 || self.jitter2_ps < 0.0 || self.time_resolution_ps < 0.0 {
            return Err(InterferenceError::InvalidParameter(
                "timing scales must be >= 0",
            ));
        }
        if !(0.0..=1.0).contains(&self.efficiency) {
            return Err(InterferenceError::InvalidParameter(
                "efficiency must lie in [0, 1]",
            ));
        }
        Ok(())
    }
}

/// Monte Carlo mean and standard error.
#[derive(Clone, Copy, Debug)]
pub struct FidelityEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: usize,
}

/// Monte Carlo estimate of the Bell fidelity after phase correction with
/// jittery timestamps.
///
/// Detection times are drawn from the branch-summed coincidence density
/// (an equal mixture of the two branches' exponential products), Gaussian
/// timestamp errors of rms σ_j are added, the beat phase is corrected using
/// the noisy times, and the overlap with the Bell target is averaged. With
/// exact timestamps the correction removes the relative phase completely and
/// the per-event fidelity is ½(1 + G).
pub fn mean_bell_fidelity<R: Rng + ?Sized>(
    packets: &PacketSet,
    detectors: &DetectorModel,
    n_samples: usize,
    rng: &mut R,
) -> Result<FidelityEstimate> {
    if n_samples < 1_000 {
        return Err(InterferenceError::InvalidParameter(
            "need at least 1000 samples",
        ));
    }
    detectors.validate()?;
    let exp_h1 = Exp::new(2.0 * packets.h1.decay).unwrap();
    let exp_h2 = Exp::new(2.0 * packets.h2.decay).unwrap();
    let exp_v1 = Exp::new(2.0 * packets.v1.decay).unwrap();
    let exp_v2 = Exp::new(2.0 * packets.v2.decay).unwrap();
    let d_h = packets.h2.carrier_offset - packets.h1.carrier_offset;
    let d_v = packets.v1.carrier_offset - packets.v2.carrier_offset;

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut n_valid = 0usize;
    for _ in 0..n_samples {
        // branch-summed density: equal-weight mixture of the two products
        let (t1, t2) = if rng.gen_bool(0.5) {
            (
                packets.h2.arrival + exp_h2.sample(rng),
                packets.v1.arrival + exp_v1.sample(rng),
            )
        } else {
            (
                packets.h1.arrival + exp_h1.sample(rng),
                packets.v2.arrival + exp_v2.sample(rng),
            )
        };
        let amps = conditional_state(t1, t2, packets);
        if amps.is_null() {
            continue;
        }
        let m1 = measured_time(t1, detectors.jitter1_ps, detectors.time_resolution_ps, rng);
        let m2 = measured_time(t2, detectors.jitter2_ps, detectors.time_resolution_ps, rng);
        // undo the dynamical phase of branch one relative to branch zero,
        // arg(A₁/A₀) = (δ_H2 − δ_H1)·t₁ + (δ_V1 − δ_V2)·t₂, using the
        // measured times
        let corrected_one = amps.branch_one * Complex64::cis(-(d_h * m1 + d_v * m2));
        let norm_sq = amps.branch_zero.norm_sqr() + amps.branch_one.norm_sqr();
        let overlap = (amps.branch_zero + corrected_one).norm_sqr() / (2.0 * norm_sq);
        sum += overlap;
        sum_sq += overlap * overlap;
        n_valid += 1;
    }
    if n_valid == 0 {
        return Err(InterferenceError::NoValidEvents);
    }
    let n = n_valid as f64;
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok(FidelityEstimate {
        mean,
        stderr: (var / n).sqrt(),
        n: n_valid,
    })
}

fn measured_time<R: Rng + ?Sized>(t: f64, jitter: f64, resolution: f64, rng: &mut R) -> f64 {
    let noisy = if jitter > 0.0 {
        let gauss: f64 = rand_distr::StandardNormal.sample(rng);
        t + jitter * gauss
    } else {
        t
    };
    if resolution > 0.0 {
        (noisy / resolution).round() * resolution
    } else {
        noisy
    }
}

/// Closed-form jitter factor exp(−Δδ_H²σ₁²/2 − Δδ_V²σ₂²/2).
pub fn jitter_factor(packets: &PacketSet, detectors: &DetectorModel) -> f64 {
    let d_h = packets.h1.carrier_offset - packets.h2.carrier_offset;
    let d_v = packets.v1.carrier_offset - packets.v2.carrier_offset;
    (-0.5 * d_h * d_h * detectors.jitter1_ps * detectors.jitter1_ps
        - 0.5 * d_v * d_v * detectors.jitter2_ps * detectors.jitter2_ps)
        .exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    fn set(kappa1: f64, kappa2: f64, tau1: f64, tau2: f64) -> PacketSet {
        PacketSet::per_port(kappa1, kappa2, tau1, tau2, 0.0, 0.0, 0.0, 0.0).unwrap()
    }

    #[test]
    fn identical_packets_give_equal_branches() {
        let p = set(0.5, 0.5, 0.0, 0.0);
        let amps = conditional_state(1.3, 2.9, &p);
        assert_relative_eq!(
            amps.branch_zero.norm(),
            amps.branch_one.norm(),
            epsilon = 1e-15
        );
        assert_relative_eq!(g_factor(1.3, 2.9, &p).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn causality_zeroes_a_branch() {
        // port-2 packets arrive late: t1 before their arrival kills branch 0
        let p = set(0.5, 0.5, 0.0, 5.0);
        let amps = conditional_state(3.0, 9.0, &p);
        assert_eq!(amps.branch_zero, Complex64::ZERO);
        assert!(amps.branch_one.norm() > 0.0);
        // before every arrival the event is undefined
        let early = conditional_state(-1.0, -2.0, &p);
        assert!(early.is_null());
        assert!(matches!(
            g_factor(-1.0, -2.0, &p),
            Err(InterferenceError::UndefinedEvent)
        ));
    }

    #[test]
    fn amplitudes_match_direct_mode_products() {
        let p = PacketSet::per_port(0.31, 0.57, 0.4, 1.1, 0.02, -0.04, 0.01, 0.07).unwrap();
        let (t1, t2) = (3.7, 6.1);
        let amps = conditional_state(t1, t2, &p);
        assert_eq!(amps.branch_zero, 0.25 * p.h2.mode(t1) * p.v1.mode(t2));
        assert_eq!(amps.branch_one, 0.25 * p.h1.mode(t1) * p.v2.mode(t2));
    }

    #[test]
    fn relative_phase_formula() {
        let p = PacketSet::per_port(0.5, 0.5, 0.0, 0.0, 0.01, 0.0, 0.03, 0.03).unwrap();
        // (δ_H1 − δ_H2)·t1/2 with equal V offsets
        assert_relative_eq!(relative_phase(100.0, 57.0, &p), 0.5);
        // linear in t1 and t2 separately
        let base = relative_phase(10.0, 20.0, &p);
        assert_relative_eq!(
            relative_phase(20.0, 20.0, &p) - base,
            base - relative_phase(0.0, 20.0, &p),
            epsilon = 1e-12
        );
        // degenerate packets: zero everywhere
        let d = set(0.5, 0.7, 0.0, 0.0);
        assert_eq!(relative_phase(123.0, 456.0, &d), 0.0);
    }

    #[test]
    fn g_reduces_to_sech_for_exponential_packets() {
        let (k1, k2) = (0.4, 0.9);
        let p = set(k1, k2, 0.3, 0.8);
        for (t1, t2) in [(1.0, 1.5), (2.0, 7.0), (5.5, 2.2)] {
            let g = g_factor(t1, t2, &p).unwrap();
            assert_relative_eq!(g, sech((k2 - k1) * (t2 - t1)), epsilon = 1e-12);
        }
        // equal rates: G = 1 on the whole support
        let eq = set(0.6, 0.6, 0.1, 0.9);
        assert_relative_eq!(g_factor(1.0, 4.0, &eq).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn arrival_jitter_cancels_in_g() {
        let (k1, k2) = (0.4, 0.9);
        let (t1, t2) = (6.0, 7.5);
        let g_ref = g_factor(t1, t2, &set(k1, k2, 0.0, 0.0)).unwrap();
        for (tau1, tau2) in [(0.5, 1.0), (2.0, 0.1), (3.0, 3.0)] {
            let g = g_factor(t1, t2, &set(k1, k2, tau1, tau2)).unwrap();
            assert_relative_eq!(g, g_ref, epsilon = 1e-12);
        }
    }

    #[test]
    fn perfect_timing_removes_the_relative_phase() {
        let p = PacketSet::per_port(0.5, 0.5, 0.0, 0.0, 0.08, -0.03, 0.02, -0.06).unwrap();
        let (t1, t2) = (2.5, 4.0);
        let amps = conditional_state(t1, t2, &p);
        let d_h = p.h2.carrier_offset - p.h1.carrier_offset;
        let d_v = p.v1.carrier_offset - p.v2.carrier_offset;
        let corrected = amps.branch_one * Complex64::cis(-(d_h * t1 + d_v * t2));
        let cross = amps.branch_zero.conj() * corrected;
        assert!(cross.im.abs() < 1e-12 * cross.norm());
    }

    #[test]
    fn ideal_fidelity_is_unity_for_degenerate_equal_packets() {
        let p = set(0.5, 0.5, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let est = mean_bell_fidelity(&p, &DetectorModel::ideal(), 20_000, &mut rng).unwrap();
        assert!(est.mean > 1.0 - 1e-12);
    }

    #[test]
    fn known_jitter_point_reproduces_the_exponential_factor() {
        // (δ_H1 − δ_H2)·σ₁ = 2 with κ equal: F = ½(1 + e^{−2})
        let p = PacketSet::per_port(0.5, 0.5, 0.0, 0.0, 0.2, 0.0, 0.0, 0.0).unwrap();
        let det = DetectorModel {
            jitter1_ps: 10.0,
            jitter2_ps: 0.0,
            efficiency: 1.0,
            time_resolution_ps: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let est = mean_bell_fidelity(&p, &det, 200_000, &mut rng).unwrap();
        let closed = 0.5 * (1.0 + (-2.0f64).exp());
        assert!(
            (est.mean - closed).abs() < 3.0 * est.stderr,
            "{} vs {closed}",
            est.mean
        );
        assert!((closed - 0.5677).abs() < 1e-4);
    }

    #[test]
    fn fidelity_estimate_never_drops_below_half_within_error() {
        let p = PacketSet::per_port(0.3, 0.9, 0.0, 2.0, 0.5, -0.5, 0.3, -0.1).unwrap();
        let det = DetectorModel {
            jitter1_ps: 50.0,
            jitter2_ps: 80.0,
            efficiency: 0.7,
            time_resolution_ps: 0.0,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let est = mean_bell_fidelity(&p, &det, 50_000, &mut rng).unwrap();
        assert!(est.mean >= 0.5 - 3.0 * est.stderr);
        assert!(est.mean <= 1.0);
    }

    #[test]
    fn too_few_samples_is_an_error() {
        let p = set(0.5, 0.5, 0.0, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        assert!(mean_bell_fidelity(&p, &DetectorModel::ideal(), 10, &mut rng).is_err());
    }

    #[test]
    fn mismatched_labels_are_rejected() {
        let a = Wavepacket::new(Polarization::H, Port::One, 0.0, 0.5, 0.0).unwrap();
        let b = Wavepacket::new(Polarization::H, Port::Two, 0.0, 0.5, 0.0).unwrap();
        let c = Wavepacket::new(Polarization::V, Port::One, 0.0, 0.5, 0.0).unwrap();
        assert!(PacketSet::new(a, b, c, c).is_err());
        assert!(Wavepacket::new(Polarization::H, Port::One, 0.0, 0.0, 0.0).is_err());
    }
}
