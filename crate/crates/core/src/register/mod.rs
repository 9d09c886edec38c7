//! State-vector execution of the heralded entanglement-transfer protocol.
//!
//! The register is the composite system |s⟩_O ⊗ |p⟩_γ ⊗ |q⟩_E with
//! s ∈ {S, T₀} (the optical singlet-triplet qubit), p ∈ {∅, H, V} (the
//! photon slot, with an explicit vacuum symbol so protocol-order violations
//! are detectable) and q ∈ {0, 1, Q} (the memory qubit plus one leakage
//! level). Amplitudes are stored densely as 18 complex numbers.
//!
//! Phase conventions follow the photon-energy frame: the emitted photon's
//! energy compensates the singlet-triplet splitting at emission time, so
//! free evolution after emission advances the |T₀⟩ branch only by the
//! *difference* δJ_O between the splitting during the entangling window and
//! the splitting at photon creation. The residual local rotation by which the
//! heralded state differs from a Bell state is R′ = e^{iη₂Z/2}·R·e^{iη₁Z/2}
//! with η₁ = π/2 − ξ + δJ_O·t/ħ, η₂ = π/2 + J_E·t/ħ and ξ = atan √2; the
//! [`PhaseLedger`] accumulates exactly those angles so the rotation can be
//! undone after a successful herald.

mod protocol;

pub use protocol::{
    run_protocol, ProtocolOutcome, ProtocolParams, ProtocolRecord, RegisterError, Result,
};

use core::fmt;

use num_complex::Complex64;
use rand::Rng;

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;
use crate::units::HBAR_UEV_PS;

/// Optical (spin) qubit basis labels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinState {
    Singlet,
    Triplet,
}

/// Photon slot labels; `Vacuum` means no photon has been emitted yet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhotonState {
    Vacuum,
    Horizontal,
    Vertical,
}

/// Memory-qubit levels plus the exchange-inert leakage state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MemoryState {
    Zero,
    One,
    Leak,
}

pub const DIM: usize = 18;

#[inline]
fn idx(s: usize, p: usize, q: usize) -> usize {
    (s * 3 + p) * 3 + q
}

/// Basis index of |s, p, q⟩.
pub fn basis_index(s: SpinState, p: PhotonState, q: MemoryState) -> usize {
    idx(s as usize, p as usize, q as usize)
}

/// Calibration angle ξ = atan √2 of the memory-qubit preparation pulse.
pub fn xi() -> f64 {
    core::f64::consts::SQRT_2.atan()
}

/// Pulse area J₂₃·τ/ħ that prepares (|0⟩ − e^{−iξ}|1⟩)/√2 from |0⟩.
pub fn calibrated_pulse_area() -> f64 {
    core::f64::consts::PI - 8.0f64.sqrt().atan()
}

/// Accumulated correction angles for inverting the residual local rotation.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PhaseLedger {
    /// ∫ δJ_O dt/ħ accumulated over entangling windows (enters η₁).
    pub t0_phase: f64,
    /// ∫ J_E dt/ħ accumulated over entangling windows (enters η₂).
    pub ze_phase: f64,
    /// Set by a successful herald; required before correction.
    pub heralded: bool,
}

impl PhaseLedger {
    pub fn eta1(&self) -> f64 {
        core::f64::consts::FRAC_PI_2 - xi() + self.t0_phase
    }

    pub fn eta2(&self) -> f64 {
        core::f64::consts::FRAC_PI_2 + self.ze_phase
    }
}

/// Measurement outcome of the heralding step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeraldOutcome {
    /// Erasure photon detected; the memory now holds the entanglement.
    Success,
    /// No detection; the register must be reset and the cycle repeated.
    Failure,
}

/// Complex amplitude vector over the composite basis, with a clock and the
/// phase ledger. A value type: every operation returns a new state.
#[derive(Clone, Debug)]
pub struct RegisterState {
    amps: [Complex64; DIM],
    time_ps: f64,
    ledger: PhaseLedger,
}

impl fmt::Display for RegisterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RegisterState(t = {} ps, norm = {})",
            self.time_ps,
            self.norm()
        )
    }
}

impl RegisterState {
    /// Both molecules initialized: optical qubit pumped into |S⟩, photon slot
    /// empty, memory loaded into |0⟩ by relaxation.
    pub fn init_saqdm() -> Self {
        let mut amps = [Complex64::ZERO; DIM];
        amps[basis_index(SpinState::Singlet, PhotonState::Vacuum, MemoryState::Zero)] =
            Complex64::ONE;
        Self {
            amps,
            time_ps: 0.0,
            ledger: PhaseLedger::default(),
        }
    }

    pub fn amplitude(&self, s: SpinState, p: PhotonState, q: MemoryState) -> Complex64 {
        self.amps[basis_index(s, p, q)]
    }

    /// Overwrites one basis amplitude; callers are responsible for keeping
    /// the state normalized.
    pub fn set_amplitude(
        &mut self,
        s: SpinState,
        p: PhotonState,
        q: MemoryState,
        value: Complex64,
    ) {
        self.amps[basis_index(s, p, q)] = value;
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn time_ps(&self) -> f64 {
        self.time_ps
    }

    pub fn ledger(&self) -> &PhaseLedger {
        &self.ledger
    }

    pub fn ledger_mut(&mut self) -> &mut PhaseLedger {
        &mut self.ledger
    }

    /// Population of the memory leakage level.
    pub fn leak_population(&self) -> f64 {
        let mut p = 0.0;
        for s in 0..2 {
            for ph in 0..3 {
                p += self.amps[idx(s, ph, 2)].norm_sqr();
            }
        }
        p
    }

    fn photon_vacuum_weight(&self) -> f64 {
        let mut p = 0.0;
        for s in 0..2 {
            for q in 0..3 {
                p += self.amps[idx(s, 0, q)].norm_sqr();
            }
        }
        p
    }

    fn singlet_weight(&self) -> f64 {
        let mut p = 0.0;
        for ph in 0..3 {
            for q in 0..3 {
                p += self.amps[idx(0, ph, q)].norm_sqr();
            }
        }
        p
    }

    /// Moves all memory population to the leakage level (hyperfine-driven
    /// escape from the computational subspace, applied once per cycle by the
    /// noise model).
    pub fn leak_memory(mut self) -> Self {
        for s in 0..2 {
            for p in 0..3 {
                let w = (self.amps[idx(s, p, 0)].norm_sqr()
                    + self.amps[idx(s, p, 1)].norm_sqr()
                    + self.amps[idx(s, p, 2)].norm_sqr())
                .sqrt();
                self.amps[idx(s, p, 0)] = Complex64::ZERO;
                self.amps[idx(s, p, 1)] = Complex64::ZERO;
                self.amps[idx(s, p, 2)] = Complex64::new(w, 0.0);
            }
        }
        self
    }

    /// Optical π-pulse plus radiative decay: |S⟩|∅⟩ → (|S⟩|H⟩ + i|T₀⟩|V⟩)/√2.
    ///
    /// The output is an energy eigenstate (the photon energy carries the
    /// splitting), so subsequent idle time adds no relative phase between the
    /// two branches.
    pub fn emit_entangled_photon(mut self) -> Result<Self> {
        let here = self.photon_vacuum_weight() * self.singlet_weight();
        if (here - 1.0).abs() > 1e-9 {
            return Err(RegisterError::ProtocolOrder(
                "photon emission requires the optical qubit in |S⟩ with an empty photon slot",
            ));
        }
        let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
        for q in 0..3 {
            let a = self.amps[idx(0, 0, q)];
            self.amps[idx(0, 0, q)] = Complex64::ZERO;
            self.amps[idx(0, 1, q)] += a * inv_sqrt2;
            self.amps[idx(1, 2, q)] += a * Complex64::new(0.0, inv_sqrt2);
        }
        Ok(self)
    }

    /// Applies a 2×2 unitary to the memory-qubit factor (leak level untouched).
    fn apply_memory_unitary(mut self, m: [[Complex64; 2]; 2]) -> Self {
        for s in 0..2 {
            for p in 0..3 {
                let a0 = self.amps[idx(s, p, 0)];
                let a1 = self.amps[idx(s, p, 1)];
                self.amps[idx(s, p, 0)] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[idx(s, p, 1)] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        self
    }

    /// Exchange pulse on dots 2-3 of the memory molecule for a duration
    /// `tau_ps`: exp[+i·(τJ₂₃/2ħ)·(Z cos 2π/3 + X sin 2π/3)] on {|0⟩, |1⟩}.
    ///
    /// At pulse area J₂₃τ/ħ = π − atan √8 this takes |0⟩ to
    /// (|0⟩ − e^{−iξ}|1⟩)/√2 up to a global phase.
    pub fn apply_re_pulse(self, tau_ps: f64, j_23_uev: f64) -> Self {
        let angle = 0.5 * tau_ps * j_23_uev / HBAR_UEV_PS;
        let mut out = self.apply_memory_unitary(tilted_rotation(angle));
        out.time_ps += tau_ps;
        out
    }

    /// The calibrated preparation pulse as an exact unitary; the clock
    /// advances by the pulse duration implied by `j_23_uev` (zero coupling is
    /// treated as an idealized instantaneous pulse).
    pub fn apply_calibrated_re_pulse(self, j_23_uev: f64) -> Self {
        let area = calibrated_pulse_area();
        let mut out = self.apply_memory_unitary(tilted_rotation(0.5 * area));
        if j_23_uev > 0.0 {
            out.time_ps += area * HBAR_UEV_PS / j_23_uev;
        }
        out
    }

    /// Free evolution outside the entangling window. The photon-energy frame
    /// makes the optical branches degenerate; only a nonzero memory-qubit
    /// splitting advances any relative phase, and none at all once the memory
    /// is gated to the degenerate configuration (j_e = 0).
    pub fn wait(mut self, duration_ps: f64, j_e_uev: f64) -> Self {
        if j_e_uev != 0.0 {
            let half = 0.5 * j_e_uev * duration_ps / HBAR_UEV_PS;
            for s in 0..2 {
                for p in 0..3 {
                    self.amps[idx(s, p, 0)] *= Complex64::cis(half);
                    self.amps[idx(s, p, 1)] *= Complex64::cis(-half);
                }
            }
        }
        self.time_ps += duration_ps;
        self
    }

    /// Entangling-window evolution: diagonal phases from
    /// H = −½(J_E·Z_E + J_OE·Z_O·Z_E) plus the δJ_O phase on the |T₀⟩
    /// branch. The nominal angles are tracked in the ledger.
    pub fn evolve_cz(self, duration_ps: f64, params: &ProtocolParams) -> Self {
        self.evolve_cz_perturbed(duration_ps, params, 0.0, 0.0)
    }

    /// Same as [`Self::evolve_cz`] but with additive shifts on the actual
    /// |T₀⟩-branch rate and memory splitting (quasi-static noise); the ledger
    /// still tracks the nominal values, so untracked shifts surface as
    /// infidelity after correction.
    pub fn evolve_cz_perturbed(
        mut self,
        duration_ps: f64,
        params: &ProtocolParams,
        t0_rate_shift_uev: f64,
        j_e_shift_uev: f64,
    ) -> Self {
        let dt = duration_ps / HBAR_UEV_PS;
        let j_e = params.couplings.j_e + j_e_shift_uev;
        let j_oe = params.couplings.j_oe;
        let d_j = params.delta_j_o() + t0_rate_shift_uev;
        for s in 0..2 {
            let z_s = 1.0 - 2.0 * s as f64;
            for p in 0..3 {
                for q in 0..3 {
                    let energy = if q < 2 {
                        let z_q = 1.0 - 2.0 * q as f64;
                        d_j * s as f64 - 0.5 * (j_e * z_q + j_oe * z_s * z_q)
                    } else {
                        d_j * s as f64
                    };
                    self.amps[idx(s, p, q)] *= Complex64::cis(-energy * dt);
                }
            }
        }
        if params.ramp_phase != 0.0 {
            let half = 0.5 * params.ramp_phase;
            for s in 0..2 {
                for p in 0..3 {
                    self.amps[idx(s, p, 0)] *= Complex64::cis(-half);
                    self.amps[idx(s, p, 1)] *= Complex64::cis(half);
                }
            }
        }
        self.ledger.t0_phase += params.delta_j_o() * dt;
        self.ledger.ze_phase += params.couplings.j_e * dt;
        self.time_ps += duration_ps;
        self
    }

    /// Detuned circularly polarized pulse: exp(−i(π/4)X) on the optical
    /// qubit, i.e. |S⟩ → (|S⟩ − i|T₀⟩)/√2. The memory is simultaneously
    /// gated to its degenerate configuration (callers pass j_e = 0 to any
    /// subsequent [`Self::wait`]).
    pub fn apply_stark_rotation(mut self) -> Self {
        let c = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mi = Complex64::new(0.0, -core::f64::consts::FRAC_1_SQRT_2);
        for p in 0..3 {
            for q in 0..3 {
                let a = self.amps[idx(0, p, q)];
                let b = self.amps[idx(1, p, q)];
                self.amps[idx(0, p, q)] = c * a + mi * b;
                self.amps[idx(1, p, q)] = mi * a + c * b;
            }
        }
        self
    }

    /// Pumped re-excitation with a gated detector: a Bernoulli trial with
    /// success probability η_det·‖P_T₀ψ‖². On success the |T₀⟩ component is
    /// projected out and renormalized, completing the quantum erasure of the
    /// optical qubit; the ledger records the correction angles. On failure
    /// the register is returned unchanged, marked for reset.
    pub fn herald_erasure<R: Rng + ?Sized>(
        mut self,
        rng: &mut R,
        params: &ProtocolParams,
    ) -> Result<(HeraldOutcome, Self)> {
        if self.photon_vacuum_weight() > 1e-9 {
            return Err(RegisterError::ProtocolOrder(
                "heralding requires an emitted photon and the preceding basis rotation",
            ));
        }
        let p_t: f64 = (0..3)
            .flat_map(|p| (0..3).map(move |q| (p, q)))
            .map(|(p, q)| self.amps[idx(1, p, q)].norm_sqr())
            .sum();
        let p_click = params.detection_efficiency * p_t;
        if !rng.gen_bool(p_click.clamp(0.0, 1.0)) {
            return Ok((HeraldOutcome::Failure, self));
        }
        let scale = 1.0 / p_t.sqrt();
        for p in 0..3 {
            for q in 0..3 {
                self.amps[idx(0, p, q)] = Complex64::ZERO;
                self.amps[idx(1, p, q)] *= scale;
            }
        }
        self.ledger.heralded = true;
        Ok((HeraldOutcome::Success, self))
    }

    /// Inverts the tracked residual rotation R′ = e^{iη₂Z/2}·R·e^{iη₁Z/2} on
    /// the memory factor; an ideal run then leaves the canonical Bell state
    /// (|0⟩|H⟩ + |1⟩|V⟩)/√2 up to a global phase.
    pub fn correct_local_rotation(self) -> Result<Self> {
        if !self.ledger.heralded {
            return Err(RegisterError::CalibrationIncomplete);
        }
        let eta1 = self.ledger.eta1();
        let eta2 = self.ledger.eta2();
        let r = tilted_rotation(xi());
        let m = mat_mul(mat_mul(z_rotation(-eta1), dagger(r)), z_rotation(-eta2));
        Ok(self.apply_memory_unitary(m))
    }

    /// Photon ⊗ memory amplitudes in the order (H,0), (H,1), (H,Q),
    /// (V,0), (V,1), (V,Q). Meaningful after a successful herald, when the
    /// optical factor has collapsed onto |T₀⟩.
    pub fn photon_memory_amplitudes(&self) -> [Complex64; 6] {
        let mut out = [Complex64::ZERO; 6];
        for (k, (p, q)) in [(1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2)]
            .into_iter()
            .enumerate()
        {
            out[k] = self.amps[idx(1, p, q)];
        }
        out
    }

    /// Squared overlap with the canonical Bell state (|0⟩|H⟩ + |1⟩|V⟩)/√2 of
    /// the photon ⊗ memory factor.
    pub fn bell_fidelity(&self) -> f64 {
        let a = self.photon_memory_amplitudes();
        let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
        let ov = (a[0] + a[4]) * inv_sqrt2;
        ov.norm_sqr()
    }
}

type Mat2 = [[Complex64; 2]; 2];

/// exp[+i·angle·(Z cos 2π/3 + X sin 2π/3)].
fn tilted_rotation(angle: f64) -> Mat2 {
    let (c_ax, s_ax) = (-0.5, 0.75f64.sqrt());
    let (sin, cos) = (angle.sin(), angle.cos());
    [
        [
            Complex64::new(cos, sin * c_ax),
            Complex64::new(0.0, sin * s_ax),
        ],
        [
            Complex64::new(0.0, sin * s_ax),
            Complex64::new(cos, -sin * c_ax),
        ],
    ]
}

/// exp(+i·angle·Z/2).
fn z_rotation(angle: f64) -> Mat2 {
    [
        [Complex64::cis(0.5 * angle), Complex64::ZERO],
        [Complex64::ZERO, Complex64::cis(-0.5 * angle)],
    ]
}

fn dagger(m: Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[1][0].conj()],
        [m[0][1].conj(), m[1][1].conj()],
    ]
}

fn mat_mul(a: Mat2, b: Mat2) -> Mat2 {
    let mut out = [[Complex64::ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
