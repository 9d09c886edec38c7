//! Tight-binding/Coulomb model of the two dot molecules and the derived
//! qubit-level coupling constants.
//!
//! The model has five dots: the vertically stacked optical pair (top `T`,
//! bottom `B`) and the gated triple (`1`, `2`, `3`). Electrons tunnel only
//! within a molecule; the molecules talk to each other exclusively through
//! the direct Coulomb matrix elements `U_jk`.
//!
//! Detunings are charge-configuration energy differences and are stored as
//! explicit inputs rather than being re-derived from the matrices:
//! `ε_O = E(0,2) − E(1,1)` for the optical pair, `ε_E = E(2,0,1) − E(1,1,1)`
//! and `ε_23 = E(1,0,2) − E(1,1,1)` for the triple. On-site energies are
//! chosen to realize exactly these differences, so the diagonal of the tunnel
//! matrix must be zero.

mod exact;

pub use exact::{
    coupled_zz_coupling, exact_diagonalize, quartet_reference, SectorConfig, SectorSpectrum,
    ZzLevels,
};

use alloc::vec::Vec;
use core::fmt;

use crate::fmath::erf;
#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;
use crate::units::COULOMB_UEV_NM;

/// Errors from model construction and the coupling operations.
#[derive(Clone, Debug, PartialEq)]
pub enum HubbardError {
    /// A parameter violated its domain (message names the offender).
    InvalidParameter(&'static str),
    /// Coulomb integral of two zero-extent densities at zero separation.
    DegenerateGeometry,
    /// The system is missing dots or matrix elements required by the
    /// requested operation.
    IncompleteModel(&'static str),
    /// A system-level invariant failed at construction.
    InvalidSystem(&'static str),
    /// A charge/spin sector exceeded the supported dimension.
    DimensionOverflow { dimension: usize },
}

impl fmt::Display for HubbardError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Self::DegenerateGeometry => {
                write!(
                    f,
                    "coulomb integral diverges for overlapping zero-width orbitals"
                )
            }
            Self::IncompleteModel(what) => write!(f, "incomplete model: {what}"),
            Self::InvalidSystem(what) => write!(f, "invalid system: {what}"),
            Self::DimensionOverflow { dimension } => {
                write!(
                    f,
                    "sector dimension {dimension} exceeds the supported maximum of 15"
                )
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for HubbardError {}

pub type Result<T> = core::result::Result<T, HubbardError>;

/// The five dots of the register, with their molecule membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DotId {
    /// Top dot of the optical molecule.
    T,
    /// Bottom dot of the optical molecule.
    B,
    /// First dot of the electrical molecule (doublon site of the memory qubit).
    D1,
    /// Second dot of the electrical molecule.
    D2,
    /// Third dot of the electrical molecule.
    D3,
}

impl DotId {
    pub const ALL: [DotId; 5] = [DotId::T, DotId::B, DotId::D1, DotId::D2, DotId::D3];

    pub(crate) fn index(self) -> usize {
        match self {
            DotId::T => 0,
            DotId::B => 1,
            DotId::D1 => 2,
            DotId::D2 => 3,
            DotId::D3 => 4,
        }
    }

    pub fn molecule(self) -> Molecule {
        match self {
            DotId::T | DotId::B => Molecule::Optical,
            _ => Molecule::Electrical,
        }
    }
}

/// Which dot molecule an operation addresses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Molecule {
    /// The photon-emitting double dot (two electrons).
    Optical,
    /// The gated triple dot (three electrons).
    Electrical,
}

/// Ground-state envelope of one dot: a normalized anisotropic Gaussian.
///
/// `widths` are the standard deviations of the charge density |φ|² along the
/// three axes, in nm. Point charges are the `widths → 0` limit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Orbital {
    center: [f64; 3],
    widths: [f64; 3],
}

impl Orbital {
    pub fn new(center: [f64; 3], widths: [f64; 3]) -> Result<Self> {
        if widths.iter().any(|w| !(*w > 0.0) || !w.is_finite()) {
            return Err(HubbardError::InvalidParameter(
                "orbital widths must be positive",
            ));
        }
        if center.iter().any(|c| !c.is_finite()) {
            return Err(HubbardError::InvalidParameter(
                "orbital center must be finite",
            ));
        }
        Ok(Self { center, widths })
    }

    pub fn isotropic(center: [f64; 3], sigma: f64) -> Result<Self> {
        Self::new(center, [sigma; 3])
    }

    pub fn center(&self) -> [f64; 3] {
        self.center
    }

    pub fn widths(&self) -> [f64; 3] {
        self.widths
    }
}

/// Pair Coulomb energy of two point charges a distance `separation_nm` apart
/// in a medium of relative permittivity `dielectric`, in μeV.
pub fn point_charge_energy(separation_nm: f64, dielectric: f64) -> f64 {
    COULOMB_UEV_NM / (dielectric * separation_nm)
}

/// Direct Coulomb matrix element of two Gaussian charge densities, in μeV.
///
/// For densities with combined per-axis variance s² and center offset d the
/// element reduces to erf(|d|/√(2s²))/|d| times the Coulomb constant when the
/// combined covariance is isotropic; the anisotropic case falls back to a
/// 1-D integral representation evaluated by adaptive quadrature. Symmetric in
/// its arguments, strictly positive, and finite for any positive widths.
pub fn coulomb_integral(a: &Orbital, b: &Orbital, dielectric: f64) -> Result<f64> {
    if !(dielectric > 0.0) {
        return Err(HubbardError::InvalidParameter(
            "dielectric must be positive",
        ));
    }
    let d = [
        a.center[0] - b.center[0],
        a.center[1] - b.center[1],
        a.center[2] - b.center[2],
    ];
    let s2 = [
        a.widths[0] * a.widths[0] + b.widths[0] * b.widths[0],
        a.widths[1] * a.widths[1] + b.widths[1] * b.widths[1],
        a.widths[2] * a.widths[2] + b.widths[2] * b.widths[2],
    ];
    let value = gaussian_coulomb(d, s2)?;
    let result = COULOMB_UEV_NM / dielectric * value;
    if !result.is_finite() {
        return Err(HubbardError::DegenerateGeometry);
    }
    Ok(result)
}

/// ⟨1/|r−r′|⟩ for a relative coordinate that is Gaussian with mean `d` and
/// diagonal covariance `s2`, in 1/nm.
fn gaussian_coulomb(d: [f64; 3], s2: [f64; 3]) -> Result<f64> {
    let dist2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
    let iso = (s2[0] - s2[1]).abs() <= 1e-12 * (s2[0] + s2[1])
        && (s2[0] - s2[2]).abs() <= 1e-12 * (s2[0] + s2[2]);
    if iso {
        let s2m = (s2[0] + s2[1] + s2[2]) / 3.0;
        let dist = dist2.sqrt();
        if s2m == 0.0 {
            if dist == 0.0 {
                return Err(HubbardError::DegenerateGeometry);
            }
            return Ok(1.0 / dist);
        }
        if dist == 0.0 {
            // limit of erf(x)/x as x -> 0 with x = dist/sqrt(2 s2m)
            return Ok((2.0 / core::f64::consts::PI).sqrt() / s2m.sqrt());
        }
        return Ok(erf(dist / (2.0 * s2m).sqrt()) / dist);
    }
    if dist2 == 0.0 && s2.contains(&0.0) {
        return Err(HubbardError::DegenerateGeometry);
    }
    // 1/|u| = (2/√π) ∫₀^∞ exp(−t²u²) dt, Gaussian-averaged axis by axis,
    // integrated over θ with t = tan θ.
    let integrand = |theta: f64| -> f64 {
        let t = theta.tan();
        let t2 = t * t;
        let mut f = 1.0;
        let mut expo = 0.0;
        for i in 0..3 {
            let g = 1.0 + 2.0 * t2 * s2[i];
            f /= g.sqrt();
            expo -= t2 * d[i] * d[i] / g;
        }
        let sec2 = 1.0 + t2;
        f * expo.exp() * sec2
    };
    let val = adaptive_simpson(&integrand, 0.0, core::f64::consts::FRAC_PI_2, 1e-12, 24);
    Ok(2.0 / core::f64::consts::PI.sqrt() * val)
}

/// Adaptive Simpson quadrature with absolute/relative tolerance `tol`.
fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol * (1.0 + (left + right).abs()) {
            left + right + delta / 15.0
        } else {
            recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)
        }
    }
    let m = 0.5 * (a + b);
    let fa = f(a);
    let fb = f(b);
    let fm = f(m);
    let whole = simpson(a, fa, b, fb, fm);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, depth)
}

/// Mixing angle of the hybridized singlet, θ = atan2(2t, ε) ∈ (0, π).
///
/// sin²(θ/2) is the doubly occupied weight: θ → 0 in the decoupled (1,1)
/// limit (ε → +∞) and θ → π when the singlet is entirely the doublon
/// configuration (ε → −∞).
pub fn mixing_angle(epsilon_uev: f64, tunnel_uev: f64) -> Result<f64> {
    if !(tunnel_uev > 0.0) {
        return Err(HubbardError::InvalidParameter(
            "tunnel coupling must be positive",
        ));
    }
    Ok((2.0 * tunnel_uev).atan2(epsilon_uev))
}

/// Singlet-triplet exchange splitting J(ε, t) = (√(ε² + 4t²) − ε)/2, μeV.
///
/// Strictly positive and monotone decreasing in ε; J = t exactly at ε = 0.
/// The ε > 0 branch is evaluated as 2t²/(√(ε² + 4t²) + ε) to avoid
/// catastrophic cancellation deep in the (1,1) regime.
pub fn exchange_energy(epsilon_uev: f64, tunnel_uev: f64) -> Result<f64> {
    if !(tunnel_uev > 0.0) {
        return Err(HubbardError::InvalidParameter(
            "tunnel coupling must be positive",
        ));
    }
    let r = epsilon_uev.hypot(2.0 * tunnel_uev);
    if epsilon_uev > 0.0 {
        Ok(2.0 * tunnel_uev * tunnel_uev / (r + epsilon_uev))
    } else {
        Ok(0.5 * (r - epsilon_uev))
    }
}

/// Tunnel-coupling modulation ratio from a barrier-height change, per the
/// WKB form t ∝ exp(−πχ/C): returns t(χ+δχ)/t(χ) = exp(−π·δχ/C).
///
/// The base barrier height cancels in the ratio; it is accepted so callers
/// can keep the (χ, δχ) pair together.
pub fn wkb_barrier_modulation(
    _chi_uev: f64,
    curvature_uev: f64,
    delta_chi_uev: f64,
) -> Result<f64> {
    if !(curvature_uev > 0.0) {
        return Err(HubbardError::InvalidParameter(
            "barrier curvature must be positive",
        ));
    }
    Ok((-core::f64::consts::PI * delta_chi_uev / curvature_uev).exp())
}

/// Full five-dot model: orbitals, tunnel and Coulomb matrices, detunings.
#[derive(Clone, Debug)]
pub struct HubbardSystem {
    orbitals: [Option<Orbital>; 5],
    tunnel: [[f64; 5]; 5],
    coulomb: [[f64; 5]; 5],
    detuning_o: f64,
    detuning_e: f64,
    detuning_23: f64,
    dielectric: f64,
}

impl HubbardSystem {
    pub fn builder() -> HubbardSystemBuilder {
        HubbardSystemBuilder::default()
    }

    pub fn has_dot(&self, dot: DotId) -> bool {
        self.orbitals[dot.index()].is_some()
    }

    pub fn orbital(&self, dot: DotId) -> Option<&Orbital> {
        self.orbitals[dot.index()].as_ref()
    }

    /// Single-particle tunnel matrix element between two dots, μeV.
    pub fn tunnel(&self, a: DotId, b: DotId) -> f64 {
        self.tunnel[a.index()][b.index()]
    }

    /// Direct Coulomb matrix element between two dots (on-site for a == b), μeV.
    pub fn coulomb(&self, a: DotId, b: DotId) -> f64 {
        self.coulomb[a.index()][b.index()]
    }

    /// Detuning ε_O = E(0,2) − E(1,1) of the optical pair, μeV.
    pub fn detuning_o(&self) -> f64 {
        self.detuning_o
    }

    /// Detuning ε_E = E(2,0,1) − E(1,1,1) of dots 1-2, μeV.
    pub fn detuning_e(&self) -> f64 {
        self.detuning_e
    }

    /// Detuning ε_23 = E(1,0,2) − E(1,1,1) of dots 2-3, μeV.
    pub fn detuning_23(&self) -> f64 {
        self.detuning_23
    }

    pub fn dielectric(&self) -> f64 {
        self.dielectric
    }

    /// Singlet-sector tunnel coupling of a dot pair: the matrix element
    /// between the (1,1) singlet and the doubly occupied singlet is √2 times
    /// the single-particle element.
    pub fn singlet_coupling(&self, a: DotId, b: DotId) -> f64 {
        core::f64::consts::SQRT_2 * self.tunnel(a, b)
    }

    fn require(&self, dots: &[DotId], what: &'static str) -> Result<()> {
        if dots.iter().all(|d| self.has_dot(*d)) {
            Ok(())
        } else {
            Err(HubbardError::IncompleteModel(what))
        }
    }

    /// Returns a copy with shifted detunings (used by quasi-static noise).
    pub fn with_detuning_shifts(&self, d_eps_o: f64, d_eps_e: f64) -> Self {
        let mut out = self.clone();
        out.detuning_o += d_eps_o;
        out.detuning_e += d_eps_e;
        out
    }

    /// Signed dipole-dipole energy Δ = U_T1 − U_T2 − U_B1 + U_B2, μeV.
    ///
    /// This is the part of the cross-molecule Coulomb energy that depends on
    /// the charge dipole of both molecules at once; it flips sign when dots
    /// 1 and 2 swap labels.
    pub fn dipole_dipole_shift(&self) -> Result<f64> {
        self.require(&DotId::ALL, "dipole-dipole shift needs all five dots")?;
        Ok(self.coulomb(DotId::T, DotId::D1)
            - self.coulomb(DotId::T, DotId::D2)
            - self.coulomb(DotId::B, DotId::D1)
            + self.coulomb(DotId::B, DotId::D2))
    }

    /// Derives all qubit-level coupling constants from the model.
    ///
    /// The exchange splittings carry the first-order cross-molecule Coulomb
    /// correction; `j_oe` satisfies the identity
    /// `j_oe = sin²(θ_E/2)·sin²(θ_O/2)·Δ/4` exactly by construction, and
    /// `delta_j_o` is the difference between the corrected and the bare
    /// optical exchange (the splitting during the entangling window minus the
    /// splitting when the photon was created).
    pub fn effective_couplings(&self) -> Result<EffectiveCouplings> {
        self.require(&DotId::ALL, "effective couplings need all five dots")?;
        let t_o = self.singlet_coupling(DotId::T, DotId::B);
        let t_e = self.singlet_coupling(DotId::D1, DotId::D2);
        let t_23 = self.singlet_coupling(DotId::D2, DotId::D3);
        let theta_o = mixing_angle(self.detuning_o, t_o)?;
        let theta_e = mixing_angle(self.detuning_e, t_e)?;
        let j_o_bare = exchange_energy(self.detuning_o, t_o)?;
        let j_e_bare = exchange_energy(self.detuning_e, t_e)?;
        // the 2-3 exchange is gated fully off (t_23 = 0) in the entangling
        // configuration; take the t → 0 limit instead of erroring
        let j_23 = if t_23 > 0.0 {
            exchange_energy(self.detuning_23, t_23)?
        } else {
            0.5 * (self.detuning_23.abs() - self.detuning_23)
        };
        let delta_dd = self.dipole_dipole_shift()?;
        let s_o = half_angle_weight(theta_o);
        let s_e = half_angle_weight(theta_e);
        let u = |a: DotId, b: DotId| self.coulomb(a, b);
        let asym_o = 0.5
            * (u(DotId::T, DotId::D1) + u(DotId::T, DotId::D2)
                - u(DotId::B, DotId::D1)
                - u(DotId::B, DotId::D2));
        let asym_e = 0.5
            * (u(DotId::T, DotId::D2) + u(DotId::B, DotId::D2)
                - u(DotId::T, DotId::D1)
                - u(DotId::B, DotId::D1));
        let j_o = j_o_bare + s_o * (asym_o + 0.25 * delta_dd * s_e);
        let j_e = j_e_bare + s_e * (asym_e + 0.25 * delta_dd * s_o);
        Ok(EffectiveCouplings {
            j_o,
            j_e,
            j_23,
            j_oe: s_e * s_o * 0.25 * delta_dd,
            delta_dd,
            theta_o,
            theta_e,
            delta_j_o: j_o - j_o_bare,
        })
    }
}

/// Doubly occupied weight sin²(θ/2) of a hybridized singlet.
pub fn half_angle_weight(theta: f64) -> f64 {
    let s = (0.5 * theta).sin();
    s * s
}

/// Qubit-level energies derived from a [`HubbardSystem`], all in μeV except
/// the angles (radians).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveCouplings {
    /// Optical-molecule exchange splitting during the entangling window,
    /// including the first-order Coulomb correction.
    pub j_o: f64,
    /// Electrical-molecule exchange splitting (dots 1-2), likewise corrected.
    pub j_e: f64,
    /// Exchange between dots 2 and 3 (drives the memory-qubit pulse axis).
    pub j_23: f64,
    /// ZZ coupling between the two qubits.
    pub j_oe: f64,
    /// Dipole-dipole energy Δ = U_T1 − U_T2 − U_B1 + U_B2.
    pub delta_dd: f64,
    /// Optical mixing angle ∈ (0, π).
    pub theta_o: f64,
    /// Electrical mixing angle ∈ (0, π).
    pub theta_e: f64,
    /// Exchange difference between the entangling window and photon creation.
    pub delta_j_o: f64,
}

impl EffectiveCouplings {
    /// Builds the struct from angles and energies, computing `j_oe` from the
    /// identity so it holds exactly among the stored fields.
    pub fn from_parts(
        theta_o: f64,
        theta_e: f64,
        delta_dd: f64,
        j_o: f64,
        j_e: f64,
        j_23: f64,
        delta_j_o: f64,
    ) -> Result<Self> {
        if !(theta_o > 0.0 && theta_o < core::f64::consts::PI) {
            return Err(HubbardError::InvalidParameter(
                "theta_o must lie in (0, pi)",
            ));
        }
        if !(theta_e > 0.0 && theta_e < core::f64::consts::PI) {
            return Err(HubbardError::InvalidParameter(
                "theta_e must lie in (0, pi)",
            ));
        }
        Ok(Self {
            j_o,
            j_e,
            j_23,
            j_oe: half_angle_weight(theta_e) * half_angle_weight(theta_o) * 0.25 * delta_dd,
            delta_dd,
            theta_o,
            theta_e,
            delta_j_o,
        })
    }

    /// Residual of the ZZ identity, |j_oe − sin²·sin²·Δ/4| / max(|j_oe|, 1).
    pub fn zz_identity_residual(&self) -> f64 {
        let expect = half_angle_weight(self.theta_e)
            * half_angle_weight(self.theta_o)
            * 0.25
            * self.delta_dd;
        (self.j_oe - expect).abs() / self.j_oe.abs().max(1.0)
    }
}

/// Builder for [`HubbardSystem`]; validates all invariants on `build`.
#[derive(Clone, Debug, Default)]
pub struct HubbardSystemBuilder {
    orbitals: [Option<Orbital>; 5],
    tunnel: [[f64; 5]; 5],
    coulomb_override: [[Option<f64>; 5]; 5],
    detuning_o: f64,
    detuning_e: f64,
    detuning_23: f64,
    dielectric: Option<f64>,
}

impl HubbardSystemBuilder {
    pub fn dot(mut self, id: DotId, orbital: Orbital) -> Self {
        self.orbitals[id.index()] = Some(orbital);
        self
    }

    pub fn tunnel(mut self, a: DotId, b: DotId, t_uev: f64) -> Self {
        self.tunnel[a.index()][b.index()] = t_uev;
        self.tunnel[b.index()][a.index()] = t_uev;
        self
    }

    /// Sets a Coulomb matrix element directly instead of integrating the
    /// orbital densities (point-charge studies, fitted parameters).
    pub fn coulomb_override(mut self, a: DotId, b: DotId, u_uev: f64) -> Self {
        self.coulomb_override[a.index()][b.index()] = Some(u_uev);
        self.coulomb_override[b.index()][a.index()] = Some(u_uev);
        self
    }

    pub fn detunings(mut self, eps_o_uev: f64, eps_e_uev: f64, eps_23_uev: f64) -> Self {
        self.detuning_o = eps_o_uev;
        self.detuning_e = eps_e_uev;
        self.detuning_23 = eps_23_uev;
        self
    }

    pub fn dielectric(mut self, eps_r: f64) -> Self {
        self.dielectric = Some(eps_r);
        self
    }

    pub fn build(self) -> Result<HubbardSystem> {
        let dielectric = self.dielectric.unwrap_or(12.9);
        if !(dielectric > 0.0) {
            return Err(HubbardError::InvalidParameter(
                "dielectric must be positive",
            ));
        }
        let present: Vec<usize> = (0..5).filter(|i| self.orbitals[*i].is_some()).collect();
        if present.is_empty() {
            return Err(HubbardError::IncompleteModel("system has no dots"));
        }
        let mut coulomb = [[0.0; 5]; 5];
        for &i in &present {
            for &j in &present {
                if j < i {
                    continue;
                }
                let u = match self.coulomb_override[i][j] {
                    Some(u) => u,
                    None => coulomb_integral(
                        self.orbitals[i].as_ref().unwrap(),
                        self.orbitals[j].as_ref().unwrap(),
                        dielectric,
                    )?,
                };
                coulomb[i][j] = u;
                coulomb[j][i] = u;
            }
        }
        for &i in &present {
            for &j in &present {
                if coulomb[i][j] < 0.0 {
                    return Err(HubbardError::InvalidSystem("coulomb elements must be >= 0"));
                }
                if i != j && coulomb[i][i] <= coulomb[i][j] {
                    return Err(HubbardError::InvalidSystem(
                        "on-site repulsion must dominate every off-site element",
                    ));
                }
            }
        }
        for i in 0..5 {
            if self.tunnel[i][i] != 0.0 {
                return Err(HubbardError::InvalidSystem(
                    "tunnel diagonal must be zero; site energies follow from the detunings",
                ));
            }
            for j in 0..5 {
                if self.tunnel[i][j] != 0.0 {
                    if !present.contains(&i) || !present.contains(&j) {
                        return Err(HubbardError::InvalidSystem("tunneling between absent dots"));
                    }
                    let (a, b) = (DotId::ALL[i], DotId::ALL[j]);
                    if a.molecule() != b.molecule() {
                        return Err(HubbardError::InvalidSystem(
                            "no direct tunneling between the two molecules",
                        ));
                    }
                }
            }
        }
        Ok(HubbardSystem {
            orbitals: self.orbitals,
            tunnel: self.tunnel,
            coulomb,
            detuning_o: self.detuning_o,
            detuning_e: self.detuning_e,
            detuning_23: self.detuning_23,
            dielectric,
        })
    }
}
