//! Unit conventions and physical constants.
//!
//! Everything inside the crate uses μeV for energies, nm for lengths and ps
//! for times. A phase accumulated by an energy `E` over a time `t` is then
//! `E * t / HBAR_UEV_PS` radians.

/// Reduced Planck constant, μeV·ps.
pub const HBAR_UEV_PS: f64 = 658.2119569;

/// Planck constant times 1 GHz, i.e. the energy of a 1 GHz transition, μeV.
pub const UEV_PER_GHZ: f64 = 4.135667696;

/// Coulomb constant e²/(4πε₀), μeV·nm. Divide by the relative permittivity
/// and a separation in nm to get a pair energy in μeV.
pub const COULOMB_UEV_NM: f64 = 1.439964548e6;

/// e/ε₀ in V·nm, for the 1-D Poisson equation on a nm grid.
pub const E_OVER_EPS0_V_NM: f64 = 18.09512618;

/// ħ²/(2 mₑ) in eV·nm²; divide by a relative effective mass for band-structure
/// kinetic terms.
pub const HBAR2_OVER_2ME_EV_NM2: f64 = 0.03809982;

/// Converts an energy in μeV to the equivalent transition frequency in GHz.
pub fn uev_to_ghz(energy_uev: f64) -> f64 {
    energy_uev / UEV_PER_GHZ
}

/// Converts a transition frequency in GHz to an energy in μeV.
pub fn ghz_to_uev(freq_ghz: f64) -> f64 {
    freq_ghz * UEV_PER_GHZ
}

/// Duration of the controlled-phase window, t = πħ/(2·J_zz), in ps.
pub fn cz_time_ps(j_zz_uev: f64) -> f64 {
    core::f64::consts::PI * HBAR_UEV_PS / (2.0 * j_zz_uev)
}
