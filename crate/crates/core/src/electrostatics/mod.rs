//! Device electrostatics: geometry-to-coupling estimates with a screened
//! point-charge model, and a 1-D self-consistent band-profile solver for the
//! heterostructure stack.

mod geometry;
mod poisson;

pub use geometry::{
    contour_radius, delta_dd, delta_dd_map, CouplingMap, DeviceGeometry, LateralGrid,
};
pub use poisson::{
    lever_arm, solve_band_profile, BandProfile, BoundState, GateSide, Layer, LayerStack, Material,
    SolverOptions,
};

use core::fmt;

#[derive(Clone, Debug, PartialEq)]
pub enum ElectrostaticsError {
    InvalidGeometry(&'static str),
    InvalidStack(&'static str),
    InvalidParameter(&'static str),
    /// The self-consistent iteration failed to reach the tolerance; the
    /// residual history is attached for diagnosis.
    Diverged {
        iterations: usize,
        residual_history: alloc::vec::Vec<f64>,
    },
}

impl fmt::Display for ElectrostaticsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidGeometry(what) => write!(f, "invalid geometry: {what}"),
            Self::InvalidStack(what) => write!(f, "invalid layer stack: {what}"),
            Self::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Self::Diverged {
                iterations,
                residual_history,
            } => write!(
                f,
                "self-consistent loop did not converge after {iterations} iterations \
                 (last residual {:.3e})",
                residual_history.last().copied().unwrap_or(f64::NAN)
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ElectrostaticsError {}

pub type Result<T> = core::result::Result<T, ElectrostaticsError>;
