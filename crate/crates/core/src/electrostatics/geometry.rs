//! Screened point-charge estimate of the dipole-dipole coupling versus the
//! lateral placement of the stacked dot pair above the gated dots.

use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;
use crate::hubbard::point_charge_energy;

use super::{ElectrostaticsError, Result};

/// Dot positions for the coupling estimate, in nm. The gated dots define the
/// quantum-well plane; the stacked pair must sit above it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeviceGeometry {
    /// Top dot of the stacked pair.
    pub saqdm_top: [f64; 3],
    /// Bottom dot of the stacked pair.
    pub saqdm_bottom: [f64; 3],
    /// Gated dots 1, 2, 3 (only 1 and 2 enter the dipole-dipole combination).
    pub gqd: [[f64; 3]; 3],
    /// Perfect-conductor image plane modeling the buried gates, or `None`
    /// for the unscreened estimate.
    pub gate_plane_z: Option<f64>,
    pub dielectric: f64,
}

impl DeviceGeometry {
    /// Stacked pair `z_dd` nm above the well with 10 nm intra-pair spacing,
    /// centered over gated dot 1, gated dots on a `pitch` nm row.
    pub fn standard(z_dd: f64, pitch: f64, dielectric: f64) -> Self {
        Self {
            saqdm_top: [0.0, 0.0, z_dd + 10.0],
            saqdm_bottom: [0.0, 0.0, z_dd],
            gqd: [[0.0, 0.0, 0.0], [pitch, 0.0, 0.0], [2.0 * pitch, 0.0, 0.0]],
            gate_plane_z: None,
            dielectric,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dielectric > 0.0) {
            return Err(ElectrostaticsError::InvalidGeometry(
                "dielectric must be positive",
            ));
        }
        if self.saqdm_top[2] <= self.saqdm_bottom[2] {
            return Err(ElectrostaticsError::InvalidGeometry(
                "top dot must sit above the bottom dot",
            ));
        }
        let well_z = self
            .gqd
            .iter()
            .map(|p| p[2])
            .fold(f64::NEG_INFINITY, f64::max);
        if self.saqdm_bottom[2] <= well_z {
            return Err(ElectrostaticsError::InvalidGeometry(
                "stacked pair must sit above the quantum-well plane",
            ));
        }
        let mut all = self.gqd.to_vec();
        all.push(self.saqdm_top);
        all.push(self.saqdm_bottom);
        for i in 0..all.len() {
            for j in (i + 1)..all.len() {
                if all[i] == all[j] {
                    return Err(ElectrostaticsError::InvalidGeometry(
                        "positions must be distinct",
                    ));
                }
            }
        }
        if let Some(zg) = self.gate_plane_z {
            if zg >= self.saqdm_bottom[2] {
                return Err(ElectrostaticsError::InvalidGeometry(
                    "image plane must lie below the stacked pair",
                ));
            }
        }
        Ok(())
    }

    /// Pair energy with optional image-charge screening, μeV.
    fn pair_energy(&self, a: [f64; 3], b: [f64; 3]) -> f64 {
        let u = point_charge_energy(dist(a, b), self.dielectric);
        match self.gate_plane_z {
            None => u,
            Some(zg) => {
                let image = [b[0], b[1], 2.0 * zg - b[2]];
                u - point_charge_energy(dist(a, image), self.dielectric)
            }
        }
    }
}

fn dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    let dz = a[2] - b[2];
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Dipole-dipole energy Δ = U_T1 − U_T2 − U_B1 + U_B2 with the stacked pair
/// displaced laterally by `offset`, μeV.
pub fn delta_dd(geometry: &DeviceGeometry, offset: [f64; 2]) -> f64 {
    let shift = |p: [f64; 3]| [p[0] + offset[0], p[1] + offset[1], p[2]];
    let top = shift(geometry.saqdm_top);
    let bottom = shift(geometry.saqdm_bottom);
    let d1 = geometry.gqd[0];
    let d2 = geometry.gqd[1];
    geometry.pair_energy(top, d1) - geometry.pair_energy(top, d2) - geometry.pair_energy(bottom, d1)
        + geometry.pair_energy(bottom, d2)
}

/// Uniform lateral offset grid, centered on the origin of the geometry.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LateralGrid {
    pub x_min: f64,
    pub y_min: f64,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

impl LateralGrid {
    /// Square grid spanning ±half_extent with the given step.
    pub fn centered(half_extent: f64, step: f64) -> Self {
        let n = (2.0 * half_extent / step).round() as usize + 1;
        Self {
            x_min: -half_extent,
            y_min: -half_extent,
            step,
            nx: n,
            ny: n,
        }
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.step
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + j as f64 * self.step
    }
}

/// Δ values over a lateral grid, row-major in y then x.
#[derive(Clone, Debug)]
pub struct CouplingMap {
    pub grid: LateralGrid,
    pub values_uev: Vec<f64>,
}

impl CouplingMap {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values_uev[j * self.grid.nx + i]
    }

    pub fn max_abs(&self) -> f64 {
        self.values_uev.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Evaluates Δ over the grid of lateral offsets.
pub fn delta_dd_map(geometry: &DeviceGeometry, grid: LateralGrid) -> Result<CouplingMap> {
    geometry.validate()?;
    if !(grid.step > 0.0) || grid.nx == 0 || grid.ny == 0 {
        return Err(ElectrostaticsError::InvalidParameter(
            "grid must be non-empty",
        ));
    }
    let mut values = Vec::with_capacity(grid.nx * grid.ny);
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            values.push(delta_dd(geometry, [grid.x(i), grid.y(j)]));
        }
    }
    Ok(CouplingMap {
        grid,
        values_uev: values,
    })
}

/// Equivalent-area radius of the region where |Δ| ≥ `level_uev`, in nm;
/// `None` when the level exceeds the map maximum.
pub fn contour_radius(map: &CouplingMap, level_uev: f64) -> Option<f64> {
    let cell = map.grid.step * map.grid.step;
    let area: f64 = map
        .values_uev
        .iter()
        .filter(|v| v.abs() >= level_uev)
        .map(|_| cell)
        .sum();
    if area == 0.0 {
        None
    } else {
        Some((area / core::f64::consts::PI).sqrt())
    }
}
