//! 1-D self-consistent band-profile solver for the layered device stack.
//!
//! The conduction-band edge is E_c(z) = u(z) + ΔE_c(z), where u is the
//! electrostatic potential energy of an electron and ΔE_c the bias-
//! independent band offset of the material at z. Dirichlet conditions pin
//! u at the two metal boundaries, u = barrier − e·V_gate. Mobile charge is
//! a zero-temperature Thomas–Fermi electron gas, n = (2m*(−E_c)/ħ²)^{3/2}/3π²
//! wherever E_c < E_F ≡ 0 and the layer admits space charge; donors are
//! fully ionized. The nonlinear Poisson equation is solved by a damped
//! Newton iteration (the Thomas–Fermi response enters the Jacobian, the
//! update is mixed in with a user-set factor), and the converged charge is
//! re-solved once undamped so the reported profile satisfies the discrete
//! Poisson identity to machine precision.
//!
//! Envelope states come from the variable-mass Schrödinger operator on the
//! same grid, solved for the lowest few eigenpairs by Sturm bisection and
//! inverse iteration.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;
use crate::units::{E_OVER_EPS0_V_NM, HBAR2_OVER_2ME_EV_NM2};

use super::{ElectrostaticsError, Result};

/// Bulk parameters of one layer material. Literature defaults are provided
/// for the stack materials; all values are editable.
#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub label: String,
    /// Conduction-band offset relative to GaAs, eV.
    pub cb_offset_ev: f64,
    pub rel_permittivity: f64,
    /// Effective mass in units of the free-electron mass.
    pub effective_mass: f64,
}

impl Material {
    pub fn new(label: &str, cb_offset_ev: f64, rel_permittivity: f64, effective_mass: f64) -> Self {
        Self {
            label: String::from(label),
            cb_offset_ev,
            rel_permittivity,
            effective_mass,
        }
    }

    pub fn gaas() -> Self {
        Self::new("GaAs", 0.0, 12.9, 0.067)
    }

    pub fn algaas30() -> Self {
        Self::new("Al0.3Ga0.7As", 0.24, 12.2, 0.092)
    }

    pub fn algaas40() -> Self {
        Self::new("Al0.4Ga0.6As", 0.32, 12.0, 0.100)
    }

    pub fn alas() -> Self {
        Self::new("AlAs", 1.05, 10.1, 0.15)
    }

    pub fn inas_dots() -> Self {
        Self::new("InAs dots", -0.40, 14.6, 0.026)
    }

    pub fn oxide() -> Self {
        Self::new("oxide", 3.0, 9.0, 0.40)
    }
}

/// One layer of the epitaxial stack, top down.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    pub material: Material,
    pub thickness_nm: f64,
    /// Fully ionized donor density, cm⁻³.
    pub donor_density_cm3: f64,
    /// Whether the Thomas–Fermi gas may occupy this layer. Quantum-dot
    /// layers hold at most a few gate-loaded electrons and are excluded from
    /// the space charge.
    pub space_charge: bool,
}

impl Layer {
    pub fn undoped(material: Material, thickness_nm: f64) -> Self {
        Self {
            material,
            thickness_nm,
            donor_density_cm3: 0.0,
            space_charge: true,
        }
    }

    pub fn dots(material: Material, thickness_nm: f64) -> Self {
        Self {
            material,
            thickness_nm,
            donor_density_cm3: 0.0,
            space_charge: false,
        }
    }
}

/// The full stack with its boundary gates.
#[derive(Clone, Debug, PartialEq)]
pub struct LayerStack {
    /// Layers ordered from the top (light-emitting) surface downward.
    pub layers: Vec<Layer>,
    /// Schottky barrier at the top metal boundary, eV.
    pub top_barrier_ev: f64,
    /// Schottky barrier at the bottom metal boundary, eV.
    pub bottom_barrier_ev: f64,
    pub top_bias_v: f64,
    pub bottom_bias_v: f64,
}

impl LayerStack {
    /// The device epitaxy: oxide-clad stack with the stacked-dot layers
    /// 20 nm above a 10 nm well, entirely undoped (gated accumulation).
    pub fn default_device() -> Self {
        let layers = vec![
            Layer::undoped(Material::oxide(), 10.0),
            Layer::undoped(Material::alas(), 10.0),
            Layer::undoped(Material::algaas30(), 100.0),
            Layer::dots(Material::inas_dots(), 3.0),
            Layer::dots(Material::algaas30(), 7.0),
            Layer::dots(Material::inas_dots(), 3.0),
            Layer::undoped(Material::algaas30(), 20.0),
            Layer::undoped(Material::gaas(), 10.0),
            Layer::undoped(Material::algaas30(), 10.0),
            Layer::undoped(Material::algaas40(), 40.0),
            Layer::undoped(Material::alas(), 10.0),
            Layer::undoped(Material::oxide(), 10.0),
        ];
        Self {
            layers,
            top_barrier_ev: 0.8,
            bottom_barrier_ev: 0.8,
            top_bias_v: 0.0,
            bottom_bias_v: 0.0,
        }
    }

    pub fn total_thickness_nm(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness_nm).sum()
    }

    /// Depth interval [start, end) of the first layer with the given label.
    pub fn layer_span(&self, label: &str) -> Option<(f64, f64)> {
        let mut z = 0.0;
        for layer in &self.layers {
            if layer.material.label == label {
                return Some((z, z + layer.thickness_nm));
            }
            z += layer.thickness_nm;
        }
        None
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(ElectrostaticsError::InvalidStack("stack has no layers"));
        }
        for layer in &self.layers {
            if !(layer.thickness_nm > 0.0) {
                return Err(ElectrostaticsError::InvalidStack(
                    "layer thickness must be positive",
                ));
            }
            if !(layer.material.rel_permittivity > 0.0) || !(layer.material.effective_mass > 0.0) {
                return Err(ElectrostaticsError::InvalidStack(
                    "material parameters must be positive",
                ));
            }
            if layer.donor_density_cm3 < 0.0 {
                return Err(ElectrostaticsError::InvalidStack(
                    "donor density must be >= 0",
                ));
            }
        }
        Ok(())
    }

    fn layer_at(&self, z: f64) -> &Layer {
        let mut acc = 0.0;
        for layer in &self.layers {
            acc += layer.thickness_nm;
            if z < acc {
                return layer;
            }
        }
        self.layers.last().unwrap()
    }
}

/// Solver knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverOptions {
    pub grid_step_nm: f64,
    /// Damping factor applied to each Newton update.
    pub mixing: f64,
    pub max_iterations: usize,
    /// Convergence threshold on the max undamped potential update, eV.
    pub tolerance_ev: f64,
    /// Number of envelope states to return.
    pub n_bound_states: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            grid_step_nm: 0.25,
            mixing: 0.1,
            max_iterations: 500,
            tolerance_ev: 1e-6,
            n_bound_states: 2,
        }
    }
}

/// One envelope eigenstate on the solver grid.
#[derive(Clone, Debug)]
pub struct BoundState {
    pub energy_ev: f64,
    /// Normalized so that Σψ²·h = 1; zero at the boundaries.
    pub wavefunction: Vec<f64>,
}

impl BoundState {
    /// Probability weight inside a depth interval.
    pub fn weight_in(&self, z: &[f64], span: (f64, f64)) -> f64 {
        let h = z[1] - z[0];
        self.wavefunction
            .iter()
            .zip(z)
            .filter(|(_, zz)| **zz >= span.0 && **zz < span.1)
            .map(|(p, _)| p * p * h)
            .sum()
    }
}

/// Converged self-consistent solution.
#[derive(Clone, Debug)]
pub struct BandProfile {
    pub z_nm: Vec<f64>,
    /// Conduction-band edge E_c = u + ΔE_c, eV (E_F = 0).
    pub conduction_band_ev: Vec<f64>,
    /// Electron density, nm⁻³.
    pub density_nm3: Vec<f64>,
    /// Integrated electron sheet density, nm⁻².
    pub sheet_density_nm2: f64,
    pub bound_states: Vec<BoundState>,
    pub iterations: usize,
    pub residual_history: Vec<f64>,
    /// |∫ρ − boundary-flux difference| / max(|∫ρ|, ε) of the discrete
    /// solution (telescoped Poisson identity).
    pub gauss_law_residual: f64,
}

struct Grid {
    z: Vec<f64>,
    h: f64,
    offset: Vec<f64>,
    eps_half: Vec<f64>, // eps at z_{i+1/2}, length n-1
    mass_half: Vec<f64>,
    donors: Vec<f64>, // nm^-3, cell-averaged
    /// Control-cell charge segments per node: (cell fraction, TF coefficient,
    /// band offset). Cells straddling a layer boundary carry one segment per
    /// layer piece, which keeps the integrated charge second-order accurate.
    tf_segments: Vec<Vec<(f64, f64, f64)>>,
}

fn tf_coefficient(layer: &Layer) -> f64 {
    if layer.space_charge {
        let k = layer.material.effective_mass / HBAR2_OVER_2ME_EV_NM2;
        k * k.sqrt() / (3.0 * core::f64::consts::PI * core::f64::consts::PI)
    } else {
        0.0
    }
}

/// Splits [z0, z1] at layer boundaries and reports (width fraction of the
/// node cell, layer) per piece.
fn cell_pieces(stack: &LayerStack, z0: f64, z1: f64, cell_width: f64) -> Vec<(f64, &Layer)> {
    let mut out = Vec::new();
    let mut z = z0;
    let mut boundary = 0.0;
    for layer in &stack.layers {
        let next = boundary + layer.thickness_nm;
        if next > z {
            let seg_end = next.min(z1);
            if seg_end > z {
                out.push(((seg_end - z) / cell_width, layer));
                z = seg_end;
            }
            if z >= z1 {
                break;
            }
        }
        boundary = next;
    }
    if z < z1 {
        out.push(((z1 - z) / cell_width, stack.layers.last().unwrap()));
    }
    out
}

fn build_grid(stack: &LayerStack, step: f64) -> Grid {
    let length = stack.total_thickness_nm();
    let n = (length / step).round() as usize + 1;
    let h = length / (n - 1) as f64;
    let z: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let mut offset = Vec::with_capacity(n);
    let mut donors = Vec::with_capacity(n);
    let mut tf_segments = Vec::with_capacity(n);
    for &zz in &z {
        let layer = stack.layer_at(zz.min(length - 1e-9));
        offset.push(layer.material.cb_offset_ev);
        let cell = (zz - 0.5 * h).max(0.0)..(zz + 0.5 * h).min(length);
        let width = cell.end - cell.start;
        let pieces = cell_pieces(stack, cell.start, cell.end, width);
        donors.push(
            pieces
                .iter()
                .map(|(f, l)| f * l.donor_density_cm3 * 1e-21)
                .sum(),
        );
        tf_segments.push(
            pieces
                .iter()
                .map(|(f, l)| (*f, tf_coefficient(l), l.material.cb_offset_ev))
                .collect(),
        );
    }
    let mut eps_half = Vec::with_capacity(n - 1);
    let mut mass_half = Vec::with_capacity(n - 1);
    for zi in z.iter().take(n - 1) {
        // harmonic average over the cell keeps flux continuity second-order
        // even when an interface falls inside the cell
        eps_half.push(harmonic_cell_average(stack, *zi, zi + h, length, |m| {
            m.rel_permittivity
        }));
        mass_half.push(harmonic_cell_average(stack, *zi, zi + h, length, |m| {
            m.effective_mass
        }));
    }
    Grid {
        z,
        h,
        offset,
        eps_half,
        mass_half,
        donors,
        tf_segments,
    }
}

fn harmonic_cell_average(
    stack: &LayerStack,
    z0: f64,
    z1: f64,
    length: f64,
    value: impl Fn(&Material) -> f64,
) -> f64 {
    let mut acc = 0.0;
    let mut z = z0;
    let mut boundary = 0.0;
    for layer in &stack.layers {
        let next = boundary + layer.thickness_nm;
        if next > z {
            let seg_end = next.min(z1).min(length);
            if seg_end > z {
                acc += (seg_end - z) / value(&layer.material);
                z = seg_end;
            }
            if z >= z1 {
                break;
            }
        }
        boundary = next;
    }
    if z < z1 {
        // past the last interface: extend the final layer
        acc += (z1 - z) / value(&stack.layers.last().unwrap().material);
    }
    (z1 - z0) / acc
}

fn tf_density(grid: &Grid, u: &[f64], i: usize) -> f64 {
    let mut n = 0.0;
    for (frac, coeff, off) in &grid.tf_segments[i] {
        let e_c = u[i] + off;
        if e_c < 0.0 {
            n += frac * coeff * (-e_c) * (-e_c).sqrt();
        }
    }
    n
}

fn tf_density_slope(grid: &Grid, u: &[f64], i: usize) -> f64 {
    // dn/du = −(3/2)·c·√(−E_c) on occupied segments
    let mut slope = 0.0;
    for (frac, coeff, off) in &grid.tf_segments[i] {
        let e_c = u[i] + off;
        if e_c < 0.0 {
            slope -= 1.5 * frac * coeff * (-e_c).sqrt();
        }
    }
    slope
}

/// Thomas algorithm for a diagonally dominant tridiagonal system.
fn solve_tridiagonal(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = upper[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i] * c[i - 1];
        c[i] = if i < n - 1 { upper[i] / m } else { 0.0 };
        d[i] = (rhs[i] - lower[i] * d[i - 1]) / m;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        let next = x[i + 1];
        x[i] -= c[i] * next;
    }
    x
}

/// Newton update for the interior nodes: solves J·δ = −F at the current
/// iterate, with the Thomas–Fermi response on the Jacobian diagonal.
/// Returns the update vector and the ℓ₂ norm of the nonlinear residual F.
fn newton_delta(grid: &Grid, u: &[f64]) -> (Vec<f64>, f64) {
    let n = u.len();
    let h2 = grid.h * grid.h;
    let m = n - 2;
    let mut lower = vec![0.0; m];
    let mut diag = vec![0.0; m];
    let mut upper = vec![0.0; m];
    let mut rhs = vec![0.0; m];
    let mut f_norm_sq = 0.0;
    for k in 0..m {
        let i = k + 1;
        let e_w = grid.eps_half[i - 1] / h2;
        let e_e = grid.eps_half[i] / h2;
        lower[k] = e_w;
        upper[k] = e_e;
        // Thomas–Fermi response keeps the Jacobian diagonally dominant
        diag[k] = -(e_w + e_e) + E_OVER_EPS0_V_NM * tf_density_slope(grid, u, i);
        let laplace = e_w * u[i - 1] - (e_w + e_e) * u[i] + e_e * u[i + 1];
        let charge = E_OVER_EPS0_V_NM * (grid.donors[i] - tf_density(grid, u, i));
        // residual of d/dz(ε du/dz) = Q(N_D − n)
        rhs[k] = -(laplace - charge);
        f_norm_sq += rhs[k] * rhs[k];
    }
    (
        solve_tridiagonal(&lower, &diag, &upper, &rhs),
        f_norm_sq.sqrt(),
    )
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves the coupled Poisson/Thomas–Fermi problem on the stack and returns
/// the converged profile with the lowest envelope states.
pub fn solve_band_profile(stack: &LayerStack, options: &SolverOptions) -> Result<BandProfile> {
    stack.validate()?;
    if !(options.grid_step_nm > 0.0) || !(options.mixing > 0.0 && options.mixing <= 1.0) {
        return Err(ElectrostaticsError::InvalidParameter(
            "grid step must be positive and mixing in (0, 1]",
        ));
    }
    let grid = build_grid(stack, options.grid_step_nm);
    let n = grid.z.len();
    let u_top = stack.top_barrier_ev - stack.top_bias_v;
    let u_bot = stack.bottom_barrier_ev - stack.bottom_bias_v;
    // charge-free linear profile as the starting guess
    let mut u: Vec<f64> = (0..n)
        .map(|i| u_top + (u_bot - u_top) * i as f64 / (n - 1) as f64)
        .collect();

    // Damped Newton with a line search on the nonlinear residual norm.
    // The Newton direction is a descent direction for ‖F‖, so each accepted
    // step strictly shrinks the recorded residual; a stalled search raises
    // instead of returning silently. Convergence is declared on the max
    // potential update.
    let (mut delta, mut f_norm) = newton_delta(&grid, &u);
    let mut history = vec![f_norm];
    let mut converged = max_abs(&delta) < options.tolerance_ev;
    while !converged && history.len() < options.max_iterations {
        let mut alpha = options.mixing;
        loop {
            let trial: Vec<f64> = u
                .iter()
                .enumerate()
                .map(|(i, ui)| {
                    if i == 0 || i == n - 1 {
                        *ui
                    } else {
                        ui + alpha * delta[i - 1]
                    }
                })
                .collect();
            let (trial_delta, trial_f_norm) = newton_delta(&grid, &trial);
            if trial_f_norm < f_norm {
                u = trial;
                delta = trial_delta;
                f_norm = trial_f_norm;
                history.push(f_norm);
                break;
            }
            alpha *= 0.5;
            if alpha < 1e-6 * options.mixing {
                history.push(trial_f_norm);
                return Err(ElectrostaticsError::Diverged {
                    iterations: history.len(),
                    residual_history: history,
                });
            }
        }
        converged = max_abs(&delta) < options.tolerance_ev;
    }
    if !converged {
        return Err(ElectrostaticsError::Diverged {
            iterations: history.len(),
            residual_history: history,
        });
    }
    // freeze the charge and re-solve undamped so the reported profile
    // satisfies the discrete Poisson identity exactly
    let density: Vec<f64> = (0..n).map(|i| tf_density(&grid, &u, i)).collect();
    {
        let h2 = grid.h * grid.h;
        let m = n - 2;
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut rhs = vec![0.0; m];
        for k in 0..m {
            let i = k + 1;
            let e_w = grid.eps_half[i - 1] / h2;
            let e_e = grid.eps_half[i] / h2;
            lower[k] = e_w;
            diag[k] = -(e_w + e_e);
            upper[k] = e_e;
            rhs[k] = E_OVER_EPS0_V_NM * (grid.donors[i] - density[i]);
            if k == 0 {
                rhs[k] -= e_w * u[0];
            }
            if k == m - 1 {
                rhs[k] -= e_e * u[n - 1];
            }
        }
        let interior = solve_tridiagonal(&lower, &diag, &upper, &rhs);
        u[1..(m + 1)].copy_from_slice(&interior);
    }

    let e_c: Vec<f64> = (0..n).map(|i| u[i] + grid.offset[i]).collect();
    let sheet: f64 = density.iter().map(|d| d * grid.h).sum();

    // discrete Gauss law: boundary-flux difference equals the integrated
    // charge of the interior equations (telescoped sum)
    let flux_top = grid.eps_half[0] * (u[1] - u[0]) / grid.h;
    let flux_bot = grid.eps_half[n - 2] * (u[n - 1] - u[n - 2]) / grid.h;
    let integrated: f64 = (1..n - 1)
        .map(|i| E_OVER_EPS0_V_NM * (grid.donors[i] - density[i]) * grid.h)
        .sum();
    let gauss_law_residual =
        ((flux_bot - flux_top) - integrated).abs() / integrated.abs().max(1e-12);

    let bound_states = envelope_states(&grid, &e_c, options.n_bound_states);

    Ok(BandProfile {
        z_nm: grid.z,
        conduction_band_ev: e_c,
        density_nm3: density,
        sheet_density_nm2: sheet,
        bound_states,
        iterations: history.len(),
        residual_history: history,
        gauss_law_residual,
    })
}

/// Lowest eigenpairs of the variable-mass envelope Hamiltonian with hard
/// walls at the stack boundaries.
fn envelope_states(grid: &Grid, e_c: &[f64], count: usize) -> Vec<BoundState> {
    let n = grid.z.len();
    let m = n - 2;
    if count == 0 || m < 3 {
        return Vec::new();
    }
    let h2 = grid.h * grid.h;
    let kin: Vec<f64> = grid
        .mass_half
        .iter()
        .map(|mm| HBAR2_OVER_2ME_EV_NM2 / (mm * h2))
        .collect();
    let diag: Vec<f64> = (0..m).map(|k| kin[k] + kin[k + 1] + e_c[k + 1]).collect();
    let off: Vec<f64> = (0..m - 1).map(|k| -kin[k + 1]).collect();
    let pairs = lowest_tridiag_eigenpairs(&diag, &off, count);
    pairs
        .into_iter()
        .map(|(energy, v)| {
            let mut wavefunction = vec![0.0; n];
            let norm: f64 = v.iter().map(|x| x * x * grid.h).sum::<f64>().sqrt();
            for (k, x) in v.iter().enumerate() {
                wavefunction[k + 1] = x / norm;
            }
            BoundState {
                energy_ev: energy,
                wavefunction,
            }
        })
        .collect()
}

/// Number of eigenvalues of the symmetric tridiagonal matrix below `x`.
fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - e2 / q;
        if q == 0.0 {
            q = -1e-300;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn lowest_tridiag_eigenpairs(diag: &[f64], off: &[f64], count: usize) -> Vec<(f64, Vec<f64>)> {
    let m = diag.len();
    let count = count.min(m);
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..m {
        let r = if i == 0 { 0.0 } else { off[i - 1].abs() }
            + if i + 1 < m { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    let mut out = Vec::with_capacity(count);
    for j in 1..=count {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if sturm_count(diag, off, mid) >= j {
                b = mid;
            } else {
                a = mid;
            }
            if (b - a).abs() < 1e-13 * (1.0 + b.abs()) {
                break;
            }
        }
        let lambda = 0.5 * (a + b);
        let v = inverse_iteration(diag, off, lambda, &out);
        out.push((lambda, v));
    }
    out
}

/// Inverse iteration with a partially pivoted tridiagonal factorization;
/// deflates against already computed vectors to stay stable in clusters.
fn inverse_iteration(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    previous: &[(f64, Vec<f64>)],
) -> Vec<f64> {
    let m = diag.len();
    // deterministic start vector with broad spectral content
    let mut v: Vec<f64> = (0..m)
        .map(|i| 1.0 + 0.37 * ((i as f64 * 0.7311).sin()))
        .collect();
    normalize(&mut v);
    let shift = lambda + 1e-11 * (1.0 + lambda.abs());
    for _ in 0..4 {
        let mut w = solve_shifted(diag, off, shift, &v);
        for (_, p) in previous {
            let dot: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum();
            for (wi, pi) in w.iter_mut().zip(p) {
                *wi -= dot * pi;
            }
        }
        normalize(&mut w);
        v = w;
    }
    v
}

fn normalize(v: &mut [f64]) {
    let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}

/// Solves (T − shift·I)x = rhs for tridiagonal T with partial pivoting;
/// pivoting fills a second superdiagonal.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let m = diag.len();
    let mut a: Vec<f64> = off.to_vec(); // subdiagonal, a[i] = (i+1, i)
    let mut b: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    let mut c: Vec<f64> = off.to_vec(); // superdiagonal, c[i] = (i, i+1)
    let mut f = vec![0.0; m]; // (i, i+2), created by row swaps
    let mut x: Vec<f64> = rhs.to_vec();
    for i in 0..m - 1 {
        if a[i].abs() > b[i].abs() {
            let (b_i, c_i) = (b[i], c[i]);
            b[i] = a[i];
            c[i] = b[i + 1];
            f[i] = if i + 1 < m - 1 { c[i + 1] } else { 0.0 };
            a[i] = b_i;
            b[i + 1] = c_i;
            if i + 1 < m - 1 {
                c[i + 1] = 0.0;
            }
            x.swap(i, i + 1);
        }
        let pivot = if b[i].abs() > 1e-300 { b[i] } else { 1e-300 };
        let factor = a[i] / pivot;
        b[i + 1] -= factor * c[i];
        if i + 1 < m - 1 {
            c[i + 1] -= factor * f[i];
        }
        let x_i = x[i];
        x[i + 1] -= factor * x_i;
    }
    for i in (0..m).rev() {
        let mut acc = x[i];
        if i + 1 < m {
            acc -= c[i] * x[i + 1];
        }
        if i + 2 < m {
            acc -= f[i] * x[i + 2];
        }
        let pivot = if b[i].abs() > 1e-300 { b[i] } else { 1e-300 };
        x[i] = acc / pivot;
    }
    x
}

/// Boundary gate selector for lever-arm studies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateSide {
    Top,
    Bottom,
}

/// Lever arm −∂E_c(probe)/∂V_gate in meV/V, by centered finite difference of
/// two self-consistent solutions. Band offsets are bias-independent, so this
/// equals the derivative of the electrostatic potential energy; at the gate
/// boundary itself it is 1000 meV/V by construction.
pub fn lever_arm(
    stack: &LayerStack,
    gate: GateSide,
    probe_z_nm: f64,
    options: &SolverOptions,
) -> Result<f64> {
    let dv = 1e-3;
    let mut plus = stack.clone();
    let mut minus = stack.clone();
    match gate {
        GateSide::Top => {
            plus.top_bias_v += 0.5 * dv;
            minus.top_bias_v -= 0.5 * dv;
        }
        GateSide::Bottom => {
            plus.bottom_bias_v += 0.5 * dv;
            minus.bottom_bias_v -= 0.5 * dv;
        }
    }
    let sol_p = solve_band_profile(&plus, options)?;
    let sol_m = solve_band_profile(&minus, options)?;
    let up = interpolate(&sol_p.z_nm, &sol_p.conduction_band_ev, probe_z_nm);
    let um = interpolate(&sol_m.z_nm, &sol_m.conduction_band_ev, probe_z_nm);
    Ok(-(up - um) / dv * 1e3)
}

fn interpolate(z: &[f64], y: &[f64], at: f64) -> f64 {
    let h = z[1] - z[0];
    let pos = ((at - z[0]) / h).clamp(0.0, (z.len() - 1) as f64);
    let i = (pos.floor() as usize).min(z.len() - 2);
    let frac = pos - i as f64;
    y[i] * (1.0 - frac) + y[i + 1] * frac
}
