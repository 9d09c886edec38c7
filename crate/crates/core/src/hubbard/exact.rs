//! Exact diagonalization of the dot-molecule Hamiltonians in their fixed
//! charge and spin-projection sectors.
//!
//! Basis states are occupation bitmasks per spin species, with the ket
//! convention |u, d⟩ = (∏_{i∈u, ascending} c†_{i↑})(∏_{j∈d, ascending} c†_{j↓})|vac⟩.
//! Hopping preserves the species, so fermionic signs count only the occupied
//! sites of the hopping species between the two orbitals involved.
//!
//! Site energies are fixed by the stored detunings (see the module docs of
//! [`super`]), which makes the sector energies here directly comparable with
//! the two-level formulas.

use alloc::{vec, vec::Vec};

use nalgebra::DMatrix;

#[cfg(not(feature = "std"))]
use crate::fmath::Libm as _;

use super::{DotId, HubbardError, HubbardSystem, Molecule, Result};

const MAX_SECTOR_DIM: usize = 15;

/// One occupation basis state: per-species site bitmasks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SectorConfig {
    pub up: u8,
    pub down: u8,
}

/// Eigen-decomposition of one molecule's fixed-sector Hamiltonian.
///
/// `vectors` holds eigenvectors as columns, ordered by ascending energy, in
/// the `basis` ordering.
#[derive(Clone, Debug)]
pub struct SectorSpectrum {
    pub molecule: Molecule,
    pub basis: Vec<SectorConfig>,
    pub energies: Vec<f64>,
    pub vectors: DMatrix<f64>,
}

impl SectorSpectrum {
    /// Energy of the eigenstate with maximal overlap on `target` (given in
    /// the basis ordering), together with that overlap squared.
    pub fn match_energy(&self, target: &[f64]) -> (f64, f64) {
        let mut best = (0usize, 0.0f64);
        for k in 0..self.energies.len() {
            let ov: f64 = (0..target.len())
                .map(|i| self.vectors[(i, k)] * target[i])
                .sum();
            if ov * ov > best.1 {
                best = (k, ov * ov);
            }
        }
        (self.energies[best.0], best.1)
    }

    /// Gap between the triplet-like reference state of the exchange pair and
    /// the singlet ground state.
    pub fn singlet_triplet_gap(&self) -> f64 {
        let t0 = triplet_reference(self.molecule, &self.basis);
        let (e_t0, _) = self.match_energy(&t0);
        e_t0 - self.energies[0]
    }

    /// Energy expectation and variance of a normalized target vector; the
    /// variance vanishes iff the target is an exact eigenstate (degenerate
    /// subspaces included).
    pub fn energy_moments(&self, target: &[f64]) -> (f64, f64) {
        let n = self.energies.len();
        let mut mean = 0.0;
        let mut second = 0.0;
        for k in 0..n {
            let c: f64 = (0..n).map(|i| self.vectors[(i, k)] * target[i]).sum();
            mean += c * c * self.energies[k];
            second += c * c * self.energies[k] * self.energies[k];
        }
        (mean, second - mean * mean)
    }
}

fn sites_of(molecule: Molecule) -> &'static [DotId] {
    match molecule {
        Molecule::Optical => &[DotId::T, DotId::B],
        Molecule::Electrical => &[DotId::D1, DotId::D2, DotId::D3],
    }
}

fn enumerate_masks(nsites: usize, nocc: u32) -> Vec<u8> {
    (0u8..(1 << nsites))
        .filter(|m| m.count_ones() == nocc)
        .collect()
}

/// Sector basis at the molecule's operating filling: two electrons with
/// S_z = 0 for the optical pair, three electrons with S_z = +1/2 for the
/// triple (the gauge spin of the third electron is fixed to ↑; the −1/2
/// sector is identical by symmetry).
fn sector_basis(molecule: Molecule) -> Vec<SectorConfig> {
    let (nsites, nup, ndn) = match molecule {
        Molecule::Optical => (2usize, 1u32, 1u32),
        Molecule::Electrical => (3, 2, 1),
    };
    let mut out = Vec::new();
    for up in enumerate_masks(nsites, nup) {
        for down in enumerate_masks(nsites, ndn) {
            out.push(SectorConfig { up, down });
        }
    }
    out
}

/// Site energies that realize the stored detunings with the reference site
/// (B for the pair, dot 2 for the triple) at zero.
fn site_energies(system: &HubbardSystem, molecule: Molecule) -> Vec<f64> {
    let u = |a: DotId, b: DotId| system.coulomb(a, b);
    match molecule {
        Molecule::Optical => {
            // ε_O = E(0,2) − E(1,1) = e_B − e_T + U_BB − U_TB with e_T = 0
            let e_b = system.detuning_o() - (u(DotId::B, DotId::B) - u(DotId::T, DotId::B));
            vec![0.0, e_b]
        }
        Molecule::Electrical => {
            let common =
                u(DotId::D1, DotId::D3) - u(DotId::D1, DotId::D2) - u(DotId::D2, DotId::D3);
            let e_1 = system.detuning_e() - (u(DotId::D1, DotId::D1) + common);
            let e_3 = system.detuning_23() - (u(DotId::D3, DotId::D3) + common);
            vec![e_1, 0.0, e_3]
        }
    }
}

fn hop(mask: u8, from: usize, to: usize) -> Option<(u8, f64)> {
    if mask & (1 << from) == 0 || mask & (1 << to) != 0 {
        return None;
    }
    let (lo, hi) = (from.min(to), from.max(to));
    let between = mask & (((1u16 << hi) - (1 << (lo + 1))) as u8);
    let sign = if between.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    };
    Some((mask ^ (1 << from) ^ (1 << to), sign))
}

fn build_sector_hamiltonian(
    system: &HubbardSystem,
    molecule: Molecule,
    basis: &[SectorConfig],
) -> DMatrix<f64> {
    let sites = sites_of(molecule);
    let n = basis.len();
    let e_site = site_energies(system, molecule);
    let mut h = DMatrix::zeros(n, n);
    let index_of = |cfg: &SectorConfig| basis.iter().position(|b| b == cfg).unwrap();
    for (k, cfg) in basis.iter().enumerate() {
        let occ = |i: usize| -> f64 { ((cfg.up >> i) & 1) as f64 + ((cfg.down >> i) & 1) as f64 };
        let mut diag = 0.0;
        for (i, &si) in sites.iter().enumerate() {
            diag += e_site[i] * occ(i);
            let double = ((cfg.up >> i) & 1) as f64 * ((cfg.down >> i) & 1) as f64;
            diag += system.coulomb(si, si) * double;
            for (j, &sj) in sites.iter().enumerate().skip(i + 1) {
                diag += system.coulomb(si, sj) * occ(i) * occ(j);
            }
        }
        h[(k, k)] = diag;
        for (i, &si) in sites.iter().enumerate() {
            for (j, &sj) in sites.iter().enumerate() {
                if i == j {
                    continue;
                }
                let t = system.tunnel(si, sj);
                if t == 0.0 {
                    continue;
                }
                if let Some((up2, sign)) = hop(cfg.up, i, j) {
                    let k2 = index_of(&SectorConfig {
                        up: up2,
                        down: cfg.down,
                    });
                    h[(k2, k)] += t * sign;
                }
                if let Some((dn2, sign)) = hop(cfg.down, i, j) {
                    let k2 = index_of(&SectorConfig {
                        up: cfg.up,
                        down: dn2,
                    });
                    h[(k2, k)] += t * sign;
                }
            }
        }
    }
    h
}

pub(crate) fn sorted_symmetric_eigen(h: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = h.nrows();
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, b| {
        eig.eigenvalues[*a]
            .partial_cmp(&eig.eigenvalues[*b])
            .unwrap()
    });
    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (energies, vectors)
}

/// Diagonalizes one molecule's Hamiltonian in its operating sector.
pub fn exact_diagonalize(system: &HubbardSystem, molecule: Molecule) -> Result<SectorSpectrum> {
    let needed = sites_of(molecule);
    if !needed.iter().all(|d| system.has_dot(*d)) {
        return Err(HubbardError::IncompleteModel(
            "molecule dots missing from the system",
        ));
    }
    let basis = sector_basis(molecule);
    if basis.len() > MAX_SECTOR_DIM {
        return Err(HubbardError::DimensionOverflow {
            dimension: basis.len(),
        });
    }
    let h = build_sector_hamiltonian(system, molecule, &basis);
    let (energies, vectors) = sorted_symmetric_eigen(h);
    Ok(SectorSpectrum {
        molecule,
        basis,
        energies,
        vectors,
    })
}

/// The (1,1)-triplet reference vector of the exchange pair in the sector
/// basis: T0 of the pair for the optical molecule, T0(1,2) ⊗ ↑₃ for the
/// triple.
fn triplet_reference(molecule: Molecule, basis: &[SectorConfig]) -> Vec<f64> {
    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    let mut v = vec![0.0; basis.len()];
    match molecule {
        Molecule::Optical => {
            // (c†_T↑ c†_B↓ + c†_T↓ c†_B↑)/√2 = (|{T},{B}⟩ − |{B},{T}⟩)/√2
            for (k, cfg) in basis.iter().enumerate() {
                if cfg.up == 0b01 && cfg.down == 0b10 {
                    v[k] = inv_sqrt2;
                }
                if cfg.up == 0b10 && cfg.down == 0b01 {
                    v[k] = -inv_sqrt2;
                }
            }
        }
        Molecule::Electrical => {
            // (c†_1↑c†_2↓ + c†_1↓c†_2↑)/√2 · c†_3↑ reordered to the ket
            // convention: (−|{1,3},{2}⟩ + |{2,3},{1}⟩)/√2
            for (k, cfg) in basis.iter().enumerate() {
                if cfg.up == 0b101 && cfg.down == 0b010 {
                    v[k] = -inv_sqrt2;
                }
                if cfg.up == 0b110 && cfg.down == 0b001 {
                    v[k] = inv_sqrt2;
                }
            }
        }
    }
    v
}

/// Logical |1⟩ of the memory qubit in the triple's sector basis:
/// (|T0(1,2), ↑₃⟩ − √2 |T₊(1,2), ↓₃⟩)/√3.
fn logical_one_reference(basis: &[SectorConfig]) -> Vec<f64> {
    let t0 = triplet_reference(Molecule::Electrical, basis);
    let mut v: Vec<f64> = t0.iter().map(|x| x / 3.0f64.sqrt()).collect();
    for (k, cfg) in basis.iter().enumerate() {
        if cfg.up == 0b011 && cfg.down == 0b100 {
            v[k] -= (2.0f64 / 3.0).sqrt();
        }
    }
    v
}

/// Exchange-inert quartet state (total spin 3/2, m = +1/2):
/// (√2 |T0(1,2), ↑₃⟩ + |T₊(1,2), ↓₃⟩)/√3.
pub fn quartet_reference(spectrum: &SectorSpectrum) -> Vec<f64> {
    let t0 = triplet_reference(Molecule::Electrical, &spectrum.basis);
    let mut v: Vec<f64> = t0.iter().map(|x| x * (2.0f64 / 3.0).sqrt()).collect();
    for (k, cfg) in spectrum.basis.iter().enumerate() {
        if cfg.up == 0b011 && cfg.down == 0b100 {
            v[k] += 1.0 / 3.0f64.sqrt();
        }
    }
    v
}

/// The four logical-level energies of the coupled model and the extracted
/// ZZ coefficient.
#[derive(Clone, Copy, Debug)]
pub struct ZzLevels {
    pub e_s0: f64,
    pub e_s1: f64,
    pub e_t0: f64,
    pub e_t1: f64,
    /// −[E(S,0) − E(S,1) − E(T,0) + E(T,1)]/2.
    pub j_oe: f64,
    /// Smallest of the four product-state overlaps used for matching.
    pub min_overlap: f64,
}

/// Brute-force ZZ coefficient from the coupled five-dot model.
///
/// The coupled Hamiltonian is H_O ⊗ 1 + 1 ⊗ H_E + ½ Σ U_jk n_j ⊗ n_k over
/// the 4 × 9 product sector. Cross-molecule pair energies enter with weight
/// ½ — the convention under which the first-order reduction of the coupled
/// spectrum is exactly J_OE = sin²(θ_E/2) sin²(θ_O/2) Δ/4 for the stored
/// (full) pair energies U_jk. The four logical levels are identified by
/// maximal overlap with the uncoupled product eigenstates.
pub fn coupled_zz_coupling(system: &HubbardSystem) -> Result<ZzLevels> {
    if !DotId::ALL.iter().all(|d| system.has_dot(*d)) {
        return Err(HubbardError::IncompleteModel(
            "coupled model needs all five dots",
        ));
    }
    let spec_o = exact_diagonalize(system, Molecule::Optical)?;
    let spec_e = exact_diagonalize(system, Molecule::Electrical)?;
    let n_o = spec_o.basis.len();
    let n_e = spec_e.basis.len();

    let h_o = build_sector_hamiltonian(system, Molecule::Optical, &spec_o.basis);
    let h_e = build_sector_hamiltonian(system, Molecule::Electrical, &spec_e.basis);
    let occ = |cfg: &SectorConfig, i: usize| -> f64 {
        ((cfg.up >> i) & 1) as f64 + ((cfg.down >> i) & 1) as f64
    };
    let o_sites = sites_of(Molecule::Optical);
    let e_sites = sites_of(Molecule::Electrical);
    let mut h = DMatrix::zeros(n_o * n_e, n_o * n_e);
    for a in 0..n_o {
        for b in 0..n_e {
            let row = a * n_e + b;
            let mut cross = 0.0;
            for (i, &si) in o_sites.iter().enumerate() {
                for (j, &sj) in e_sites.iter().enumerate() {
                    cross += 0.5
                        * system.coulomb(si, sj)
                        * occ(&spec_o.basis[a], i)
                        * occ(&spec_e.basis[b], j);
                }
            }
            h[(row, row)] = cross;
            for a2 in 0..n_o {
                h[(a2 * n_e + b, row)] += h_o[(a2, a)];
            }
            for b2 in 0..n_e {
                h[(a * n_e + b2, row)] += h_e[(b2, b)];
            }
        }
    }
    let (energies, vectors) = sorted_symmetric_eigen(h);

    let singlet_o: Vec<f64> = (0..n_o).map(|i| spec_o.vectors[(i, 0)]).collect();
    let triplet_o = triplet_reference(Molecule::Optical, &spec_o.basis);
    let zero_e: Vec<f64> = (0..n_e).map(|i| spec_e.vectors[(i, 0)]).collect();
    let one_e = logical_one_reference(&spec_e.basis);

    let match_product = |vo: &[f64], ve: &[f64]| -> (f64, f64) {
        let mut best = (0usize, 0.0f64);
        for k in 0..energies.len() {
            let mut ov = 0.0;
            for a in 0..n_o {
                if vo[a] == 0.0 {
                    continue;
                }
                for b in 0..n_e {
                    ov += vectors[(a * n_e + b, k)] * vo[a] * ve[b];
                }
            }
            if ov * ov > best.1 {
                best = (k, ov * ov);
            }
        }
        (energies[best.0], best.1)
    };
    let (e_s0, o1) = match_product(&singlet_o, &zero_e);
    let (e_s1, o2) = match_product(&singlet_o, &one_e);
    let (e_t0, o3) = match_product(&triplet_o, &zero_e);
    let (e_t1, o4) = match_product(&triplet_o, &one_e);
    Ok(ZzLevels {
        e_s0,
        e_s1,
        e_t0,
        e_t1,
        j_oe: -(e_s0 - e_s1 - e_t0 + e_t1) / 2.0,
        min_overlap: o1.min(o2).min(o3).min(o4),
    })
}

#[cfg(test)]
mod tests {
    use super::super::{exchange_energy, Orbital};
    use super::*;
    use approx::assert_relative_eq;

    fn pair_system(t_tb: f64, u_tt: f64, u_bb: f64, u_tb: f64, eps: f64) -> HubbardSystem {
        HubbardSystem::builder()
            .dot(DotId::T, Orbital::isotropic([0.0, 0.0, 10.0], 1.0).unwrap())
            .dot(DotId::B, Orbital::isotropic([0.0, 0.0, 0.0], 1.0).unwrap())
            .tunnel(DotId::T, DotId::B, t_tb)
            .coulomb_override(DotId::T, DotId::T, u_tt)
            .coulomb_override(DotId::B, DotId::B, u_bb)
            .coulomb_override(DotId::T, DotId::B, u_tb)
            .detunings(eps, 0.0, 0.0)
            .build()
            .unwrap()
    }

    #[test]
    fn sector_dimensions() {
        let sys = pair_system(10.0, 5000.0, 5000.0, 1000.0, 0.0);
        let spec = exact_diagonalize(&sys, Molecule::Optical).unwrap();
        assert_eq!(spec.basis.len(), 4);
    }

    #[test]
    fn zero_tunneling_degenerates_singlet_and_triplet() {
        let sys = pair_system(1e-9, 5000.0, 5000.0, 1000.0, 200.0);
        let spec = exact_diagonalize(&sys, Molecule::Optical).unwrap();
        assert!(spec.singlet_triplet_gap().abs() < 1e-6);
    }

    #[test]
    fn gap_matches_two_level_formula_when_top_doublon_is_far() {
        let t_tb = 50.0 / core::f64::consts::SQRT_2; // singlet coupling 50 μeV
        let sys = pair_system(t_tb, 1e7, 1e7, 1e6, 0.0);
        let spec = exact_diagonalize(&sys, Molecule::Optical).unwrap();
        let gap = spec.singlet_triplet_gap();
        assert_relative_eq!(gap, 50.0, max_relative = 0.01);
        let j = exchange_energy(0.0, sys.singlet_coupling(DotId::T, DotId::B)).unwrap();
        assert_relative_eq!(gap, j, max_relative = 0.01);
    }

    fn triple_system(t12: f64, t23: f64, eps_e: f64, eps_23: f64) -> HubbardSystem {
        let mut b = HubbardSystem::builder()
            .dot(DotId::D1, Orbital::isotropic([0.0, 0.0, 0.0], 1.0).unwrap())
            .dot(
                DotId::D2,
                Orbital::isotropic([100.0, 0.0, 0.0], 1.0).unwrap(),
            )
            .dot(
                DotId::D3,
                Orbital::isotropic([200.0, 0.0, 0.0], 1.0).unwrap(),
            )
            .tunnel(DotId::D1, DotId::D2, t12)
            .tunnel(DotId::D2, DotId::D3, t23)
            .detunings(0.0, eps_e, eps_23);
        for d in [DotId::D1, DotId::D2, DotId::D3] {
            b = b.coulomb_override(d, d, 2e4);
        }
        for pair in [
            (DotId::D1, DotId::D2),
            (DotId::D2, DotId::D3),
            (DotId::D1, DotId::D3),
        ] {
            b = b.coulomb_override(pair.0, pair.1, 2e3);
        }
        b.build().unwrap()
    }

    #[test]
    fn quartet_state_is_inert_to_both_exchange_axes() {
        // the quartet must stay an exact eigenstate at a fixed energy no
        // matter what either tunnel coupling does
        let mut energies = Vec::new();
        for (t12, t23) in [(20.0, 0.0), (60.0, 0.0), (20.0, 40.0), (80.0, 80.0)] {
            let sys = triple_system(t12, t23, 300.0, 400.0);
            let spec = exact_diagonalize(&sys, Molecule::Electrical).unwrap();
            assert_eq!(spec.basis.len(), 9);
            let q = quartet_reference(&spec);
            let (e_q, var) = spec.energy_moments(&q);
            assert!(
                var.abs() < 1e-12 * e_q * e_q + 1e-9,
                "quartet mixed: var {var}"
            );
            energies.push(e_q);
        }
        for e in &energies[1..] {
            assert_relative_eq!(*e, energies[0], max_relative = 1e-12);
        }
    }

    #[test]
    fn electrical_pair_gap_matches_formula_with_third_dot_detuned() {
        let t12 = 30.0 / core::f64::consts::SQRT_2;
        let sys = triple_system(t12, 0.0, 120.0, 400.0);
        let spec = exact_diagonalize(&sys, Molecule::Electrical).unwrap();
        let gap = spec.singlet_triplet_gap();
        let j = exchange_energy(120.0, 30.0).unwrap();
        // the doublon ladder of the triple perturbs at O(t²/U)
        assert_relative_eq!(gap, j, max_relative = 0.01);
    }
}
