//! Independent numerical oracles for the model-building layer: brute-force
//! quadrature for the Coulomb integrals, exact diagonalization against the
//! two-level exchange formula, and the coupled-spectrum check of the ZZ
//! coupling. The oracles deliberately avoid the code paths they validate.

use dotmem_core::hubbard::{
    coulomb_integral, coupled_zz_coupling, exact_diagonalize, exchange_energy, half_angle_weight,
    mixing_angle, point_charge_energy, DotId, HubbardSystem, Molecule, Orbital,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Monte Carlo estimate of ⟨1/|r − r′|⟩ over two Gaussian charge clouds.
fn coulomb_monte_carlo(
    a_center: [f64; 3],
    a_sigma: f64,
    b_center: [f64; 3],
    b_sigma: f64,
    dielectric: f64,
    samples: usize,
    seed: u64,
) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = rand_distr::StandardNormal;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let mut dist_sq = 0.0;
        for k in 0..3 {
            let ga: f64 = rng.sample(normal);
            let gb: f64 = rng.sample(normal);
            let d = (a_center[k] + a_sigma * ga) - (b_center[k] + b_sigma * gb);
            dist_sq += d * d;
        }
        let inv = 1.0 / dist_sq.sqrt();
        sum += inv;
        sum_sq += inv * inv;
    }
    let n = samples as f64;
    let mean = sum / n;
    let stderr = ((sum_sq / n - mean * mean).max(0.0) / n).sqrt();
    let scale = dotmem_core::units::COULOMB_UEV_NM / dielectric;
    (scale * mean, scale * stderr)
}

#[test]
fn coulomb_integral_matches_monte_carlo_quadrature() {
    // σ = 5 nm isotropic clouds, 30 nm apart, within 1% of the 1e7-sample
    // brute-force average
    let a = Orbital::isotropic([0.0, 0.0, 0.0], 5.0).unwrap();
    let b = Orbital::isotropic([0.0, 0.0, 30.0], 5.0).unwrap();
    let analytic = coulomb_integral(&a, &b, 12.9).unwrap();
    let (mc, _se) = coulomb_monte_carlo(
        [0.0, 0.0, 0.0],
        5.0,
        [0.0, 0.0, 30.0],
        5.0,
        12.9,
        10_000_000,
        11,
    );
    let rel = (analytic - mc).abs() / mc;
    assert!(rel < 0.01, "analytic {analytic} vs MC {mc} (rel {rel:.4})");
}

#[test]
fn anisotropic_coulomb_matches_monte_carlo() {
    let a = Orbital::new([0.0, 0.0, 0.0], [4.0, 6.0, 2.0]).unwrap();
    let b = Orbital::new([10.0, -5.0, 20.0], [3.0, 3.0, 8.0]).unwrap();
    let analytic = coulomb_integral(&a, &b, 12.9).unwrap();
    // reuse the isotropic sampler axis by axis
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let normal = rand_distr::StandardNormal;
    let n = 4_000_000usize;
    let (wa, wb) = (a.widths(), b.widths());
    let (ca, cb) = (a.center(), b.center());
    let mut sum = 0.0;
    for _ in 0..n {
        let mut dist_sq = 0.0;
        for k in 0..3 {
            let ga: f64 = rng.sample(normal);
            let gb: f64 = rng.sample(normal);
            let d = (ca[k] + wa[k] * ga) - (cb[k] + wb[k] * gb);
            dist_sq += d * d;
        }
        sum += 1.0 / dist_sq.sqrt();
    }
    let mc = dotmem_core::units::COULOMB_UEV_NM / 12.9 * sum / n as f64;
    let rel = (analytic - mc).abs() / mc;
    assert!(rel < 0.01, "analytic {analytic} vs MC {mc} (rel {rel:.4})");
}

fn one_nm_orbital(center: [f64; 3]) -> Orbital {
    Orbital::isotropic(center, 1.0).unwrap()
}

/// Two-dot system with explicit matrix elements and suppressed top doublon.
fn random_pair_system(rng: &mut ChaCha8Rng) -> (HubbardSystem, f64, f64) {
    let t_tb: f64 = rng.gen_range(1.0..20.0);
    let t_eff = core::f64::consts::SQRT_2 * t_tb;
    let u_tt = rng.gen_range(50.0..200.0) * t_eff;
    let u_bb = u_tt * rng.gen_range(0.9..1.1);
    let u_tb = rng.gen_range(0.05..0.3) * u_tt;
    let eps = rng.gen_range(-0.2..0.2) * u_tt;
    let sys = HubbardSystem::builder()
        .dot(DotId::T, one_nm_orbital([0.0, 0.0, 10.0]))
        .dot(DotId::B, one_nm_orbital([0.0, 0.0, 0.0]))
        .tunnel(DotId::T, DotId::B, t_tb)
        .coulomb_override(DotId::T, DotId::T, u_tt)
        .coulomb_override(DotId::B, DotId::B, u_bb)
        .coulomb_override(DotId::T, DotId::B, u_tb)
        .detunings(eps, 0.0, 0.0)
        .build()
        .unwrap();
    (sys, eps, t_tb)
}

#[test]
fn sector_gap_matches_two_level_exchange_on_random_systems() {
    // perturbative bound 2·(t/U)·t with a ×3 empirical margin
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..100 {
        let (sys, eps, t_tb) = random_pair_system(&mut rng);
        let t_eff = sys.singlet_coupling(DotId::T, DotId::B);
        let spec = exact_diagonalize(&sys, Molecule::Optical).unwrap();
        let gap = spec.singlet_triplet_gap();
        let j = exchange_energy(eps, t_eff).unwrap();
        let bound = 3.0 * 2.0 * t_eff * t_eff / sys.coulomb(DotId::T, DotId::T);
        assert!(
            (gap - j).abs() <= bound,
            "gap {gap} vs J {j} exceeds bound {bound} (t_tb {t_tb}, eps {eps})"
        );
    }
}

/// Five-dot system in the linear-response regime for the ZZ extraction.
fn random_coupled_system(rng: &mut ChaCha8Rng) -> HubbardSystem {
    let t_tb: f64 = rng.gen_range(5.0..15.0);
    let t_12: f64 = rng.gen_range(5.0..15.0);
    let t_o = core::f64::consts::SQRT_2 * t_tb;
    let t_e = core::f64::consts::SQRT_2 * t_12;
    let eps_o = rng.gen_range(2.0..6.0) * t_o;
    let eps_e = rng.gen_range(2.0..6.0) * t_e;
    let eps_23 = rng.gen_range(30.0..60.0) * t_e;
    // cross elements scaled so Δ stays within the linear-response window
    let s = rng.gen_range(0.005..0.025) * eps_o.min(eps_e);
    let mut b = HubbardSystem::builder()
        .dot(DotId::T, one_nm_orbital([0.0, 0.0, 40.0]))
        .dot(DotId::B, one_nm_orbital([0.0, 0.0, 30.0]))
        .dot(DotId::D1, one_nm_orbital([0.0, 0.0, 0.0]))
        .dot(DotId::D2, one_nm_orbital([100.0, 0.0, 0.0]))
        .dot(DotId::D3, one_nm_orbital([200.0, 0.0, 0.0]))
        .tunnel(DotId::T, DotId::B, t_tb)
        .tunnel(DotId::D1, DotId::D2, t_12)
        .detunings(eps_o, eps_e, eps_23)
        .coulomb_override(DotId::T, DotId::D1, 4.0 * s)
        .coulomb_override(DotId::T, DotId::D2, 2.0 * s)
        .coulomb_override(DotId::B, DotId::D1, 1.0 * s)
        .coulomb_override(DotId::B, DotId::D2, 2.5 * s)
        .coulomb_override(DotId::T, DotId::D3, 0.0)
        .coulomb_override(DotId::B, DotId::D3, 0.0)
        .coulomb_override(DotId::T, DotId::B, 0.2 * 100.0 * t_o)
        .coulomb_override(DotId::D1, DotId::D2, 20.0 * t_e)
        .coulomb_override(DotId::D2, DotId::D3, 20.0 * t_e)
        .coulomb_override(DotId::D1, DotId::D3, 10.0 * t_e);
    for d in DotId::ALL {
        b = b.coulomb_override(d, d, 100.0 * t_o.max(t_e));
    }
    b.build().unwrap()
}

#[test]
fn zz_formula_matches_coupled_spectrum_in_linear_response() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for k in 0..50 {
        let sys = random_coupled_system(&mut rng);
        let delta = sys.dipole_dipole_shift().unwrap();
        assert!(delta.abs() <= 0.1 * sys.detuning_o().min(sys.detuning_e()));
        let couplings = sys.effective_couplings().unwrap();
        // positive detunings keep the corrected optical exchange positive
        assert!(couplings.j_o >= 0.0);
        let levels = coupled_zz_coupling(&sys).unwrap();
        assert!(
            levels.min_overlap > 0.5,
            "ambiguous level match: {}",
            levels.min_overlap
        );
        let rel = (levels.j_oe - couplings.j_oe).abs() / couplings.j_oe.abs();
        assert!(
            rel < 0.10,
            "instance {k}: brute {} vs formula {} (rel {rel:.4})",
            levels.j_oe,
            couplings.j_oe
        );
    }
}

#[test]
fn dipole_shift_vanishes_at_lateral_infinity() {
    let mut b = HubbardSystem::builder()
        .dot(DotId::T, one_nm_orbital([1.0e4, 0.0, 40.0]))
        .dot(DotId::B, one_nm_orbital([1.0e4, 0.0, 30.0]))
        .dot(DotId::D1, one_nm_orbital([0.0, 0.0, 0.0]))
        .dot(DotId::D2, one_nm_orbital([100.0, 0.0, 0.0]))
        .dot(DotId::D3, one_nm_orbital([200.0, 0.0, 0.0]))
        .tunnel(DotId::T, DotId::B, 10.0)
        .tunnel(DotId::D1, DotId::D2, 10.0)
        .detunings(100.0, 100.0, 1000.0);
    for d in DotId::ALL {
        b = b.coulomb_override(d, d, 1.0e6);
    }
    let sys = b.build().unwrap();
    assert!(sys.dipole_dipole_shift().unwrap().abs() < 1e-3);
}

#[test]
fn slope_identity_relates_mixing_angle_and_exchange() {
    // |∂J/∂ε| = sin²(θ/2) ties the two derived quantities together
    for (eps, t) in [(0.0, 50.0), (200.0, 80.0), (-300.0, 20.0), (1000.0, 82.7)] {
        let theta = mixing_angle(eps, t).unwrap();
        let d = 1e-4 * t;
        let fd = (exchange_energy(eps + d, t).unwrap() - exchange_energy(eps - d, t).unwrap())
            / (2.0 * d);
        assert!((fd + half_angle_weight(theta)).abs() < 1e-7);
    }
}

#[test]
fn point_charge_energy_reference_value() {
    // 1.43996 eV·nm / (12.9 · 30 nm) ≈ 3.72 meV
    let u = point_charge_energy(30.0, 12.9);
    assert!((u - 3720.6).abs() < 1.0);
}
