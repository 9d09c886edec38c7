//! Acceptance suite: every release criterion runs here at its stated
//! tolerance and prints one pass line. Run with
//! `cargo test -p dotmem-cli --test acceptance -- --nocapture` to see the
//! lines as they pass.

use std::path::Path;

use dotmem_core::electrostatics::{
    contour_radius, delta_dd, delta_dd_map, solve_band_profile, DeviceGeometry, LateralGrid,
    LayerStack, SolverOptions,
};
use dotmem_core::hubbard::{
    coupled_zz_coupling, exact_diagonalize, exchange_energy, DotId, EffectiveCouplings,
    HubbardSystem, Molecule, Orbital,
};
use dotmem_core::interference::{mean_bell_fidelity, DetectorModel, PacketSet};
use dotmem_core::noise::{echo_coherence, fid_envelope, EchoAxis, EchoSequence};
use dotmem_core::register::{
    run_protocol, xi, HeraldOutcome, MemoryState, PhotonState, ProtocolParams, RegisterState,
    SpinState,
};
use dotmem_core::units::{cz_time_ps, HBAR_UEV_PS};
use dotmem_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn pass(criterion: u32, what: &str) {
    println!("[criterion {criterion:>2}] {what}: PASS");
}

#[test]
fn criterion_01_exchange_formula() {
    for t in [0.5, 10.0, 82.7, 511.0] {
        assert_eq!(
            exchange_energy(0.0, t).unwrap(),
            t,
            "J(0, t) must equal t exactly"
        );
        let j = exchange_energy(100.0 * t, t).unwrap();
        let asymptote = t / 100.0;
        assert!(
            (j - asymptote).abs() / asymptote <= 1e-4,
            "large-detuning limit off by more than 0.01%"
        );
    }
    let t = 82.7;
    let mut last = f64::INFINITY;
    for k in 0..=20_000 {
        let eps = -1.0e4 + k as f64;
        let j = exchange_energy(eps, t).unwrap();
        assert!(
            j > 0.0 && j < last,
            "sweep not strictly decreasing at eps = {eps}"
        );
        last = j;
    }
    pass(
        1,
        "exchange formula: J(0) = t, 0.01% asymptote, monotone sweep",
    );
}

#[test]
fn criterion_02_hubbard_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let t_tb: f64 = rng.gen_range(1.0..20.0);
        let t_eff = core::f64::consts::SQRT_2 * t_tb;
        let u_tt = rng.gen_range(50.0..200.0) * t_eff;
        let u_bb = u_tt * rng.gen_range(0.9..1.1);
        let u_tb = rng.gen_range(0.05..0.3) * u_tt;
        let eps = rng.gen_range(-0.2..0.2) * u_tt;
        let sys = HubbardSystem::builder()
            .dot(DotId::T, Orbital::isotropic([0.0, 0.0, 10.0], 1.0).unwrap())
            .dot(DotId::B, Orbital::isotropic([0.0, 0.0, 0.0], 1.0).unwrap())
            .tunnel(DotId::T, DotId::B, t_tb)
            .coulomb_override(DotId::T, DotId::T, u_tt)
            .coulomb_override(DotId::B, DotId::B, u_bb)
            .coulomb_override(DotId::T, DotId::B, u_tb)
            .detunings(eps, 0.0, 0.0)
            .build()
            .unwrap();
        let gap = exact_diagonalize(&sys, Molecule::Optical)
            .unwrap()
            .singlet_triplet_gap();
        let j = exchange_energy(eps, t_eff).unwrap();
        let bound = 3.0 * 2.0 * (t_eff / u_tt) * t_eff;
        assert!(
            (gap - j).abs() <= bound,
            "|gap − J| = {} > {bound}",
            (gap - j).abs()
        );
    }
    pass(
        2,
        "exact-diagonalization gap matches the two-level formula on 100 systems",
    );
}

#[test]
fn criterion_03_zz_extraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in 0..50 {
        let t_tb: f64 = rng.gen_range(5.0..15.0);
        let t_12: f64 = rng.gen_range(5.0..15.0);
        let t_o = core::f64::consts::SQRT_2 * t_tb;
        let t_e = core::f64::consts::SQRT_2 * t_12;
        let eps_o = rng.gen_range(2.0..6.0) * t_o;
        let eps_e = rng.gen_range(2.0..6.0) * t_e;
        let s = rng.gen_range(0.005..0.025) * eps_o.min(eps_e);
        let mut b = HubbardSystem::builder()
            .dot(DotId::T, Orbital::isotropic([0.0, 0.0, 40.0], 1.0).unwrap())
            .dot(DotId::B, Orbital::isotropic([0.0, 0.0, 30.0], 1.0).unwrap())
            .dot(DotId::D1, Orbital::isotropic([0.0, 0.0, 0.0], 1.0).unwrap())
            .dot(
                DotId::D2,
                Orbital::isotropic([100.0, 0.0, 0.0], 1.0).unwrap(),
            )
            .dot(
                DotId::D3,
                Orbital::isotropic([200.0, 0.0, 0.0], 1.0).unwrap(),
            )
            .tunnel(DotId::T, DotId::B, t_tb)
            .tunnel(DotId::D1, DotId::D2, t_12)
            .detunings(eps_o, eps_e, rng.gen_range(30.0..60.0) * t_e)
            .coulomb_override(DotId::T, DotId::D1, 4.0 * s)
            .coulomb_override(DotId::T, DotId::D2, 2.0 * s)
            .coulomb_override(DotId::B, DotId::D1, 1.0 * s)
            .coulomb_override(DotId::B, DotId::D2, 2.5 * s)
            .coulomb_override(DotId::T, DotId::D3, 0.0)
            .coulomb_override(DotId::B, DotId::D3, 0.0)
            .coulomb_override(DotId::T, DotId::B, 20.0 * t_o)
            .coulomb_override(DotId::D1, DotId::D2, 20.0 * t_e)
            .coulomb_override(DotId::D2, DotId::D3, 20.0 * t_e)
            .coulomb_override(DotId::D1, DotId::D3, 10.0 * t_e);
        for d in DotId::ALL {
            b = b.coulomb_override(d, d, 100.0 * t_o.max(t_e));
        }
        let sys = b.build().unwrap();
        assert!(
            sys.dipole_dipole_shift().unwrap().abs()
                <= 0.1 * sys.detuning_o().min(sys.detuning_e()),
            "instance {k} left the linear-response regime"
        );
        let formula = sys.effective_couplings().unwrap().j_oe;
        let brute = coupled_zz_coupling(&sys).unwrap().j_oe;
        let rel = (brute - formula).abs() / formula.abs();
        assert!(rel < 0.10, "instance {k}: relative deviation {rel:.4}");
    }
    pass(
        3,
        "brute-force ZZ coefficient within 10% of the sin²·sin²·Δ/4 formula, 50 instances",
    );
}

fn reference_params() -> ProtocolParams {
    let couplings = EffectiveCouplings::from_parts(
        core::f64::consts::FRAC_PI_2,
        2.0 * core::f64::consts::FRAC_PI_3,
        16.0,
        100.3,
        30.0,
        25.0,
        0.3,
    )
    .unwrap();
    ProtocolParams::from_couplings(couplings, 1.0, 1.0e4)
}

#[test]
fn criterion_04_protocol_exactness() {
    let p = reference_params();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let heralded = loop {
        let state = RegisterState::init_saqdm()
            .emit_entangled_photon()
            .unwrap()
            .apply_calibrated_re_pulse(p.couplings.j_23)
            .evolve_cz(p.t_cz_ps, &p)
            .apply_stark_rotation();
        let (outcome, state) = state.herald_erasure(&mut rng, &p).unwrap();
        if outcome == HeraldOutcome::Success {
            break state;
        }
    };
    // hand-built R'·Bell reference with η₁ = π/2 − ξ + δJ_O·t/ħ and
    // η₂ = π/2 + J_E·t/ħ
    let eta1 = core::f64::consts::FRAC_PI_2 - xi() + p.delta_j_o() * p.t_cz_ps / HBAR_UEV_PS;
    let eta2 = core::f64::consts::FRAC_PI_2 + p.couplings.j_e * p.t_cz_ps / HBAR_UEV_PS;
    let (c_ax, s_ax) = (-0.5, 0.75f64.sqrt());
    let r = [
        [
            Complex64::new(xi().cos(), xi().sin() * c_ax),
            Complex64::new(0.0, xi().sin() * s_ax),
        ],
        [
            Complex64::new(0.0, xi().sin() * s_ax),
            Complex64::new(xi().cos(), -xi().sin() * c_ax),
        ],
    ];
    let rotate = |v: [Complex64; 2]| {
        let v = [
            v[0] * Complex64::cis(0.5 * eta1),
            v[1] * Complex64::cis(-0.5 * eta1),
        ];
        let v = [
            r[0][0] * v[0] + r[0][1] * v[1],
            r[1][0] * v[0] + r[1][1] * v[1],
        ];
        [
            v[0] * Complex64::cis(0.5 * eta2),
            v[1] * Complex64::cis(-0.5 * eta2),
        ]
    };
    let inv_sqrt2 = 1.0 / core::f64::consts::SQRT_2;
    let h = rotate([Complex64::new(inv_sqrt2, 0.0), Complex64::ZERO]);
    let v = rotate([Complex64::ZERO, Complex64::new(inv_sqrt2, 0.0)]);
    let mut overlap = Complex64::ZERO;
    for (amp, s, ph, q) in [
        (
            h[0],
            SpinState::Triplet,
            PhotonState::Horizontal,
            MemoryState::Zero,
        ),
        (
            h[1],
            SpinState::Triplet,
            PhotonState::Horizontal,
            MemoryState::One,
        ),
        (
            v[0],
            SpinState::Triplet,
            PhotonState::Vertical,
            MemoryState::Zero,
        ),
        (
            v[1],
            SpinState::Triplet,
            PhotonState::Vertical,
            MemoryState::One,
        ),
    ] {
        overlap += amp.conj() * heralded.amplitude(s, ph, q);
    }
    assert!(overlap.norm() >= 1.0 - 1e-9, "overlap {}", overlap.norm());
    pass(
        4,
        "ideal heralded state overlaps the rotated Bell pair to 1 − 1e-9",
    );
}

#[test]
fn criterion_05_herald_probability() {
    let p = reference_params();
    let mut successes = 0usize;
    let n = 100_000u64;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let pre = RegisterState::init_saqdm()
        .emit_entangled_photon()
        .unwrap()
        .apply_calibrated_re_pulse(p.couplings.j_23)
        .evolve_cz(p.t_cz_ps, &p)
        .apply_stark_rotation();
    for _ in 0..n {
        if pre.clone().herald_erasure(&mut rng, &p).unwrap().0 == HeraldOutcome::Success {
            successes += 1;
        }
    }
    let rate = successes as f64 / n as f64;
    let sigma = (0.25 / n as f64).sqrt();
    assert!(
        (rate - 0.5).abs() <= 3.0 * sigma,
        "rate {rate} outside 0.5 ± {}",
        3.0 * sigma
    );

    let mut p10 = p;
    p10.detection_efficiency = 0.1;
    let shots = 10_000u64;
    let mean = (0..shots)
        .map(|s| run_protocol(&p10, None, s).unwrap().attempts as f64)
        .sum::<f64>()
        / shots as f64;
    let sigma_mean = (380.0f64 / shots as f64).sqrt(); // geometric var (1−p)/p²
    assert!(
        (mean - 20.0).abs() <= 3.0 * sigma_mean,
        "mean attempts {mean} outside 20 ± {}",
        3.0 * sigma_mean
    );
    pass(
        5,
        "herald probability 0.500 ± 3σ and mean attempts 20 ± 3σ at 10% detection",
    );
}

#[test]
fn criterion_06_delay_invariance() {
    let mut p = reference_params();
    let mut reference = None;
    for (w_emit, w_herald) in [(0.0, 0.0), (17.0, 313.0), (1.0e4, 1.0e5), (1.0e6, 1.0e6)] {
        p.post_emit_wait_ps = w_emit;
        p.pre_herald_wait_ps = w_herald;
        let f = run_protocol(&p, None, 6).unwrap().fidelity.unwrap();
        match reference {
            None => reference = Some(f),
            Some(f0) => assert!(
                (f - f0).abs() < 1e-10,
                "fidelity moved by {} under waits ({w_emit}, {w_herald})",
                (f - f0).abs()
            ),
        }
    }
    pass(
        6,
        "arbitrary waits after emission and rotation leave fidelity unchanged to 1e-10",
    );
}

/// Nested adaptive-quadrature average of sech[(κ₂−κ₁)(t₂−t₁)] over the
/// branch-summed coincidence density (equal arrivals).
fn mean_g_quadrature(kappa1: f64, kappa2: f64) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        // composite Simpson on a smooth decaying integrand
        let h = (b - a) / n as f64;
        let mut acc = f(a) + f(b);
        for k in 1..n {
            acc += f(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    }
    let dk = kappa2 - kappa1;
    let branch = |rate1: f64, rate2: f64| {
        simpson(
            &|x: f64| {
                let t1 = x / (2.0 * rate1);
                let inner = simpson(
                    &|y: f64| {
                        let t2 = y / (2.0 * rate2);
                        (-y).exp() / (dk * (t2 - t1)).cosh()
                    },
                    0.0,
                    45.0,
                    4000,
                );
                (-x).exp() * inner
            },
            0.0,
            45.0,
            4000,
        )
    };
    0.5 * (branch(kappa2, kappa1) + branch(kappa1, kappa2))
}

#[test]
fn criterion_07_hom_fidelity() {
    // pointwise sech identity for exponential packets
    let p = PacketSet::per_port(0.4, 0.9, 0.3, 0.8, 0.0, 0.0, 0.0, 0.0).unwrap();
    for (t1, t2) in [(1.0, 1.5), (2.0, 7.0), (5.5, 2.2), (9.0, 9.0)] {
        let g = dotmem_core::interference::g_factor(t1, t2, &p).unwrap();
        let sech = 1.0 / ((0.9 - 0.4) * (t2 - t1)).cosh();
        assert!(
            (g - sech).abs() < 1e-9,
            "G vs sech at ({t1}, {t2}): {}",
            (g - sech).abs()
        );
    }
    // 5×5 grid over (Δδ·σ, Δκ/κ): Monte Carlo within 3 standard errors of
    // ½[1 + ⟨G⟩·exp(−(Δδ σ)²/2)]
    let kappa = 0.5;
    let sigma = 10.0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (i, delta_sigma) in [0.0, 0.5, 1.0, 1.5, 2.0].into_iter().enumerate() {
        for (j, dk_rel) in [0.0, 0.25, 0.5, 0.75, 1.0].into_iter().enumerate() {
            let d_delta = delta_sigma / sigma;
            let k1 = kappa * (1.0 - 0.5 * dk_rel);
            let k2 = kappa * (1.0 + 0.5 * dk_rel);
            let packets = PacketSet::per_port(k1, k2, 0.0, 0.0, d_delta, 0.0, 0.0, 0.0).unwrap();
            let detector = DetectorModel {
                jitter1_ps: sigma,
                jitter2_ps: 0.0,
                efficiency: 1.0,
                time_resolution_ps: 0.0,
            };
            let estimate = mean_bell_fidelity(&packets, &detector, 100_000, &mut rng).unwrap();
            let closed =
                0.5 * (1.0 + mean_g_quadrature(k1, k2) * (-0.5 * delta_sigma * delta_sigma).exp());
            assert!(
                (estimate.mean - closed).abs() <= 3.0 * estimate.stderr + 1e-6,
                "grid ({i}, {j}): MC {} vs closed {closed} (se {})",
                estimate.mean,
                estimate.stderr
            );
        }
    }
    pass(
        7,
        "Monte Carlo interference fidelity matches the closed form on a 5×5 grid",
    );
}

#[test]
fn criterion_08_coupling_anchor() {
    let geometry = DeviceGeometry::standard(30.0, 100.0, 12.9);
    let on_axis = delta_dd(&geometry, [0.0, 0.0]).abs();
    assert!(
        (300.0..3000.0).contains(&on_axis),
        "|Δ| = {on_axis} μeV outside the 0.3–3 meV anchor"
    );
    let mut last = f64::INFINITY;
    for z in [30.0, 32.0, 34.0, 36.0, 38.0, 40.0] {
        let d = delta_dd(&DeviceGeometry::standard(z, 100.0, 12.9), [0.0, 0.0]).abs();
        assert!(d < last, "|Δ| not decreasing at z = {z}");
        last = d;
    }
    let map = delta_dd_map(&geometry, LateralGrid::centered(150.0, 2.0)).unwrap();
    let diameter = 2.0 * contour_radius(&map, 100.0).unwrap();
    assert!(
        (50.0..=200.0).contains(&diameter),
        "100 μeV contour diameter {diameter} nm outside factor 2 of 100 nm"
    );
    pass(
        8,
        "point-charge coupling anchor, vertical decay, and 100 μeV contour diameter",
    );
}

#[test]
fn criterion_09_cz_time_arithmetic() {
    let t = cz_time_ps(1.0);
    assert!((t - 1033.9).abs() <= 0.1, "t_cz(1 μeV) = {t}");
    // meV-scale coupling bounds the entangling window at picoseconds
    let floor = HBAR_UEV_PS / 1000.0;
    assert!((0.5..1.0).contains(&floor), "ħ/1 meV = {floor} ps");
    assert!(cz_time_ps(250.0) < 10.0);
    pass(
        9,
        "t_cz(1 μeV) = 1033.9 ± 0.1 ps and the meV coupling floor is picoseconds",
    );
}

#[test]
fn criterion_10_echo_recovery() {
    let total = 2000.0;
    let seq = EchoSequence::hahn(total, EchoAxis::OpticalX);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..200 {
        let h: f64 = rng.gen_range(-20.0..20.0);
        let c = echo_coherence(&seq, total, h).unwrap();
        assert!(
            (c - Complex64::ONE).norm() < 1e-10,
            "echo residual {}",
            (c - Complex64::ONE).norm()
        );
    }
    // free-induction envelope against exp(−t²σ²/2ħ²) over 1e5 shots
    let sigma = 2.0;
    let n = 100_000;
    let normal = rand_distr::Normal::new(0.0, sigma).unwrap();
    for t in [100.0, 400.0, 900.0] {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let h: f64 = rng.sample(normal);
            let c = (h * t / HBAR_UEV_PS).cos();
            sum += c;
            sum_sq += c * c;
        }
        let mean = sum / n as f64;
        let se = ((sum_sq / n as f64 - mean * mean).max(0.0) / n as f64).sqrt();
        let expected = fid_envelope(sigma, t);
        assert!(
            (mean - expected).abs() <= 3.0 * se,
            "FID at t = {t}: {mean} vs {expected} (se {se})"
        );
    }
    pass(
        10,
        "mid-point echo exact per realization; FID envelope within 3σ of the Gaussian",
    );
}

#[test]
fn criterion_11_band_solver() {
    let mut stack = LayerStack::default_device();
    stack.bottom_bias_v = 1.5;
    let options = SolverOptions {
        n_bound_states: 4,
        ..SolverOptions::default()
    };
    let sol = solve_band_profile(&stack, &options).unwrap();
    assert!(
        sol.iterations < options.max_iterations,
        "no convergence headroom"
    );
    assert!(sol.sheet_density_nm2 > 0.0, "no accumulated density");
    assert!(
        sol.gauss_law_residual < 1e-8,
        "Gauss residual {}",
        sol.gauss_law_residual
    );
    let span = stack.layer_span("GaAs").unwrap();
    let weight = sol
        .bound_states
        .iter()
        .map(|s| s.weight_in(&sol.z_nm, span))
        .fold(0.0f64, f64::max);
    assert!(weight > 0.5, "no well-localized envelope (best {weight})");
    let fine = solve_band_profile(
        &stack,
        &SolverOptions {
            grid_step_nm: 0.125,
            ..options
        },
    )
    .unwrap();
    let mut sup: f64 = 0.0;
    for (i, _z) in sol.z_nm.iter().enumerate() {
        sup = sup.max((sol.conduction_band_ev[i] - fine.conduction_band_ev[2 * i]).abs());
    }
    assert!(sup < 1e-4, "grid refinement moved the profile by {sup} eV");
    pass(
        11,
        "band solver converges, binds a well state, satisfies Gauss, grid-stable",
    );
}

#[test]
fn criterion_12_byte_identical_reruns() {
    let dir = tempfile::tempdir().unwrap();
    let scenario =
        Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios/protocol_noisy.json");
    let hash_outputs = |out: &Path| -> Vec<(String, Vec<u8>)> {
        let outcome = dotmem_cli::run_scenario(
            &scenario,
            &dotmem_cli::Overrides {
                seed: None,
                out_dir: Some(out.to_path_buf()),
                threads: None,
            },
        )
        .unwrap();
        outcome
            .outputs
            .iter()
            .map(|p| {
                (
                    p.file_name().unwrap().to_string_lossy().to_string(),
                    std::fs::read(p).unwrap(),
                )
            })
            .collect()
    };
    let first = hash_outputs(&dir.path().join("a"));
    let second = hash_outputs(&dir.path().join("b"));
    assert_eq!(first.len(), second.len());
    for ((name_a, bytes_a), (name_b, bytes_b)) in first.iter().zip(&second) {
        assert_eq!(name_a, name_b);
        assert_eq!(bytes_a, bytes_b, "output {name_a} differs between reruns");
    }
    pass(
        12,
        "identical scenario + seed reproduce byte-identical primary outputs",
    );
}
