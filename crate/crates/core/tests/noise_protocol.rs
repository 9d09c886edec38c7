//! Noise-model cross-checks against the protocol: the small-noise fidelity
//! expansion, monotonicity in every bath amplitude, and leakage statistics.

use dotmem_core::hubbard::EffectiveCouplings;
use dotmem_core::noise::{noisy_protocol_fidelity, NoiseModel, NoiseTarget};
use dotmem_core::register::ProtocolParams;
use dotmem_core::units::HBAR_UEV_PS;

fn params() -> ProtocolParams {
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
fn zero_noise_is_lossless() {
    let stats = noisy_protocol_fidelity(&params(), &NoiseModel::default(), 500, 1).unwrap();
    assert!(stats.mean_fidelity > 1.0 - 1e-9);
    assert_eq!(stats.n_success, stats.n_shots);
    assert_eq!(stats.mean_leak_population, 0.0);
}

#[test]
fn small_hyperfine_noise_costs_the_quadratic_expansion() {
    // σ chosen so T₂* = 10·t_cz: the heralded fidelity drops by
    // (t_cz/T₂*)²/2 = 0.5% to leading order
    let p = params();
    let sigma = core::f64::consts::SQRT_2 * HBAR_UEV_PS / (10.0 * p.t_cz_ps);
    let model = NoiseModel {
        hyperfine_sigma_o: sigma,
        ..Default::default()
    };
    assert!((model.t2_star_ps(NoiseTarget::Optical) - 10.0 * p.t_cz_ps).abs() < 1e-9);
    let stats = noisy_protocol_fidelity(&p, &model, 40_000, 3).unwrap();
    let drop = 1.0 - stats.mean_fidelity;
    let expected = 0.005;
    assert!(
        (drop - expected).abs() < 3.0 * stats.stderr + 2e-4,
        "drop {drop} vs {expected} (se {})",
        stats.stderr
    );
}

#[test]
fn fidelity_is_monotone_in_each_bath_amplitude() {
    let p = params();
    let scan = |build: fn(f64) -> NoiseModel| {
        let mut last = f64::INFINITY;
        for amp in [0.0, 0.1, 0.3, 0.9] {
            let stats = noisy_protocol_fidelity(&p, &build(amp), 8_000, 11).unwrap();
            assert!(
                stats.mean_fidelity <= last + 3.0 * stats.stderr + 1e-4,
                "non-monotone at amplitude {amp}: {} after {last}",
                stats.mean_fidelity
            );
            last = stats.mean_fidelity;
        }
    };
    scan(|a| NoiseModel {
        hyperfine_sigma_o: a,
        ..Default::default()
    });
    scan(|a| NoiseModel {
        hyperfine_sigma_e: a,
        ..Default::default()
    });
    scan(|a| NoiseModel {
        charge_sigma_o: 10.0 * a,
        ..Default::default()
    });
    scan(|a| NoiseModel {
        charge_sigma_e: 10.0 * a,
        ..Default::default()
    });
}

#[test]
fn leak_population_matches_the_leakage_rate() {
    let p = params();
    let rate = 0.07;
    let model = NoiseModel {
        leakage_rate: rate,
        ..Default::default()
    };
    let n = 20_000;
    let stats = noisy_protocol_fidelity(&p, &model, n, 29).unwrap();
    // each delivered state is fully leaked or fully intact, so the mean leak
    // population is binomial around the per-cycle rate
    let sigma = (rate * (1.0 - rate) / stats.n_success as f64).sqrt();
    assert!(
        (stats.mean_leak_population - rate).abs() < 3.0 * sigma,
        "leak {} vs {rate}",
        stats.mean_leak_population
    );
}
