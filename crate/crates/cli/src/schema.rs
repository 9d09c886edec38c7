//! Human-readable schema reference for the `schema` verb. The same tables
//! live in `docs/schemas.md`.

pub const KINDS: [&str; 6] = [
    "exchange-sweep",
    "coupling-map",
    "protocol",
    "hom-fidelity",
    "band-profile",
    "rate-estimate",
];

pub fn describe(kind: Option<&str>) -> Result<String, String> {
    let mut out = String::new();
    match kind {
        None => {
            out.push_str(COMMON);
            for k in KINDS {
                out.push('\n');
                out.push_str(kind_text(k).unwrap());
            }
        }
        Some(k) => {
            out.push_str(COMMON);
            out.push('\n');
            out.push_str(kind_text(k).ok_or_else(|| {
                format!("unknown scenario kind `{k}` (expected one of {KINDS:?})")
            })?);
        }
    }
    Ok(out)
}

fn kind_text(kind: &str) -> Option<&'static str> {
    match kind {
        "exchange-sweep" => Some(EXCHANGE_SWEEP),
        "coupling-map" => Some(COUPLING_MAP),
        "protocol" => Some(PROTOCOL),
        "hom-fidelity" => Some(HOM_FIDELITY),
        "band-profile" => Some(BAND_PROFILE),
        "rate-estimate" => Some(RATE_ESTIMATE),
        _ => None,
    }
}

const COMMON: &str = "\
scenario document (JSON):
  kind    one of exchange-sweep | coupling-map | protocol | hom-fidelity |
          band-profile | rate-estimate
  seed    u64; --seed overrides
  output  primary output path, resolved against --out
  params  kind-specific block (below)

Every run writes `<output stem>.manifest.json` next to the primary output
(run id, tool version, input hash, seed, output list, wall time). Primary
outputs are byte-identical for identical document + seed; the manifest is
not (wall time). CSV files start with `# run_id=...`; JSON-lines files start
with a `{\"run_id\": ...}` line.
";

const EXCHANGE_SWEEP: &str = "\
exchange-sweep — singlet-triplet splitting vs detuning
  params: epsilon_start_uev, epsilon_stop_uev, steps (>= 2), tunnel_uev (> 0)
  output: CSV columns epsilon_uev, j_uev, theta_rad
";

const COUPLING_MAP: &str = "\
coupling-map — dipole-dipole energy vs lateral dot placement
  params.geometry: saqdm_top [x,y,z] nm, saqdm_bottom, gqd [3 x [x,y,z]],
                   gate_plane_z (nm | null = unscreened), dielectric
  params.grid:     half_extent_nm, step_nm
  params.contour_levels_uev: optional list -> `<stem>_contours.csv`
                   (level_uev, radius_nm, diameter_nm; equivalent-area radius)
  output: CSV columns x_nm, y_nm, delta_dd_uev (row-major in y, then x)
";

const PROTOCOL: &str = "\
protocol — repeat-until-success entanglement transfer, one record per shot
  params: shots, detection_efficiency [0,1], cycle_time_ps,
          couplings { theta_o_rad, theta_e_rad, delta_dd_uev, j_o_uev,
                      j_e_uev, j_23_uev, delta_j_o_uev, j_oe_uev? }
          | system { dots[], tunnel[], dielectric, detunings } (exclusive),
          t_cz_ps? (default pi*hbar/(2 j_oe)), j_o_emit_uev?, max_attempts?,
          init_fidelity?, post_emit_wait_ps?, pre_herald_wait_ps?,
          noise? { hyperfine_sigma_o_uev, hyperfine_sigma_e_uev,
                   charge_sigma_o_uev, charge_sigma_e_uev, leakage_rate }
  system document: dots[] {id: T|B|1|2|3, center [nm], widths [nm]},
          tunnel[] {pair, t_uev}, dielectric, detunings {epsilon_o_uev,
          epsilon_e_uev, epsilon_23_uev}, coulomb_overrides[]? {pair, u_uev}
  output: JSON lines {seed, attempts, outcome, fidelity?, elapsed_ps,
          leak_population} + `<stem>.summary.json`
";

const HOM_FIDELITY: &str = "\
hom-fidelity — two-photon interference fidelity under detector jitter
  params: n_samples (>= 1000),
          packets {h1,h2,v1,v2: {carrier_offset_rad_ps, decay_per_ps,
                   arrival_ps?}},
          detector {jitter1_ps?, jitter2_ps?, efficiency?, time_resolution_ps?},
          sweep?: [{param, values[]}] cartesian product; param is a dotted
          path like h1.carrier_offset_rad_ps or detector.jitter1_ps
  output: CSV columns <swept params...>, fidelity_mean, fidelity_stderr, n
";

const BAND_PROFILE: &str = "\
band-profile — 1-D self-consistent conduction-band profile
  params: stack = \"default\" | [layers top-down: {material, thickness_nm,
          donor_density_cm3?, space_charge?}],
          material = \"GaAs\" | \"Al0.3Ga0.7As\" | \"Al0.4Ga0.6As\" | \"AlAs\" |
          \"InAs dots\" | \"oxide\" | {label, cb_offset_ev, rel_permittivity,
          effective_mass},
          top_barrier_ev?, bottom_barrier_ev?, top_bias_v?, bottom_bias_v?,
          options? {grid_step_nm, mixing, max_iterations, tolerance_ev,
                    n_bound_states}
  output: CSV columns z_nm, conduction_band_ev, density_nm3, psi_0.. +
          `<stem>.summary.json` (sheet density, bound energies, iterations,
          Gauss-law residual, top-gate detuning lever arm)
";

const RATE_ESTIMATE: &str = "\
rate-estimate — heralded link rate arithmetic
  params: p_herald [0,1], collection_efficiency [0,1], cycle_time_ps,
          detector_dead_time_ps?
  output: JSON {attempts_per_s, successes_per_s, effective_cycle_ps};
          the effective cycle is max(cycle, dead time) and the herald
          probability is capped at the protocol ceiling of 1/2
";
