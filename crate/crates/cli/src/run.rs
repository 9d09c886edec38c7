//! Scenario dispatcher: validates the document, runs the computation, and
//! writes the primary outputs plus their manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;

use dotmem_core::electrostatics::{
    contour_radius, delta_dd_map, lever_arm, solve_band_profile, GateSide, LateralGrid, Layer,
    LayerStack,
};
use dotmem_core::hubbard::{exchange_energy, mixing_angle};
use dotmem_core::interference::mean_bell_fidelity;
use dotmem_core::register::{run_protocol, ProtocolOutcome, ProtocolParams};

use crate::error::CliError;
use crate::output::{
    input_sha256, manifest_path_for, run_id, write_json, write_manifest, CsvWriter,
    JsonLinesWriter, Manifest, ToolInfo,
};
use crate::scenario::{
    params_of, parse_scenario, BandProfileParams, CouplingMapParams, DetectorDoc,
    ExchangeSweepParams, HomFidelityParams, PacketsDoc, ProtocolScenarioParams, RateEstimateParams,
    Scenario, ScenarioKind, StackDoc, SweepAxis,
};

/// Command-line overrides applied on top of the document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Files produced by a run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub run_id: String,
    pub outputs: Vec<PathBuf>,
    pub manifest: PathBuf,
}

/// Parses and semantically validates a document without running it.
pub fn validate_scenario(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let scenario = parse_scenario(&text)?;
    match scenario.kind {
        ScenarioKind::ExchangeSweep => {
            let p: ExchangeSweepParams = params_of(&scenario)?;
            if p.steps < 2 {
                return Err(CliError::schema(
                    "params.steps: need at least 2 sweep points",
                ));
            }
            if !(p.tunnel_uev > 0.0) {
                return Err(CliError::schema("params.tunnel_uev: must be positive"));
            }
        }
        ScenarioKind::CouplingMap => {
            let p: CouplingMapParams = params_of(&scenario)?;
            p.geometry
                .build()
                .validate()
                .map_err(|e| CliError::schema(format!("params.geometry: {e}")))?;
            if !(p.grid.step_nm > 0.0) || !(p.grid.half_extent_nm > 0.0) {
                return Err(CliError::schema(
                    "params.grid: extent and step must be positive",
                ));
            }
        }
        ScenarioKind::Protocol => {
            let p: ProtocolScenarioParams = params_of(&scenario)?;
            if p.shots == 0 {
                return Err(CliError::schema("params.shots: must be nonzero"));
            }
            build_protocol_params(&p)?;
            if let Some(noise) = &p.noise {
                noise.build()?;
            }
        }
        ScenarioKind::HomFidelity => {
            let p: HomFidelityParams = params_of(&scenario)?;
            if p.n_samples < 1000 {
                return Err(CliError::schema("params.n_samples: need at least 1000"));
            }
            p.packets.build()?;
            p.detector.build()?;
            for axis in &p.sweep {
                if axis.values.is_empty() {
                    return Err(CliError::schema(format!(
                        "params.sweep `{}`: empty value list",
                        axis.param
                    )));
                }
                apply_axis(&p.packets, &p.detector, axis, axis.values[0])?;
            }
        }
        ScenarioKind::BandProfile => {
            let p: BandProfileParams = params_of(&scenario)?;
            build_stack(&p)?
                .validate()
                .map_err(|e| CliError::schema(format!("params.stack: {e}")))?;
        }
        ScenarioKind::RateEstimate => {
            let p: RateEstimateParams = params_of(&scenario)?;
            crate::estimate_rate(
                p.p_herald,
                p.collection_efficiency,
                p.cycle_time_ps,
                p.detector_dead_time_ps,
            )?;
        }
    }
    Ok(scenario)
}

/// Runs a scenario document end to end.
pub fn run_scenario(path: &Path, overrides: &Overrides) -> Result<RunOutcome, CliError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("{}: {e}", path.display())))?;
    let mut scenario = validate_scenario(path)?;
    if let Some(seed) = overrides.seed {
        scenario.seed = seed;
    }
    if let Some(threads) = overrides.threads {
        // a dedicated pool keeps the global default untouched; install() runs
        // the whole scenario inside it
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::io(e.to_string()))?;
        let scenario = scenario.clone();
        let out_dir = overrides.out_dir.clone();
        return pool.install(move || execute(&scenario, &text, path, out_dir.as_deref(), started));
    }
    execute(
        &scenario,
        &text,
        path,
        overrides.out_dir.as_deref(),
        started,
    )
}

fn execute(
    scenario: &Scenario,
    raw_text: &str,
    scenario_path: &Path,
    out_dir: Option<&Path>,
    started: Instant,
) -> Result<RunOutcome, CliError> {
    let id = run_id(raw_text.as_bytes(), scenario.seed);
    let primary = match out_dir {
        Some(dir) => dir.join(&scenario.output),
        None => PathBuf::from(&scenario.output),
    };
    let (outputs, summary) = match scenario.kind {
        ScenarioKind::ExchangeSweep => run_exchange_sweep(scenario, &id, &primary)?,
        ScenarioKind::CouplingMap => run_coupling_map(scenario, &id, &primary)?,
        ScenarioKind::Protocol => run_protocol_scenario(scenario, &id, &primary)?,
        ScenarioKind::HomFidelity => run_hom(scenario, &id, &primary)?,
        ScenarioKind::BandProfile => run_band_profile(scenario, &id, &primary)?,
        ScenarioKind::RateEstimate => run_rate_estimate(scenario, &id, &primary)?,
    };
    let manifest_path = manifest_path_for(&primary);
    let manifest = Manifest {
        run_id: &id,
        tool: ToolInfo::current(),
        scenario_path: scenario_path.display().to_string(),
        input_sha256: input_sha256(raw_text.as_bytes()),
        seed: scenario.seed,
        kind: scenario.kind.name(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        wall_time_ms: started.elapsed().as_millis(),
        summary,
    };
    write_manifest(&manifest_path, &manifest)?;
    Ok(RunOutcome {
        run_id: id,
        outputs,
        manifest: manifest_path,
    })
}

fn run_exchange_sweep(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let p: ExchangeSweepParams = params_of(scenario)?;
    let mut csv = CsvWriter::create(primary, id, &["epsilon_uev", "j_uev", "theta_rad"])?;
    let span = p.epsilon_stop_uev - p.epsilon_start_uev;
    for k in 0..p.steps {
        let eps = p.epsilon_start_uev + span * k as f64 / (p.steps - 1) as f64;
        let j = exchange_energy(eps, p.tunnel_uev).map_err(|e| CliError::numeric(e.to_string()))?;
        let theta =
            mixing_angle(eps, p.tunnel_uev).map_err(|e| CliError::numeric(e.to_string()))?;
        csv.row(&[eps, j, theta])?;
    }
    Ok((vec![csv.finish()], serde_json::Value::Null))
}

fn run_coupling_map(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let p: CouplingMapParams = params_of(scenario)?;
    let geometry = p.geometry.build();
    let grid = LateralGrid::centered(p.grid.half_extent_nm, p.grid.step_nm);
    let map = delta_dd_map(&geometry, grid).map_err(|e| CliError::numeric(e.to_string()))?;
    let mut csv = CsvWriter::create(primary, id, &["x_nm", "y_nm", "delta_dd_uev"])?;
    for j in 0..grid.ny {
        for i in 0..grid.nx {
            csv.row(&[grid.x(i), grid.y(j), map.value(i, j)])?;
        }
    }
    let mut outputs = vec![csv.finish()];
    let mut summary = serde_json::Map::new();
    summary.insert("max_abs_delta_dd_uev".into(), map.max_abs().into());
    if !p.contour_levels_uev.is_empty() {
        let contour_path = sibling(primary, "_contours.csv");
        let mut contours = CsvWriter::create(
            &contour_path,
            id,
            &["level_uev", "radius_nm", "diameter_nm"],
        )?;
        for level in &p.contour_levels_uev {
            if let Some(radius) = contour_radius(&map, *level) {
                contours.row(&[*level, radius, 2.0 * radius])?;
            }
        }
        outputs.push(contours.finish());
    }
    Ok((outputs, serde_json::Value::Object(summary)))
}

fn sibling(primary: &Path, suffix: &str) -> PathBuf {
    let stem = primary
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_default();
    primary.with_file_name(format!("{stem}{suffix}"))
}

pub(crate) fn build_protocol_params(
    p: &ProtocolScenarioParams,
) -> Result<ProtocolParams, CliError> {
    let couplings = match (&p.couplings, &p.system) {
        (Some(doc), None) => doc.build()?,
        (None, Some(system)) => system
            .build()?
            .effective_couplings()
            .map_err(|e| CliError::schema(format!("system: {e}")))?,
        (Some(_), Some(_)) => {
            return Err(CliError::schema(
                "give either `couplings` or `system`, not both",
            ))
        }
        (None, None) => {
            return Err(CliError::schema(
                "protocol needs `couplings` or a `system` document",
            ))
        }
    };
    if !(couplings.j_oe.abs() > 0.0) && p.t_cz_ps.is_none() {
        return Err(CliError::schema(
            "zero ZZ coupling: specify t_cz_ps explicitly",
        ));
    }
    let mut params =
        ProtocolParams::from_couplings(couplings, p.detection_efficiency, p.cycle_time_ps);
    if let Some(t) = p.t_cz_ps {
        params.t_cz_ps = t;
    }
    if let Some(j) = p.j_o_emit_uev {
        params.j_o_emit = j;
    }
    if let Some(m) = p.max_attempts {
        params.max_attempts = m;
    }
    if let Some(f) = p.init_fidelity {
        params.init_fidelity = f;
    }
    if let Some(w) = p.post_emit_wait_ps {
        params.post_emit_wait_ps = w;
    }
    if let Some(w) = p.pre_herald_wait_ps {
        params.pre_herald_wait_ps = w;
    }
    params
        .validate()
        .map_err(|e| CliError::schema(e.to_string()))?;
    Ok(params)
}

#[derive(serde::Serialize)]
struct ShotRecord {
    seed: u64,
    attempts: u64,
    outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<f64>,
    elapsed_ps: f64,
    leak_population: f64,
}

fn run_protocol_scenario(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let p: ProtocolScenarioParams = params_of(scenario)?;
    let params = build_protocol_params(&p)?;
    let noise = p.noise.as_ref().map(|n| n.build()).transpose()?;
    let records: Result<Vec<_>, CliError> = (0..p.shots)
        .into_par_iter()
        .map(|k| {
            run_protocol(
                &params,
                noise.as_ref(),
                scenario.seed.wrapping_add(k as u64),
            )
            .map_err(|e| CliError::numeric(e.to_string()))
        })
        .collect();
    let records = records?;

    let mut jsonl = JsonLinesWriter::create(primary, id)?;
    let mut successes = 0usize;
    let mut attempts_total = 0u64;
    let mut fid_sum = 0.0;
    let mut fid_sq = 0.0;
    for record in &records {
        attempts_total += record.attempts;
        if record.outcome == ProtocolOutcome::Success {
            successes += 1;
            let f = record.fidelity.unwrap_or(0.0);
            fid_sum += f;
            fid_sq += f * f;
        }
        jsonl.record(&ShotRecord {
            seed: record.seed,
            attempts: record.attempts,
            outcome: match record.outcome {
                ProtocolOutcome::Success => "success",
                ProtocolOutcome::Exhausted => "exhausted",
            },
            fidelity: record.fidelity,
            elapsed_ps: record.elapsed_ps,
            leak_population: record.leak_population,
        })?;
    }
    let n_succ = successes.max(1) as f64;
    let mean_fidelity = fid_sum / n_succ;
    let fid_stderr = ((fid_sq / n_succ - mean_fidelity * mean_fidelity).max(0.0) / n_succ).sqrt();
    let success_per_attempt = successes as f64 / attempts_total.max(1) as f64;
    let summary = serde_json::json!({
        "shots": p.shots,
        "successes": successes,
        "success_per_attempt": success_per_attempt,
        "mean_attempts": attempts_total as f64 / p.shots as f64,
        "mean_fidelity": mean_fidelity,
        "fidelity_stderr": fid_stderr,
        "t_cz_ps": params.t_cz_ps,
        "herald_rate_per_s": success_per_attempt * 1.0e12 / params.cycle_time_ps,
    });
    let summary_path = sibling(primary, ".summary.json");
    let summary_file = write_json(&summary_path, id, &summary)?;
    Ok((vec![jsonl.finish(), summary_file], summary))
}

fn apply_axis(
    packets: &PacketsDoc,
    detector: &DetectorDoc,
    axis: &SweepAxis,
    value: f64,
) -> Result<(PacketsDoc, DetectorDoc), CliError> {
    let mut packets = *packets;
    let mut detector = *detector;
    let mut parts = axis.param.splitn(2, '.');
    let target = parts.next().unwrap_or_default();
    let field = parts.next().unwrap_or_default();
    if target == "detector" {
        match field {
            "jitter1_ps" => detector.jitter1_ps = value,
            "jitter2_ps" => detector.jitter2_ps = value,
            "time_resolution_ps" => detector.time_resolution_ps = value,
            other => {
                return Err(CliError::schema(format!(
                    "unknown sweep field detector.{other}"
                )))
            }
        }
        return Ok((packets, detector));
    }
    let packet = match target {
        "h1" => &mut packets.h1,
        "h2" => &mut packets.h2,
        "v1" => &mut packets.v1,
        "v2" => &mut packets.v2,
        other => return Err(CliError::schema(format!("unknown sweep target `{other}`"))),
    };
    match field {
        "carrier_offset_rad_ps" => packet.carrier_offset_rad_ps = value,
        "decay_per_ps" => packet.decay_per_ps = value,
        "arrival_ps" => packet.arrival_ps = value,
        other => {
            return Err(CliError::schema(format!(
                "unknown sweep field {target}.{other}"
            )))
        }
    }
    Ok((packets, detector))
}

fn run_hom(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    use rand::SeedableRng;
    let p: HomFidelityParams = params_of(scenario)?;
    // cartesian product over the sweep axes (empty sweep = single point)
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &p.sweep {
        let mut next = Vec::new();
        for point in &points {
            for v in &axis.values {
                let mut grown = point.clone();
                grown.push(*v);
                next.push(grown);
            }
        }
        points = next;
    }
    let results: Result<Vec<_>, CliError> = points
        .par_iter()
        .enumerate()
        .map(|(idx, point)| {
            let mut packets = p.packets;
            let mut detector = p.detector;
            for (axis, value) in p.sweep.iter().zip(point) {
                let (np, nd) = apply_axis(&packets, &detector, axis, *value)?;
                packets = np;
                detector = nd;
            }
            let set = packets.build()?;
            let model = detector.build()?;
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(scenario.seed.wrapping_add(idx as u64));
            mean_bell_fidelity(&set, &model, p.n_samples, &mut rng)
                .map_err(|e| CliError::numeric(e.to_string()))
        })
        .collect();
    let results = results?;

    let mut header: Vec<String> = p.sweep.iter().map(|a| a.param.replace('.', "_")).collect();
    header.extend(["fidelity_mean".into(), "fidelity_stderr".into(), "n".into()]);
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvWriter::create(primary, id, &header_refs)?;
    for (point, estimate) in points.iter().zip(&results) {
        let mut row = point.clone();
        row.extend([estimate.mean, estimate.stderr, estimate.n as f64]);
        csv.row(&row)?;
    }
    let summary = serde_json::json!({
        "points": results.len(),
        "coincidence_rate_scale": p.detector.efficiency * p.detector.efficiency,
    });
    Ok((vec![csv.finish()], summary))
}

pub(crate) fn build_stack(p: &BandProfileParams) -> Result<LayerStack, CliError> {
    let mut stack = match &p.stack {
        StackDoc::Named(name) if name == "default" => LayerStack::default_device(),
        StackDoc::Named(other) => {
            return Err(CliError::schema(format!(
                "unknown stack `{other}` (only \"default\" is named)"
            )))
        }
        StackDoc::Layers(layers) => {
            let mut built = Vec::with_capacity(layers.len());
            for layer in layers {
                built.push(Layer {
                    material: layer.material.build()?,
                    thickness_nm: layer.thickness_nm,
                    donor_density_cm3: layer.donor_density_cm3,
                    space_charge: layer.space_charge,
                });
            }
            LayerStack {
                layers: built,
                top_barrier_ev: 0.8,
                bottom_barrier_ev: 0.8,
                top_bias_v: 0.0,
                bottom_bias_v: 0.0,
            }
        }
    };
    if let Some(v) = p.top_barrier_ev {
        stack.top_barrier_ev = v;
    }
    if let Some(v) = p.bottom_barrier_ev {
        stack.bottom_barrier_ev = v;
    }
    if let Some(v) = p.top_bias_v {
        stack.top_bias_v = v;
    }
    if let Some(v) = p.bottom_bias_v {
        stack.bottom_bias_v = v;
    }
    Ok(stack)
}

fn run_band_profile(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let p: BandProfileParams = params_of(scenario)?;
    let stack = build_stack(&p)?;
    let options = p.options.map(|o| o.build()).unwrap_or_default();
    let solution =
        solve_band_profile(&stack, &options).map_err(|e| CliError::numeric(e.to_string()))?;

    let mut header = vec![
        "z_nm".to_string(),
        "conduction_band_ev".into(),
        "density_nm3".into(),
    ];
    for k in 0..solution.bound_states.len() {
        header.push(format!("psi_{k}"));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut csv = CsvWriter::create(primary, id, &header_refs)?;
    for (i, z) in solution.z_nm.iter().enumerate() {
        let mut row = vec![*z, solution.conduction_band_ev[i], solution.density_nm3[i]];
        for state in &solution.bound_states {
            row.push(state.wavefunction[i]);
        }
        csv.row(&row)?;
    }
    // the lever arm of the top gate across the stacked-dot layers is the
    // experimentally relevant detuning sensitivity; report it when the dot
    // layers are present
    let mut summary = serde_json::json!({
        "sheet_density_cm2": solution.sheet_density_nm2 * 1e14,
        "bound_energies_ev": solution.bound_states.iter().map(|s| s.energy_ev).collect::<Vec<_>>(),
        "iterations": solution.iterations,
        "gauss_law_residual": solution.gauss_law_residual,
    });
    if let (Some((dots_start, _)), Some(obj)) =
        (stack.layer_span("InAs dots"), summary.as_object_mut())
    {
        let la_top = lever_arm(&stack, GateSide::Top, dots_start + 1.5, &options)
            .map_err(|e| CliError::numeric(e.to_string()))?;
        let la_bottom = lever_arm(&stack, GateSide::Top, dots_start + 11.5, &options)
            .map_err(|e| CliError::numeric(e.to_string()))?;
        obj.insert(
            "top_gate_detuning_lever_arm_mev_per_v".into(),
            ((la_top - la_bottom).abs()).into(),
        );
    }
    let summary_path = sibling(primary, ".summary.json");
    let summary_file = write_json(&summary_path, id, &summary)?;
    Ok((vec![csv.finish(), summary_file], summary))
}

fn run_rate_estimate(
    scenario: &Scenario,
    id: &str,
    primary: &Path,
) -> Result<(Vec<PathBuf>, serde_json::Value), CliError> {
    let p: RateEstimateParams = params_of(scenario)?;
    let estimate = crate::estimate_rate(
        p.p_herald,
        p.collection_efficiency,
        p.cycle_time_ps,
        p.detector_dead_time_ps,
    )?;
    let body = serde_json::to_value(estimate).map_err(|e| CliError::io(e.to_string()))?;
    let file = write_json(primary, id, &body)?;
    Ok((vec![file], body))
}
