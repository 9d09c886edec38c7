//! Scenario document schema. See `docs/schemas.md` for the field tables.

use serde::Deserialize;

use crate::error::CliError;
use crate::hubbard_doc::HubbardSystemDoc;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: ScenarioKind,
    pub seed: u64,
    /// Primary output path, resolved against the output directory.
    pub output: String,
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum ScenarioKind {
    #[serde(rename = "exchange-sweep")]
    ExchangeSweep,
    #[serde(rename = "coupling-map")]
    CouplingMap,
    #[serde(rename = "protocol")]
    Protocol,
    #[serde(rename = "hom-fidelity")]
    HomFidelity,
    #[serde(rename = "band-profile")]
    BandProfile,
    #[serde(rename = "rate-estimate")]
    RateEstimate,
}

impl ScenarioKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::ExchangeSweep => "exchange-sweep",
            Self::CouplingMap => "coupling-map",
            Self::Protocol => "protocol",
            Self::HomFidelity => "hom-fidelity",
            Self::BandProfile => "band-profile",
            Self::RateEstimate => "rate-estimate",
        }
    }
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::schema(e.to_string()))
}

/// Typed parameter block per kind, deserialized from `params`.
pub fn params_of<T: serde::de::DeserializeOwned>(scenario: &Scenario) -> Result<T, CliError> {
    serde_json::from_value(scenario.params.clone())
        .map_err(|e| CliError::schema(format!("params: {e}")))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExchangeSweepParams {
    pub epsilon_start_uev: f64,
    pub epsilon_stop_uev: f64,
    pub steps: usize,
    pub tunnel_uev: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingMapParams {
    pub geometry: GeometryDoc,
    pub grid: GridDoc,
    #[serde(default)]
    pub contour_levels_uev: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDoc {
    pub saqdm_top: [f64; 3],
    pub saqdm_bottom: [f64; 3],
    pub gqd: [[f64; 3]; 3],
    #[serde(default)]
    pub gate_plane_z: Option<f64>,
    pub dielectric: f64,
}

impl GeometryDoc {
    pub fn build(&self) -> dotmem_core::electrostatics::DeviceGeometry {
        dotmem_core::electrostatics::DeviceGeometry {
            saqdm_top: self.saqdm_top,
            saqdm_bottom: self.saqdm_bottom,
            gqd: self.gqd,
            gate_plane_z: self.gate_plane_z,
            dielectric: self.dielectric,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridDoc {
    pub half_extent_nm: f64,
    pub step_nm: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolScenarioParams {
    pub shots: usize,
    pub detection_efficiency: f64,
    pub cycle_time_ps: f64,
    #[serde(default)]
    pub couplings: Option<CouplingsDoc>,
    #[serde(default)]
    pub system: Option<HubbardSystemDoc>,
    #[serde(default)]
    pub t_cz_ps: Option<f64>,
    #[serde(default)]
    pub j_o_emit_uev: Option<f64>,
    #[serde(default)]
    pub max_attempts: Option<u64>,
    #[serde(default)]
    pub init_fidelity: Option<f64>,
    #[serde(default)]
    pub post_emit_wait_ps: Option<f64>,
    #[serde(default)]
    pub pre_herald_wait_ps: Option<f64>,
    #[serde(default)]
    pub noise: Option<NoiseDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingsDoc {
    pub theta_o_rad: f64,
    pub theta_e_rad: f64,
    pub delta_dd_uev: f64,
    pub j_o_uev: f64,
    pub j_e_uev: f64,
    pub j_23_uev: f64,
    pub delta_j_o_uev: f64,
    /// Optional redundant value, validated against the stored-field identity.
    #[serde(default)]
    pub j_oe_uev: Option<f64>,
}

impl CouplingsDoc {
    pub fn build(&self) -> Result<dotmem_core::hubbard::EffectiveCouplings, CliError> {
        let c = dotmem_core::hubbard::EffectiveCouplings::from_parts(
            self.theta_o_rad,
            self.theta_e_rad,
            self.delta_dd_uev,
            self.j_o_uev,
            self.j_e_uev,
            self.j_23_uev,
            self.delta_j_o_uev,
        )
        .map_err(|e| CliError::schema(format!("couplings: {e}")))?;
        if let Some(j_oe) = self.j_oe_uev {
            let rel = (j_oe - c.j_oe).abs() / c.j_oe.abs().max(1e-12);
            if rel > 1e-9 {
                return Err(CliError::schema(format!(
                    "couplings.j_oe_uev = {j_oe} violates the sin² sin² Δ/4 identity \
                     (expected {})",
                    c.j_oe
                )));
            }
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseDoc {
    #[serde(default)]
    pub hyperfine_sigma_o_uev: f64,
    #[serde(default)]
    pub hyperfine_sigma_e_uev: f64,
    #[serde(default)]
    pub charge_sigma_o_uev: f64,
    #[serde(default)]
    pub charge_sigma_e_uev: f64,
    #[serde(default)]
    pub leakage_rate: f64,
}

impl NoiseDoc {
    pub fn build(&self) -> Result<dotmem_core::noise::NoiseModel, CliError> {
        let model = dotmem_core::noise::NoiseModel {
            hyperfine_sigma_o: self.hyperfine_sigma_o_uev,
            hyperfine_sigma_e: self.hyperfine_sigma_e_uev,
            charge_sigma_o: self.charge_sigma_o_uev,
            charge_sigma_e: self.charge_sigma_e_uev,
            leakage_rate: self.leakage_rate,
        };
        model
            .validate()
            .map_err(|e| CliError::schema(format!("noise: {e}")))?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomFidelityParams {
    pub n_samples: usize,
    pub packets: PacketsDoc,
    pub detector: DetectorDoc,
    #[serde(default)]
    pub sweep: Vec<SweepAxis>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketDoc {
    pub carrier_offset_rad_ps: f64,
    pub decay_per_ps: f64,
    #[serde(default)]
    pub arrival_ps: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PacketsDoc {
    pub h1: PacketDoc,
    pub h2: PacketDoc,
    pub v1: PacketDoc,
    pub v2: PacketDoc,
}

impl PacketsDoc {
    pub fn build(&self) -> Result<dotmem_core::interference::PacketSet, CliError> {
        use dotmem_core::interference::{Polarization, Port, Wavepacket};
        let mk = |doc: &PacketDoc, pol, port| {
            Wavepacket::new(
                pol,
                port,
                doc.carrier_offset_rad_ps,
                doc.decay_per_ps,
                doc.arrival_ps,
            )
            .map_err(|e| CliError::schema(format!("packet: {e}")))
        };
        dotmem_core::interference::PacketSet::new(
            mk(&self.h1, Polarization::H, Port::One)?,
            mk(&self.h2, Polarization::H, Port::Two)?,
            mk(&self.v1, Polarization::V, Port::One)?,
            mk(&self.v2, Polarization::V, Port::Two)?,
        )
        .map_err(|e| CliError::schema(format!("packets: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorDoc {
    #[serde(default)]
    pub jitter1_ps: f64,
    #[serde(default)]
    pub jitter2_ps: f64,
    #[serde(default = "one")]
    pub efficiency: f64,
    #[serde(default)]
    pub time_resolution_ps: f64,
}

fn one() -> f64 {
    1.0
}

impl DetectorDoc {
    pub fn build(&self) -> Result<dotmem_core::interference::DetectorModel, CliError> {
        let d = dotmem_core::interference::DetectorModel {
            jitter1_ps: self.jitter1_ps,
            jitter2_ps: self.jitter2_ps,
            efficiency: self.efficiency,
            time_resolution_ps: self.time_resolution_ps,
        };
        d.validate()
            .map_err(|e| CliError::schema(format!("detector: {e}")))?;
        Ok(d)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted path: `h1|h2|v1|v2 . carrier_offset_rad_ps|decay_per_ps|arrival_ps`
    /// or `detector . jitter1_ps|jitter2_ps|time_resolution_ps`.
    pub param: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandProfileParams {
    pub stack: StackDoc,
    #[serde(default)]
    pub top_barrier_ev: Option<f64>,
    #[serde(default)]
    pub bottom_barrier_ev: Option<f64>,
    #[serde(default)]
    pub top_bias_v: Option<f64>,
    #[serde(default)]
    pub bottom_bias_v: Option<f64>,
    #[serde(default)]
    pub options: Option<SolverOptionsDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StackDoc {
    /// `"default"` selects the built-in device epitaxy.
    Named(String),
    Layers(Vec<LayerDoc>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub material: MaterialDoc,
    pub thickness_nm: f64,
    #[serde(default)]
    pub donor_density_cm3: f64,
    #[serde(default = "yes")]
    pub space_charge: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum MaterialDoc {
    Named(String),
    Custom {
        label: String,
        cb_offset_ev: f64,
        rel_permittivity: f64,
        effective_mass: f64,
    },
}

impl MaterialDoc {
    pub fn build(&self) -> Result<dotmem_core::electrostatics::Material, CliError> {
        use dotmem_core::electrostatics::Material;
        match self {
            Self::Named(name) => match name.as_str() {
                "GaAs" => Ok(Material::gaas()),
                "Al0.3Ga0.7As" => Ok(Material::algaas30()),
                "Al0.4Ga0.6As" => Ok(Material::algaas40()),
                "AlAs" => Ok(Material::alas()),
                "InAs dots" => Ok(Material::inas_dots()),
                "oxide" => Ok(Material::oxide()),
                other => Err(CliError::schema(format!("unknown material `{other}`"))),
            },
            Self::Custom {
                label,
                cb_offset_ev,
                rel_permittivity,
                effective_mass,
            } => Ok(Material::new(
                label,
                *cb_offset_ev,
                *rel_permittivity,
                *effective_mass,
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptionsDoc {
    #[serde(default)]
    pub grid_step_nm: Option<f64>,
    #[serde(default)]
    pub mixing: Option<f64>,
    #[serde(default)]
    pub max_iterations: Option<usize>,
    #[serde(default)]
    pub tolerance_ev: Option<f64>,
    #[serde(default)]
    pub n_bound_states: Option<usize>,
}

impl SolverOptionsDoc {
    pub fn build(&self) -> dotmem_core::electrostatics::SolverOptions {
        let mut o = dotmem_core::electrostatics::SolverOptions::default();
        if let Some(v) = self.grid_step_nm {
            o.grid_step_nm = v;
        }
        if let Some(v) = self.mixing {
            o.mixing = v;
        }
        if let Some(v) = self.max_iterations {
            o.max_iterations = v;
        }
        if let Some(v) = self.tolerance_ev {
            o.tolerance_ev = v;
        }
        if let Some(v) = self.n_bound_states {
            o.n_bound_states = v;
        }
        o
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateEstimateParams {
    pub p_herald: f64,
    pub collection_efficiency: f64,
    pub cycle_time_ps: f64,
    #[serde(default)]
    pub detector_dead_time_ps: f64,
}
