//! JSON document form of a five-dot model.

use serde::Deserialize;

use dotmem_core::hubbard::{DotId, HubbardSystem, Orbital};

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HubbardSystemDoc {
    pub dots: Vec<DotDoc>,
    pub tunnel: Vec<TunnelDoc>,
    pub dielectric: f64,
    pub detunings: DetuningsDoc,
    #[serde(default)]
    pub coulomb_overrides: Vec<CoulombDoc>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DotDoc {
    pub id: String,
    pub center: [f64; 3],
    pub widths: [f64; 3],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TunnelDoc {
    pub pair: [String; 2],
    pub t_uev: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoulombDoc {
    pub pair: [String; 2],
    pub u_uev: f64,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetuningsDoc {
    pub epsilon_o_uev: f64,
    pub epsilon_e_uev: f64,
    pub epsilon_23_uev: f64,
}

fn dot_id(label: &str) -> Result<DotId, CliError> {
    match label {
        "T" => Ok(DotId::T),
        "B" => Ok(DotId::B),
        "1" => Ok(DotId::D1),
        "2" => Ok(DotId::D2),
        "3" => Ok(DotId::D3),
        other => Err(CliError::schema(format!(
            "unknown dot id `{other}` (expected T, B, 1, 2 or 3)"
        ))),
    }
}

impl HubbardSystemDoc {
    pub fn build(&self) -> Result<HubbardSystem, CliError> {
        let mut builder = HubbardSystem::builder()
            .dielectric(self.dielectric)
            .detunings(
                self.detunings.epsilon_o_uev,
                self.detunings.epsilon_e_uev,
                self.detunings.epsilon_23_uev,
            );
        for dot in &self.dots {
            let orbital = Orbital::new(dot.center, dot.widths)
                .map_err(|e| CliError::schema(format!("dot {}: {e}", dot.id)))?;
            builder = builder.dot(dot_id(&dot.id)?, orbital);
        }
        for t in &self.tunnel {
            builder = builder.tunnel(dot_id(&t.pair[0])?, dot_id(&t.pair[1])?, t.t_uev);
        }
        for u in &self.coulomb_overrides {
            builder = builder.coulomb_override(dot_id(&u.pair[0])?, dot_id(&u.pair[1])?, u.u_uev);
        }
        builder
            .build()
            .map_err(|e| CliError::schema(format!("system: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_builds() {
        let doc: HubbardSystemDoc = serde_json::from_str(
            r#"{
                "dots": [
                    {"id": "T", "center": [0, 0, 40], "widths": [3, 3, 2]},
                    {"id": "B", "center": [0, 0, 30], "widths": [3, 3, 2]},
                    {"id": "1", "center": [0, 0, 0], "widths": [20, 20, 3]},
                    {"id": "2", "center": [100, 0, 0], "widths": [20, 20, 3]},
                    {"id": "3", "center": [200, 0, 0], "widths": [20, 20, 3]}
                ],
                "tunnel": [
                    {"pair": ["T", "B"], "t_uev": 58.0},
                    {"pair": ["1", "2"], "t_uev": 30.0}
                ],
                "dielectric": 12.9,
                "detunings": {"epsilon_o_uev": 600.0, "epsilon_e_uev": 300.0, "epsilon_23_uev": 4000.0}
            }"#,
        )
        .unwrap();
        let system = doc.build().unwrap();
        let couplings = system.effective_couplings().unwrap();
        assert!(couplings.j_oe.abs() > 0.0);
        assert!(couplings.zz_identity_residual() < 1e-12);
    }

    #[test]
    fn unknown_dot_id_is_a_schema_error() {
        let doc: HubbardSystemDoc = serde_json::from_str(
            r#"{
                "dots": [{"id": "X", "center": [0,0,0], "widths": [1,1,1]}],
                "tunnel": [],
                "dielectric": 12.9,
                "detunings": {"epsilon_o_uev": 0, "epsilon_e_uev": 0, "epsilon_23_uev": 0}
            }"#,
        )
        .unwrap();
        assert!(matches!(doc.build(), Err(CliError::Schema(_))));
    }
}
