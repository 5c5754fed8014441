//! Circuit documents: `{n_ions, n_shots, gates: [{kind, ions, theta, i, j}]}`.

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::Path;

use rfsc_core::emitsim::{CircuitSpec, GateKind, NativeGate};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum CircuitError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("circuit does not match the schema: {0}")]
    Schema(String),
    #[error("invalid circuit: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GateDoc {
    pub kind: GateKind,
    pub ions: Vec<usize>,
    /// Rotation angle in radians. Required for Rx/Ry; MS defaults to π/2.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default)]
    pub i: usize,
    #[serde(default = "one")]
    pub j: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitDoc {
    pub n_ions: usize,
    #[serde(default = "one")]
    pub n_shots: usize,
    pub gates: Vec<GateDoc>,
}

impl CircuitDoc {
    pub fn from_spec(spec: &CircuitSpec) -> Self {
        let gates = spec
            .gates
            .iter()
            .map(|g| GateDoc {
                kind: g.kind,
                ions: g.ions.clone(),
                theta: Some(g.theta_rad),
                i: g.level_i,
                j: g.level_j,
            })
            .collect();
        Self { n_ions: spec.n_ions, n_shots: spec.n_shots, gates }
    }

    pub fn to_spec(&self) -> Result<CircuitSpec, CircuitError> {
        let mut gates = Vec::with_capacity(self.gates.len());
        for (k, g) in self.gates.iter().enumerate() {
            let theta = match (g.kind, g.theta) {
                (_, Some(t)) => t,
                (GateKind::Ms, None) => FRAC_PI_2,
                (_, None) => return Err(CircuitError::Schema(format!("gates[{k}]: rotation needs `theta`"))),
            };
            gates.push(NativeGate {
                kind: g.kind,
                ions: g.ions.clone(),
                theta_rad: theta,
                level_i: g.i,
                level_j: g.j,
                decoy: false,
            });
        }
        let spec = CircuitSpec::new(self.n_ions, gates, self.n_shots);
        spec.validate().map_err(|e| CircuitError::Invalid(e.to_string()))?;
        Ok(spec)
    }
}

pub fn parse_circuit(text: &str) -> Result<CircuitSpec, CircuitError> {
    let doc: CircuitDoc = serde_json::from_str(text).map_err(|e| CircuitError::Schema(e.to_string()))?;
    doc.to_spec()
}

pub fn load_circuit(path: &Path) -> Result<CircuitSpec, CircuitError> {
    let text =
        fs::read_to_string(path).map_err(|source| CircuitError::Io { path: path.display().to_string(), source })?;
    parse_circuit(&text)
}
