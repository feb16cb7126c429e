//! JSON array configuration files.
//!
//! ```json
//! {
//!   "qubits": [{"omega_ghz": 6.0, "gamma_wg_mhz": 10.0, "gamma_nr_mhz": 0.3}],
//!   "spacing_mm": 10.0,
//!   "omega_ref_ghz": 6.0
//! }
//! ```
//!
//! Geometry is given by exactly one of: `position_mm` on every qubit,
//! `spacing_mm`, or `spacing_ratio` (nearest-neighbour spacing over lambda0).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ArrayModel, Qubit, WaveguideMedium};
use crate::units::{ghz_to_rad, mhz_to_rad, rad_to_ghz, rad_to_mhz, CPW_VELOCITY};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub omega_ghz: f64,
    pub gamma_wg_mhz: f64,
    pub gamma_nr_mhz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position_mm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayConfig {
    pub qubits: Vec<QubitConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub velocity_m_per_s: Option<f64>,
    pub omega_ref_ghz: f64,
}

impl ArrayConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::config(
                "<json>",
                format!("line {} column {}: {e}", e.line(), e.column()),
            )
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    pub fn to_model(&self) -> Result<ArrayModel> {
        if self.qubits.is_empty() {
            return Err(Error::config("qubits", "at least one qubit is required"));
        }
        let velocity = self.velocity_m_per_s.unwrap_or(CPW_VELOCITY);
        let medium = WaveguideMedium::new(velocity, ghz_to_rad(self.omega_ref_ghz))
            .map_err(|e| Error::config("omega_ref_ghz/velocity_m_per_s", e.to_string()))?;

        let with_positions = self.qubits.iter().filter(|q| q.position_mm.is_some()).count();
        if with_positions != 0 && with_positions != self.qubits.len() {
            return Err(Error::config(
                "qubits[].position_mm",
                "position_mm must be given for every qubit or for none",
            ));
        }
        let per_qubit = with_positions > 0;
        let given = [per_qubit, self.spacing_mm.is_some(), self.spacing_ratio.is_some()]
            .iter()
            .filter(|&&b| b)
            .count();
        if given > 1 {
            return Err(Error::config(
                "spacing_mm/spacing_ratio/position_mm",
                "ambiguous geometry: give exactly one of per-qubit position_mm, spacing_mm, spacing_ratio",
            ));
        }

        let spacing = if let Some(mm) = self.spacing_mm {
            Some(mm * 1e-3)
        } else {
            self.spacing_ratio.map(|r| r * medium.lambda0())
        };
        let qubits = self
            .qubits
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let position = match (q.position_mm, spacing) {
                    (Some(mm), _) => mm * 1e-3,
                    (None, Some(d)) => i as f64 * d,
                    (None, None) if self.qubits.len() == 1 => 0.0,
                    (None, None) => {
                        return Err(Error::config(
                            "spacing_mm/spacing_ratio/position_mm",
                            "missing geometry: give one of per-qubit position_mm, spacing_mm, spacing_ratio",
                        ))
                    }
                };
                Qubit::new(
                    ghz_to_rad(q.omega_ghz),
                    mhz_to_rad(q.gamma_wg_mhz),
                    mhz_to_rad(q.gamma_nr_mhz),
                    position,
                )
                .map_err(|e| Error::config(format!("qubits[{i}]"), e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        ArrayModel::new(qubits, medium).map_err(|e| Error::config("qubits", e.to_string()))
    }

    /// Per-qubit positions representation of a model.
    pub fn from_model(model: &ArrayModel) -> Self {
        ArrayConfig {
            qubits: model
                .qubits()
                .iter()
                .map(|q| QubitConfig {
                    omega_ghz: rad_to_ghz(q.omega),
                    gamma_wg_mhz: rad_to_mhz(q.gamma_wg),
                    gamma_nr_mhz: rad_to_mhz(q.gamma_nr),
                    position_mm: Some(q.position * 1e3),
                })
                .collect(),
            spacing_mm: None,
            spacing_ratio: None,
            velocity_m_per_s: Some(model.medium().velocity),
            omega_ref_ghz: rad_to_ghz(model.medium().omega_ref),
        }
    }
}
