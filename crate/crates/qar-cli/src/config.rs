//! JSON run configuration.
//!
//! A single document supplies the machine parameters:
//!
//! ```json
//! {
//!   "omega_H": 3.0, "omega_C": 1.0, "g": 0.003,
//!   "T_H": 30.0, "T_R": 21.0, "T_C": 18.0,
//!   "gamma": 0.003
//! }
//! ```
//!
//! `gamma` is optional and defaults to `0.001 * omega_H`; per-bath overrides
//! `gamma_H`/`gamma_R`/`gamma_C` take precedence over the flat value. Unknown
//! fields are rejected so typos fail loudly instead of silently running the
//! default.

use std::fs;
use std::path::Path;

use qar_core::ModelParams;
use serde::Deserialize;

use crate::error::CliError;

/// On-disk schema; field names match the symbols used in the reports.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(rename = "omega_H")]
    pub omega_h: f64,
    #[serde(rename = "omega_C")]
    pub omega_c: f64,
    pub g: f64,
    #[serde(rename = "T_H")]
    pub t_hot: f64,
    #[serde(rename = "T_R")]
    pub t_room: f64,
    #[serde(rename = "T_C")]
    pub t_cold: f64,
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default, rename = "gamma_H")]
    pub gamma_h: Option<f64>,
    #[serde(default, rename = "gamma_R")]
    pub gamma_r: Option<f64>,
    #[serde(default, rename = "gamma_C")]
    pub gamma_c: Option<f64>,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Resolves the gamma defaulting rules and validates the result.
    pub fn into_params(self) -> Result<ModelParams, CliError> {
        let flat = self.gamma.unwrap_or(1e-3 * self.omega_h);
        let p = ModelParams {
            omega_h: self.omega_h,
            omega_c: self.omega_c,
            g: self.g,
            t_hot: self.t_hot,
            t_room: self.t_room,
            t_cold: self.t_cold,
            gamma_h: self.gamma_h.unwrap_or(flat),
            gamma_r: self.gamma_r.unwrap_or(flat),
            gamma_c: self.gamma_c.unwrap_or(flat),
        };
        p.validate()?;
        Ok(p)
    }
}

/// Parameters used when no configuration file is given: the weak-coupling
/// operating point every report in the documentation refers to.
pub fn baseline() -> ModelParams {
    ModelParams::uniform_gamma(3.0, 1.0, 0.003, 30.0, 21.0, 18.0, 0.003)
}

/// Loads the file when given, otherwise falls back to [`baseline`].
pub fn load_or_baseline(path: Option<&Path>) -> Result<ModelParams, CliError> {
    match path {
        Some(p) => Config::from_file(p)?.into_params(),
        None => Ok(baseline()),
    }
}
