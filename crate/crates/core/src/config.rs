//! Experiment configuration, read from JSON with unknown keys rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::connection::ConnectionFunction;
use crate::error::{Error, Result};
use crate::geometry::NormKind;
use crate::model::Model;

fn default_rho() -> f64 {
    1.0
}

fn default_norm() -> NormKind {
    NormKind::OneNorm
}

fn default_replicates() -> u64 {
    1000
}

/// Threshold used for the exceedance count `W(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Threshold {
    /// `c_n r + b_n` with the model's norming schedule.
    R(f64),
    /// Absolute length, the same for every `n`.
    Absolute(f64),
}

impl Default for Threshold {
    fn default() -> Self {
        Threshold::R(1.0)
    }
}

/// Padding of the continuous sampling box beyond the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Padding {
    Fixed(f64),
    /// Smallest padding whose truncation certificate is below the ceiling.
    Ceiling(f64),
}

impl Default for Padding {
    fn default() -> Self {
        Padding::Ceiling(1e-4)
    }
}

/// Which analytic table `exact` produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExactTable {
    #[default]
    LongestEdge,
    Typical,
    Dichotomy,
    PoissonBounds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: Model,
    pub connection: ConnectionFunction,
    pub d: u32,
    #[serde(default = "default_rho")]
    pub rho: f64,
    #[serde(default = "default_norm")]
    pub norm: NormKind,
    pub n_grid: Vec<u64>,
    #[serde(default = "default_replicates")]
    pub replicates: u64,
    #[serde(default)]
    pub threshold: Threshold,
    /// Grid of normalized levels `r` for analytic tables and ECDF output.
    #[serde(default)]
    pub r_grid: Vec<f64>,
    #[serde(default)]
    pub padding: Padding,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub exact: ExactTable,
    /// Allows undirected lattice sampling in `d >= 3`.
    #[serde(default)]
    pub allow_high_dim: bool,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::param("d must be at least 1"));
        }
        self.connection.validate(self.d)?;
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::param("rho must be positive"));
        }
        if self.model.is_lattice() {
            self.norm.require_one_norm()?;
        }
        if self.n_grid.is_empty() {
            return Err(Error::param("n_grid must not be empty"));
        }
        if self.replicates == 0 {
            return Err(Error::param("replicates must be at least 1"));
        }
        match self.padding {
            Padding::Fixed(r) if !(r >= 0.0 && r.is_finite()) => {
                return Err(Error::param("fixed padding must be finite and nonnegative"))
            }
            Padding::Ceiling(c) if !(c > 0.0 && c < 1.0) => {
                return Err(Error::param("certificate ceiling must lie in (0, 1)"))
            }
            _ => {}
        }
        if self.model == Model::Discrete && self.d >= 3 && !self.allow_high_dim {
            return Err(Error::param("undirected lattice runs in d >= 3 need allow_high_dim"));
        }
        if self.r_grid.iter().any(|r| !r.is_finite()) || !threshold_finite(self.threshold) {
            return Err(Error::param("thresholds must be finite"));
        }
        Ok(())
    }
}

fn threshold_finite(t: Threshold) -> bool {
    match t {
        Threshold::R(r) | Threshold::Absolute(r) => r.is_finite(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"{
        "model": "continuous",
        "connection": {"family": "F", "alpha": 3.0},
        "d": 1,
        "n_grid": [50, 200],
        "replicates": 10,
        "padding": {"ceiling": 1e-4},
        "seed": 7
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::from_json(BASIC).unwrap();
        assert_eq!(c.rho, 1.0);
        assert_eq!(c.threshold, Threshold::R(1.0));
        let again = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = BASIC.replace("\"seed\": 7", "\"seed\": 7, \"colour\": 1");
        assert!(matches!(ExperimentConfig::from_json(&bad), Err(Error::Config(_))));
        let bad = BASIC.replace("\"alpha\": 3.0", "\"alpha\": 3.0, \"beta\": 1");
        assert!(ExperimentConfig::from_json(&bad).is_err());
    }

    #[test]
    fn validation_errors() {
        let zero = BASIC.replace("\"replicates\": 10", "\"replicates\": 0");
        assert!(ExperimentConfig::from_json(&zero).unwrap_err().is_validation());
        let alpha = BASIC.replace("\"alpha\": 3.0", "\"alpha\": 1.0");
        assert!(ExperimentConfig::from_json(&alpha).unwrap_err().is_validation());
        let lattice = BASIC.replace("\"continuous\"", "\"dlrp\"").replace("\"d\": 1", "\"d\": 1, \"norm\": \"two_norm\"");
        assert!(ExperimentConfig::from_json(&lattice).unwrap_err().is_validation());
    }
}
