//! Experiment configuration: the union of all experiment knobs, fillable
//! from command-line flags or from a TOML file with the same keys.

use crate::output::OutputFormat;
use crate::CliError;
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Experiment name; required when dispatching from a config file.
    pub experiment: Option<String>,
    pub n: Option<usize>,
    pub nb: Option<usize>,
    pub k: Option<usize>,
    pub q: Option<usize>,
    pub eps: Option<f64>,
    pub theta: Option<f64>,
    pub tau: Option<f64>,
    pub lambda: Option<f64>,
    pub s: Option<u64>,
    pub t: Option<u64>,
    pub m: Option<usize>,
    pub depth: Option<usize>,
    pub smoothing: Option<f64>,
    pub side: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub seeds: Option<usize>,
    pub cap: Option<u64>,
    pub max_dim: Option<usize>,
    pub device: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
}

impl ExperimentConfig {
    pub fn from_toml_file(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(42)
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or_default()
    }

    pub fn cap(&self) -> u64 {
        self.cap.unwrap_or(10_000_000)
    }

    /// Hard cap on any dense qubit count, defaulting to the library limit.
    pub fn max_dim(&self) -> usize {
        self.max_dim
            .unwrap_or(isoqubits::qubit::MAX_DENSE_QUBITS)
    }

    /// Rejects qubit counts above the configured dimension cap.
    pub fn check_dim(&self, field: &str, value: usize) -> Result<(), CliError> {
        if value > self.max_dim() {
            return Err(CliError::Config(format!(
                "--{field} {value} exceeds --max-dim {}",
                self.max_dim()
            )));
        }
        Ok(())
    }

    pub fn require_usize(&self, field: &str, value: Option<usize>) -> Result<usize, CliError> {
        value.ok_or_else(|| CliError::Config(format!("missing required field --{field}")))
    }

    pub fn require_f64(&self, field: &str, value: Option<f64>) -> Result<f64, CliError> {
        value.ok_or_else(|| CliError::Config(format!("missing required field --{field}")))
    }
}
