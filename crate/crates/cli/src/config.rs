//! Run configuration: a JSON file of paths to parameter files, merged with
//! command-line overrides into one resolved [`Settings`] value.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use trispin_core::{DeviceParams, ExchangeModelParams, GrapeConfig};

use crate::CliError;

/// On-disk run configuration. Every field is optional; unset fields fall
/// back to built-in defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Path to a device-parameter JSON file.
    pub device_params: Option<PathBuf>,
    /// Path to an exchange-model JSON file.
    pub exchange_model: Option<PathBuf>,
    /// Path to an optimizer-configuration JSON file.
    pub grape_config: Option<PathBuf>,
    /// Default output directory.
    pub out_dir: Option<PathBuf>,
    /// Default RNG seed.
    pub seed: Option<u64>,
}

/// Fully resolved settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct Settings {
    pub device: DeviceParams,
    /// Present only when the run config names an exchange-model file;
    /// otherwise commands use the built-in calibration for the requested
    /// axis and strain mode.
    pub model: Option<ExchangeModelParams>,
    pub grape: GrapeConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("cannot parse {what} file {}: {e}", path.display())))
}

/// Loads the run config (if any) and applies flag overrides. Precedence:
/// command-line flag, then run-config entry, then default.
pub fn resolve(
    config_path: Option<&Path>,
    seed_flag: Option<u64>,
    out_flag: Option<&Path>,
) -> Result<Settings, CliError> {
    let run: RunConfig = match config_path {
        Some(p) => read_json(p, "run config")?,
        None => RunConfig::default(),
    };

    let device: DeviceParams = match &run.device_params {
        Some(p) => read_json(p, "device params")?,
        None => DeviceParams::default(),
    };
    device.validate().map_err(|e| CliError::Config(e.to_string()))?;

    let model: Option<ExchangeModelParams> = match &run.exchange_model {
        Some(p) => {
            let m: ExchangeModelParams = read_json(p, "exchange model")?;
            m.validate().map_err(|e| CliError::Config(e.to_string()))?;
            Some(m)
        }
        None => None,
    };

    let mut grape: GrapeConfig = match &run.grape_config {
        Some(p) => read_json(p, "grape config")?,
        None => GrapeConfig::default(),
    };

    let seed = seed_flag.or(run.seed).unwrap_or(grape.seed);
    grape.seed = seed;

    let out_dir = out_flag
        .map(Path::to_path_buf)
        .or(run.out_dir)
        .unwrap_or_else(|| PathBuf::from("."));

    Ok(Settings { device, model, grape, out_dir, seed })
}
