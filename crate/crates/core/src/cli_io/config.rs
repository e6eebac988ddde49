use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::interp::InterpolationScheme;
use crate::splitting::{Method, Midpoint, SchemeConfig};

/// On-disk form of a run configuration: one JSON object with flat dotted keys.
/// Every key is optional and defaults to the weak Landau damping setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    #[serde(rename = "grid.length")]
    pub length: f64,
    #[serde(rename = "grid.vmax")]
    pub vmax: f64,
    #[serde(rename = "grid.nx")]
    pub nx: usize,
    #[serde(rename = "grid.nv")]
    pub nv: usize,
    #[serde(rename = "init.alpha")]
    pub alpha: f64,
    #[serde(rename = "scheme.method")]
    pub method: String,
    #[serde(rename = "scheme.midpoint")]
    pub midpoint: String,
    #[serde(rename = "scheme.interpolation")]
    pub interpolation: String,
    #[serde(rename = "scheme.tau")]
    pub tau: f64,
    #[serde(rename = "scheme.t_end")]
    pub t_end: f64,
    #[serde(rename = "output.dir", skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(rename = "output.snapshot_cadence")]
    pub snapshot_cadence: usize,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            length: 4.0 * PI,
            vmax: 6.0,
            nx: 80,
            nv: 80,
            alpha: 0.01,
            method: Method::Strang.name().into(),
            midpoint: "free-stream".into(),
            interpolation: InterpolationScheme::CubicSpline.name().into(),
            tau: 1.0 / 16.0,
            t_end: 1.0,
            output_dir: None,
            snapshot_cadence: 0,
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub alpha: f64,
    pub scheme: SchemeConfig,
    pub output_dir: Option<PathBuf>,
    /// Write a snapshot every this many steps; 0 writes only the final state.
    pub snapshot_cadence: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_file(ConfigFile::default()).expect("default configuration is valid")
    }
}

fn config_error(e: Error) -> Error {
    match e {
        Error::Config(_) => e,
        other => Error::Config(other.to_string()),
    }
}

impl RunConfig {
    pub fn from_file(file: ConfigFile) -> Result<Self> {
        let grid = GridSpec::new(file.length, file.vmax, file.nx, file.nv).map_err(config_error)?;
        if !(0.0..=1.0).contains(&file.alpha) {
            return Err(Error::Config(format!(
                "init.alpha must lie in [0, 1], got {}",
                file.alpha
            )));
        }
        let method: Method = file.method.parse().map_err(Error::Config)?;
        let midpoint: Midpoint = file.midpoint.parse().map_err(Error::Config)?;
        let interpolation: InterpolationScheme = file.interpolation.parse().map_err(Error::Config)?;
        let scheme = SchemeConfig::new(method, midpoint, interpolation, file.tau, file.t_end)?;
        Ok(Self {
            grid,
            alpha: file.alpha,
            scheme,
            output_dir: file.output_dir,
            snapshot_cadence: file.snapshot_cadence,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ConfigFile =
            serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid config JSON: {e}")))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_file(&self) -> ConfigFile {
        ConfigFile {
            length: self.grid.length(),
            vmax: self.grid.vmax(),
            nx: self.grid.nx(),
            nv: self.grid.nv(),
            alpha: self.alpha,
            method: self.scheme.method().name().into(),
            midpoint: self.scheme.midpoint().name().into(),
            interpolation: self.scheme.interpolation().name().into(),
            tau: self.scheme.tau(),
            t_end: self.scheme.t_end(),
            output_dir: self.output_dir.clone(),
            snapshot_cadence: self.snapshot_cadence,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("config serializes")
    }

    /// Hex SHA-256 over everything that determines the final state of a run.
    /// Floats enter by bit pattern, so the key is exact.
    pub fn state_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(b"vpsplit-state-v1");
        for word in [self.grid.nx() as u64, self.grid.nv() as u64] {
            hasher.update(word.to_le_bytes());
        }
        for value in [
            self.grid.length(),
            self.grid.vmax(),
            self.alpha,
            self.scheme.tau(),
            self.scheme.t_end(),
        ] {
            hasher.update(value.to_bits().to_le_bytes());
        }
        for name in [
            self.scheme.method().name(),
            self.scheme.midpoint().name(),
            self.scheme.interpolation().name(),
        ] {
            hasher.update(name.as_bytes());
            hasher.update([0]);
        }
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}
