//! Flag resolution: command-line flag, then the `--config` JSON object, then
//! the built-in default.
//!
//! Config keys use the flag spellings (`"Omega"`, `"delta-min"`); underscores
//! are accepted in place of hyphens. Unknown keys are rejected.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::{Map, Value};

use atomic_mirror::grid::UniformGrid;
use atomic_mirror::ModelParams;

use crate::args::{GridArgs, ModelArgs};
use crate::CliError;

pub const DEFAULT_OMEGA: f64 = 5.0;
pub const DEFAULT_ATOM_OMEGA: f64 = 6.0;
pub const DEFAULT_HOPPING: f64 = -1.0;
pub const DEFAULT_COUPLING: f64 = 1.0;
pub const DEFAULT_N_ATOMS: usize = 10;
pub const DEFAULT_DELTA_MIN: f64 = -3.0;
pub const DEFAULT_DELTA_MAX: f64 = 1.0;
pub const DEFAULT_STEPS: usize = 2001;

const KNOWN_KEYS: &[&str] = &[
    "omega",
    "Omega",
    "V",
    "g",
    "na",
    "delta-min",
    "delta-max",
    "steps",
    "format",
    "axis",
    "min",
    "max",
    "free",
    "deltas",
    "band-edges",
    "na-list",
    "na-min",
    "na-max",
    "dist",
    "width-frac",
    "sigma-omega",
    "sigma-v",
    "samples",
    "seed",
    "single",
    "realization",
    "gamma-a",
    "gamma-c",
    "self-test",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: Map<String, Value>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("reading {}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        let doc: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("config is not valid JSON: {e}")))?;
        let Value::Object(raw) = doc else {
            return Err(CliError::Config("config must be a JSON object".into()));
        };
        let mut values = Map::new();
        for (key, value) in raw {
            let norm = key.replace('_', "-");
            if !KNOWN_KEYS.contains(&norm.as_str()) {
                return Err(CliError::Config(format!("unknown config key {key:?}")));
            }
            values.insert(norm, value);
        }
        Ok(Self { values })
    }

    /// Value from the file, if present.
    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>, CliError> {
        self.values
            .get(key)
            .map(|v| {
                serde_json::from_value(v.clone())
                    .map_err(|e| CliError::Config(format!("config key {key:?}: {e}")))
            })
            .transpose()
    }

    pub fn pick<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T, CliError> {
        match flag {
            Some(v) => Ok(v),
            None => Ok(self.get(key)?.unwrap_or(default)),
        }
    }

    pub fn pick_opt<T: DeserializeOwned>(
        &self,
        flag: Option<T>,
        key: &str,
    ) -> Result<Option<T>, CliError> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.get(key),
        }
    }

    /// Boolean switch: set by the flag or by `true` in the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool, CliError> {
        Ok(flag || self.get(key)?.unwrap_or(false))
    }

    /// List flag; an empty list on the command line defers to the file.
    pub fn list<T: DeserializeOwned>(&self, flag: Vec<T>, key: &str) -> Result<Vec<T>, CliError> {
        if !flag.is_empty() {
            return Ok(flag);
        }
        Ok(self.get(key)?.unwrap_or_default())
    }

    pub fn model(&self, args: &ModelArgs) -> Result<ModelParams, CliError> {
        let p = ModelParams {
            omega: self.pick(args.omega, "omega", DEFAULT_OMEGA)?,
            atom_omega: self.pick(args.atom_omega, "Omega", DEFAULT_ATOM_OMEGA)?,
            hopping: self.pick(args.hopping, "V", DEFAULT_HOPPING)?,
            coupling: self.pick(args.coupling, "g", DEFAULT_COUPLING)?,
            n_atoms: self.pick(args.n_atoms, "na", DEFAULT_N_ATOMS)?,
        };
        p.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(p)
    }

    pub fn grid(&self, args: &GridArgs) -> Result<UniformGrid, CliError> {
        UniformGrid::new(
            self.pick(args.delta_min, "delta-min", DEFAULT_DELTA_MIN)?,
            self.pick(args.delta_max, "delta-max", DEFAULT_DELTA_MAX)?,
            self.pick(args.steps, "steps", DEFAULT_STEPS)?,
        )
        .map_err(|e| CliError::Config(e.to_string()))
    }
}

/// The five physical parameters under the flag names, for metadata.
pub fn model_metadata(p: &ModelParams) -> Value {
    serde_json::json!({
        "omega": p.omega,
        "Omega": p.atom_omega,
        "V": p.hopping,
        "g": p.coupling,
        "na": p.n_atoms,
    })
}

pub fn grid_metadata(grid: &UniformGrid) -> Value {
    serde_json::json!({
        "delta-min": grid.min,
        "delta-max": grid.max,
        "steps": grid.steps,
    })
}
