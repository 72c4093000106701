use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use noiseless::dynamics::{CouplingKind, CycleRounding, DEFAULT_STRENGTH};
use noiseless::encoded::{ControlLimits, GateRecord};
use noiseless::group::{GroupSpec, Preset};
use noiseless::NumericPolicy;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub schema_version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub errors: Option<ErrorsSection>,
    #[serde(default)]
    pub schedule: ScheduleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pulse_error: Option<PulseErrorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit: Option<CircuitSection>,
    #[serde(default)]
    pub tolerances: NumericPolicy,
}

/// `[group]`: a preset, inline generators, or a JSON file holding the
/// generator list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<Preset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator_file: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_order: Option<usize>,
}

impl GroupSection {
    pub fn group_spec(&self) -> GroupSpec {
        GroupSpec {
            preset: self.preset,
            n: self.n,
            generators: self.generators.clone(),
            max_order: self.max_order,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub n: usize,
    #[serde(default = "one")]
    pub m: usize,
    #[serde(default = "independent")]
    pub coupling: CouplingKind,
    #[serde(default = "default_strength")]
    pub strength: f64,
    #[serde(default)]
    pub bath_exchange: f64,
}

fn one() -> usize {
    1
}

fn independent() -> CouplingKind {
    CouplingKind::Independent
}

fn default_strength() -> f64 {
    DEFAULT_STRENGTH
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorSet {
    /// All `3n` single-qubit Paulis.
    Independent,
    /// The three collective sums.
    Collective,
    None,
}

/// `[errors]`: the error space handed to the classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ErrorsSection {
    #[serde(default = "independent_set")]
    pub kind: ErrorSet,
    /// Extra Pauli strings such as `"XXII"`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paulis: Vec<String>,
}

fn independent_set() -> ErrorSet {
    ErrorSet::Independent
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `[delta - P_x - delta - P_z]^2`.
    #[default]
    Flip,
    /// Equal dwell in every element of `[group]`.
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleSection {
    #[serde(default)]
    pub family: Family,
    #[serde(default)]
    pub rounding: CycleRounding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// `(|0...0> + |1...1>)/sqrt 2`; the Bell state on two qubits.
    #[default]
    Ghz,
    Zero,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub cycle_times: Vec<f64>,
    pub total_time: f64,
    #[serde(default)]
    pub initial_state: InitialState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PauliTerm {
    pub pauli: String,
    #[serde(default = "unit")]
    pub coeff: f64,
}

fn unit() -> f64 {
    1.0
}

/// `[pulse_error]`: every pulse `g` becomes `g exp(-i eps E)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseErrorSection {
    pub generator: Vec<PauliTerm>,
    pub epsilons: Vec<f64>,
    pub cycle_time: f64,
    pub cycles: usize,
    #[serde(default)]
    pub block: usize,
}

/// `[circuit]`: gates inline or in a TOML/JSON file with a `gates` array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSection {
    #[serde(default)]
    pub block: usize,
    #[serde(default)]
    pub gates: Vec<GateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circuit_file: Option<PathBuf>,
    pub cycle_times: Vec<f64>,
    #[serde(default)]
    pub limits: ControlLimits,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitFile {
    gates: Vec<GateRecord>,
}

fn config_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| config_err(path, e))
}

fn parse_by_extension<D: serde::de::DeserializeOwned>(path: &Path) -> Result<D, CliError> {
    let text = read(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("json") => serde_json::from_str(&text).map_err(|e| config_err(path, e)),
        _ => toml::from_str(&text).map_err(|e| config_err(path, e)),
    }
}

impl Config {
    /// Parses, inlines referenced files (relative to the config's directory)
    /// and validates.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let mut cfg: Config = toml::from_str(&read(path)?).map_err(|e| config_err(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(g) = cfg.group.as_mut() {
            if let Some(file) = g.generator_file.take() {
                if !g.generators.is_empty() {
                    return Err(CliError::Config(
                        "give generators or generator_file, not both".into(),
                    ));
                }
                g.generators = parse_by_extension(&base.join(file))?;
            }
        }
        if let Some(c) = cfg.circuit.as_mut() {
            if let Some(file) = c.circuit_file.take() {
                if !c.gates.is_empty() {
                    return Err(CliError::Config(
                        "give gates or circuit_file, not both".into(),
                    ));
                }
                c.gates = parse_by_extension::<CircuitFile>(&base.join(file))?.gates;
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        if let Some(g) = &self.group {
            g.group_spec()
                .validate()
                .map_err(|e| CliError::Config(e.to_string()))?;
        }
        if let Some(m) = &self.model {
            if !(m.strength.is_finite() && m.strength >= 0.0) {
                return Err(CliError::Config(format!(
                    "model.strength {} must be >= 0",
                    m.strength
                )));
            }
        }
        let positive = |what: &str, xs: &[f64]| {
            if xs.is_empty() || xs.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
                Err(CliError::Config(format!(
                    "{what} must be a non-empty list of positive numbers"
                )))
            } else {
                Ok(())
            }
        };
        if let Some(s) = &self.sweep {
            positive("sweep.cycle_times", &s.cycle_times)?;
            positive("sweep.total_time", &[s.total_time])?;
        }
        if let Some(p) = &self.pulse_error {
            positive("pulse_error.cycle_time", &[p.cycle_time])?;
            if p.epsilons.is_empty() || p.epsilons.iter().any(|e| !e.is_finite()) {
                return Err(CliError::Config(
                    "pulse_error.epsilons must be finite and non-empty".into(),
                ));
            }
            if p.generator.is_empty() {
                return Err(CliError::Config("pulse_error.generator is empty".into()));
            }
        }
        if let Some(c) = &self.circuit {
            positive("circuit.cycle_times", &c.cycle_times)?;
            for g in &c.gates {
                g.to_gate().map_err(|e| CliError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form (sorted keys, no whitespace).
    pub fn hash(&self) -> String {
        let value = serde_json::to_value(self).expect("config serializes");
        let canonical = serde_json::to_string(&value).expect("value serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

pub fn require<'a, S>(s: &'a Option<S>, name: &str) -> Result<&'a S, CliError> {
    s.as_ref()
        .ok_or_else(|| CliError::Config(format!("missing [{name}] section")))
}
