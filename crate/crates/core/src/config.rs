//! Policy configuration: standard-of-proof thresholds and the verbal
//! likelihood-ratio scale.
//!
//! The format is one `key = value` pair per line with `#` comments. Keys
//! are `threshold.<standard>` or `scale.<label>`.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::model::{StandardName, StandardOfProof};

/// Shipped defaults; the same text lives in `config/plaus.conf`.
pub const DEFAULT_CONFIG: &str = include_str!("../../../config/plaus.conf");

/// Environment variable naming an override config file.
pub const CONFIG_ENV: &str = "PLAUS_CONFIG";

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: `{value}` is not a positive finite number")]
    BadValue { line: usize, value: String },
    #[error("threshold for {name} must be a positive finite number, got {value}")]
    InvalidThreshold { name: String, value: f64 },
    #[error("no threshold configured for standard `{0}`")]
    UnknownStandard(String),
    #[error("UNKNOWN_LABEL: `{0}` is not in the likelihood-ratio scale")]
    UnknownLabel(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

/// Maps verbal strength labels to likelihood ratios.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ScaleTable {
    entries: BTreeMap<String, f64>,
}

impl ScaleTable {
    pub fn insert(&mut self, label: impl Into<String>, lr: f64) {
        self.entries.insert(label.into(), lr);
    }

    pub fn get(&self, label: &str) -> Option<f64> {
        self.entries.get(label).copied()
    }

    pub fn labels(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::parse(DEFAULT_CONFIG).expect("shipped config is valid")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Config {
    pub thresholds: BTreeMap<StandardName, f64>,
    pub scale: ScaleTable,
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut thresholds = BTreeMap::new();
        let mut scale = ScaleTable::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or(ConfigError::Syntax { line })?;
            let (key, value) = (key.trim(), value.trim());
            let number: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| *v > 0.0 && v.is_finite())
                .ok_or_else(|| ConfigError::BadValue {
                    line,
                    value: value.to_string(),
                })?;
            if let Some(name) = key.strip_prefix("threshold.").filter(|s| !s.is_empty()) {
                thresholds.insert(StandardName::from_name(name), number);
            } else if let Some(label) = key.strip_prefix("scale.").filter(|s| !s.is_empty()) {
                scale.insert(label, number);
            } else {
                return Err(ConfigError::UnknownKey {
                    line,
                    key: key.to_string(),
                });
            }
        }
        Ok(Config { thresholds, scale })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Defaults, overlaid with the file named by `PLAUS_CONFIG` if set.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => {
                let overrides = Self::load(Path::new(&path))?;
                let mut config = Self::default();
                config.thresholds.extend(overrides.thresholds);
                config.scale.entries.extend(overrides.scale.entries);
                Ok(config)
            }
            None => Ok(Self::default()),
        }
    }

    pub fn standard(&self, name: &StandardName) -> Result<StandardOfProof, ConfigError> {
        let threshold = self
            .thresholds
            .get(name)
            .ok_or_else(|| ConfigError::UnknownStandard(name.to_string()))?;
        StandardOfProof::new(name.clone(), *threshold)
    }
}

/// Resolve a verbal label to its configured likelihood ratio.
pub fn qualitative_to_lr(label: &str, scale: &ScaleTable) -> Result<f64, ConfigError> {
    scale
        .get(label)
        .ok_or_else(|| ConfigError::UnknownLabel(label.to_string()))
}
