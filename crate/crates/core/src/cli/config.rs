//! Experiment configuration: a TOML file whose numbers are exact fraction
//! strings (`b = "37/997"`). Decimal literals are rejected so nothing is
//! silently rounded.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Rational,
    /// The Boshernitzan-Kornfeld map (γ², γ, γ) in the cubic field Q(γ).
    CubicBk,
}

/// Which coding `complexity` builds.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coding {
    /// Binary coding of the section double rotation.
    #[default]
    Rotation,
    /// Ternary coding of the q-section map for a = p/q.
    Section,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub coding: Coding,
    pub a: Option<Scalar>,
    pub b: Option<Scalar>,
    pub t: Option<Scalar>,
    /// Starting height on the section x = a for `simulate`.
    pub y: Option<Scalar>,
    /// Billiard incidences traced by `simulate`.
    pub steps: Option<usize>,
    /// Section returns listed by `simulate`.
    pub returns: Option<usize>,
    pub n_max: Option<usize>,
    pub cap: Option<usize>,
    pub seed: Option<u64>,
    pub out_dir: Option<PathBuf>,
    /// Sweep grid; every b is paired with every t.
    pub b_values: Option<Vec<Scalar>>,
    pub t_values: Option<Vec<Scalar>>,
    /// Depth of the preimage trees drawn by `classify`.
    pub tree_depth: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("{0}")]
    Invalid(String),
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.into(), source })?;
        Self::parse(&text).map_err(|e| match e {
            ConfigError::Parse { source, .. } => ConfigError::Parse { path: path.into(), source },
            e => e,
        })
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: ExperimentConfig = toml::from_str(text)
            .map_err(|source| ConfigError::Parse { path: PathBuf::new(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (name, v) in [("b_values", &self.b_values), ("t_values", &self.t_values)] {
            if v.as_ref().is_some_and(|v| v.is_empty()) {
                return Err(ConfigError::Invalid(format!("{name} must not be empty")));
            }
        }
        if self.mode == Mode::CubicBk && (self.a.is_some() || self.b.is_some() || self.t.is_some()) {
            return Err(ConfigError::Invalid(
                "mode = \"cubic-bk\" fixes the map; drop a, b and t".into(),
            ));
        }
        Ok(())
    }

    pub fn require(&self, name: &str) -> Result<Scalar, ConfigError> {
        let v = match name {
            "a" => &self.a,
            "b" => &self.b,
            "t" => &self.t,
            "y" => &self.y,
            _ => unreachable!("unknown key {name}"),
        };
        v.clone().ok_or_else(|| ConfigError::Invalid(format!("config key `{name}` is required")))
    }
}
