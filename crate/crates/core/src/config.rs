// Copyright 2026 The pilotwave Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration. Precedence is flags, then config file, then defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::gates::OracleId;
use crate::ode::Scheme;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    #[default]
    Spin,
    Well,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Spin => "spin",
            Model::Well => "well",
        })
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "spin" => Ok(Model::Spin),
            "well" => Ok(Model::Well),
            other => Err(Error::InvalidParameter(format!("unknown model '{other}'"))),
        }
    }
}

/// Every field optional; one layer of the precedence stack.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub model: Option<Model>,
    pub oracle: Option<OracleId>,
    pub mass: Option<f64>,
    pub dt: Option<f64>,
    pub scheme: Option<Scheme>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub emit_plots: Option<bool>,
}

impl ConfigLayer {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `self` win over `lower`.
    pub fn over(self, lower: ConfigLayer) -> ConfigLayer {
        ConfigLayer {
            model: self.model.or(lower.model),
            oracle: self.oracle.or(lower.oracle),
            mass: self.mass.or(lower.mass),
            dt: self.dt.or(lower.dt),
            scheme: self.scheme.or(lower.scheme),
            n: self.n.or(lower.n),
            seed: self.seed.or(lower.seed),
            out: self.out.or(lower.out),
            emit_plots: self.emit_plots.or(lower.emit_plots),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub model: Model,
    pub oracle: Option<OracleId>,
    pub mass: f64,
    pub dt: f64,
    pub scheme: Scheme,
    pub n: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub emit_plots: bool,
}

pub const DEFAULT_OUT: &str = "pilotwave-out";

impl RunConfig {
    /// Fills gaps with model-dependent defaults and validates.
    pub fn resolve(layer: ConfigLayer) -> Result<Self> {
        let model = layer.model.unwrap_or_default();
        let default_dt = match model {
            Model::Spin => 1e-3,
            Model::Well => 0.01,
        };
        let cfg = RunConfig {
            model,
            oracle: layer.oracle,
            mass: layer.mass.unwrap_or(10.0),
            dt: layer.dt.unwrap_or(default_dt),
            scheme: layer.scheme.unwrap_or_default(),
            n: layer.n.unwrap_or(1000),
            seed: layer.seed.unwrap_or(0),
            out: layer.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            emit_plots: layer.emit_plots.unwrap_or(false),
        };
        for (name, v) in [("mass", cfg.mass), ("dt", cfg.dt)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if cfg.n == 0 {
            return Err(Error::Config("n must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn require_oracle(&self) -> Result<OracleId> {
        self.oracle.ok_or_else(|| Error::Config("an oracle is required (--oracle f0|f1|f2|f3)".into()))
    }
}
