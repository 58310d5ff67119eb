// Copyright 2026 QSG Contributors
// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkernel::{ToleranceContext, C64};
use crate::qsg::RateFn;
use crate::spectra::GridSpec;
use crate::verifier::{is_known_claim, LambdaChoice, Plan, CLAIMS};

/// A scenario file. See `scenarios/README.md` in the repository for the
/// schema; every table rejects unknown keys.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario_id: String,
    pub backend: BackendSpec,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub lambdas: LambdaSpec,
    #[serde(default)]
    pub claims: ClaimSpec,
    #[serde(default = "default_powers")]
    pub powers: Vec<u32>,
    #[serde(default)]
    pub tolerances: ToleranceContext,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pseudospectrum: Option<PseudospectrumConfig>,
}

fn default_powers() -> Vec<u32> {
    vec![1, 2, 3]
}

/// Either a catalog entry (`catalog`, optionally `dim`) or an explicit
/// backend (`kind` plus its parameters).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<BackendKind>,
    /// Real parts, row by row.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    /// Imaginary parts, same shape as `matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix_im: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate: Option<RateFn>,
    /// Named time-dependent generator for the evolution kind.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Constant,
    Scaled,
    Evolution,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_times")]
    pub t: Vec<f64>,
    #[serde(default = "default_times")]
    pub s: Vec<f64>,
    #[serde(default = "default_times")]
    pub r: Vec<f64>,
}

fn default_times() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            t: default_times(),
            s: default_times(),
            r: default_times(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaSpec {
    /// Only `"auto"` is accepted.
    Keyword(String),
    /// `[re, im]` pairs.
    List(Vec<[f64; 2]>),
}

impl Default for LambdaSpec {
    fn default() -> Self {
        LambdaSpec::Keyword("auto".into())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClaimSpec {
    /// Only `"all"` is accepted.
    Keyword(String),
    List(Vec<String>),
}

impl Default for ClaimSpec {
    fn default() -> Self {
        ClaimSpec::Keyword("all".into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PseudoTarget {
    #[default]
    Generator,
    Propagator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudospectrumConfig {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub resolution: [usize; 2],
    #[serde(default)]
    pub target: PseudoTarget,
    #[serde(default)]
    pub t: f64,
    #[serde(default = "one")]
    pub s: f64,
}

fn one() -> f64 {
    1.0
}

impl PseudospectrumConfig {
    pub fn grid(&self) -> GridSpec {
        GridSpec {
            re: self.re,
            im: self.im,
            resolution: self.resolution,
        }
    }
}

fn config_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Config {
        field: field.into(),
        message: message.into(),
    }
}

impl ScenarioConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let de = toml::Deserializer::parse(text).map_err(|e| config_err("<document>", e.to_string()))?;
        let cfg: Self = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "<document>".to_string() } else { path };
            config_err(field, e.inner().message().trim().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario config serializes")
    }

    /// Catalog backend with the default grid and all claims.
    pub fn for_catalog(name: &str) -> Self {
        Self {
            scenario_id: name.to_string(),
            backend: BackendSpec {
                catalog: Some(name.to_string()),
                ..BackendSpec::default()
            },
            grid: GridConfig::default(),
            lambdas: LambdaSpec::default(),
            claims: ClaimSpec::default(),
            powers: default_powers(),
            tolerances: ToleranceContext::default(),
            seed: 0,
            pseudospectrum: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenario_id.trim().is_empty() {
            return Err(config_err("scenario_id", "must not be empty"));
        }
        for (name, values) in [("grid.t", &self.grid.t), ("grid.s", &self.grid.s), ("grid.r", &self.grid.r)] {
            if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
                return Err(config_err(name, format!("grid values must be finite and >= 0, got {v}")));
            }
        }
        if let Some(n) = self.powers.iter().find(|&&n| n == 0) {
            return Err(config_err("powers", format!("powers must be >= 1, got {n}")));
        }
        self.tolerances.validate()?;
        match &self.lambdas {
            LambdaSpec::Keyword(k) if k != "auto" => {
                return Err(config_err("lambdas", format!("expected \"auto\" or a list of [re, im] pairs, got {k:?}")));
            }
            LambdaSpec::List(l) if l.iter().flatten().any(|x| !x.is_finite()) => {
                return Err(config_err("lambdas", "lambda values must be finite"));
            }
            _ => {}
        }
        match &self.claims {
            ClaimSpec::Keyword(k) if k != "all" => {
                return Err(config_err("claims", format!("expected \"all\" or a list of claim ids, got {k:?}")));
            }
            ClaimSpec::List(ids) => {
                if let Some(bad) = ids.iter().find(|id| !is_known_claim(id)) {
                    return Err(config_err("claims", format!("unknown claim id {bad:?}")));
                }
            }
            _ => {}
        }
        self.backend.validate()?;
        if let Some(p) = &self.pseudospectrum {
            if !(p.t.is_finite() && p.t >= 0.0 && p.s.is_finite() && p.s >= 0.0) {
                return Err(config_err("pseudospectrum", "t and s must be finite and >= 0"));
            }
        }
        Ok(())
    }

    pub fn plan(&self) -> Plan {
        let lambdas = match &self.lambdas {
            LambdaSpec::Keyword(_) => LambdaChoice::Auto,
            LambdaSpec::List(l) => LambdaChoice::List(l.iter().map(|&[re, im]| C64::new(re, im)).collect()),
        };
        let claims: BTreeSet<String> = match &self.claims {
            ClaimSpec::Keyword(_) => CLAIMS.iter().map(|(c, _)| c.to_string()).collect(),
            ClaimSpec::List(ids) => ids.iter().cloned().collect(),
        };
        let mut powers = self.powers.clone();
        powers.sort_unstable();
        powers.dedup();
        Plan {
            claims,
            lambdas,
            powers,
        }
    }
}

impl BackendSpec {
    fn validate(&self) -> Result<()> {
        match (&self.catalog, self.kind) {
            (Some(_), Some(_)) => Err(config_err("backend", "give either `catalog` or `kind`, not both")),
            (None, None) => Err(config_err("backend", "one of `catalog` or `kind` is required")),
            (Some(_), None) => {
                for (name, present) in [
                    ("matrix", self.matrix.is_some()),
                    ("matrix_im", self.matrix_im.is_some()),
                    ("rate", self.rate.is_some()),
                    ("generator", self.generator.is_some()),
                    ("step", self.step.is_some()),
                ] {
                    if present {
                        return Err(config_err(format!("backend.{name}"), "not allowed with `catalog`"));
                    }
                }
                if self.dim == Some(0) {
                    return Err(config_err("backend.dim", "must be >= 1"));
                }
                Ok(())
            }
            (None, Some(kind)) => {
                if self.dim.is_some() {
                    return Err(config_err("backend.dim", "only used with random catalog entries"));
                }
                let needs_matrix = kind != BackendKind::Evolution;
                if needs_matrix && self.matrix.is_none() {
                    return Err(config_err("backend.matrix", "required for this kind"));
                }
                if kind == BackendKind::Scaled && self.rate.is_none() {
                    return Err(config_err("backend.rate", "required for kind = \"scaled\""));
                }
                if kind != BackendKind::Scaled && self.rate.is_some() {
                    return Err(config_err("backend.rate", "only used with kind = \"scaled\""));
                }
                if kind == BackendKind::Evolution && self.generator.is_none() && self.matrix.is_none() {
                    return Err(config_err("backend.generator", "required for kind = \"evolution\" without a matrix"));
                }
                if kind != BackendKind::Evolution && (self.generator.is_some() || self.step.is_some()) {
                    return Err(config_err("backend.generator", "only used with kind = \"evolution\""));
                }
                if self.generator.is_some() && self.matrix.is_some() {
                    return Err(config_err("backend", "give either `generator` or `matrix` for an evolution backend"));
                }
                if let Some(step) = self.step {
                    if !(step > 0.0 && step.is_finite()) {
                        return Err(config_err("backend.step", "must be positive"));
                    }
                }
                Ok(())
            }
        }
    }
}
