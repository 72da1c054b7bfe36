//! Sweep configuration: presets, the TOML document and flag overrides.
//!
//! Precedence is overrides > file > preset.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{ParamMode, Params};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Parse(String),
    #[error("unknown preset {0:?} (expected \"l1\" or \"poly\")")]
    UnknownPreset(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    L1,
    Polynomial,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub q: Option<String>,
    pub d: Option<String>,
    pub x: Option<String>,
    pub y: Option<String>,
    pub c: Option<String>,
    pub mode: Option<ParamMode>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub family: Option<Family>,
    pub window: Option<i32>,
    pub a: Option<String>,
    pub b: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub modes: Option<i64>,
    pub probes: Option<usize>,
    pub seed: Option<u64>,
    pub radius: Option<i32>,
    pub relations: Option<Vec<String>>,
    pub negative_control: Option<bool>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub path: Option<PathBuf>,
}

/// The declarative document as written; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub preset: Option<String>,
    #[serde(default)]
    pub params: ParamsSection,
    #[serde(default)]
    pub module: ModuleSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))
    }
}

/// Command-line or environment overrides.
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub preset: Option<String>,
    pub n: Option<usize>,
    pub l: Option<usize>,
    pub q: Option<String>,
    pub d: Option<String>,
    pub window: Option<i32>,
    pub modes: Option<i64>,
    pub probes: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub negative_control: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub preset: String,
    pub n: usize,
    pub l: usize,
    #[serde(serialize_with = "as_text")]
    pub q: Scalar,
    #[serde(serialize_with = "as_text")]
    pub d: Scalar,
    #[serde(serialize_with = "opt_as_text")]
    pub x: Option<Scalar>,
    #[serde(serialize_with = "opt_as_text")]
    pub y: Option<Scalar>,
    pub mode: ParamMode,
    pub family: Family,
    pub window: i32,
    #[serde(serialize_with = "as_text")]
    pub a: Scalar,
    #[serde(serialize_with = "as_text")]
    pub b: Scalar,
    pub modes: i64,
    pub probes: usize,
    pub seed: u64,
    pub radius: i32,
    /// Relation id prefixes; empty selects everything.
    pub relations: Vec<String>,
    pub negative_control: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

fn as_text<S: serde::Serializer>(v: &Scalar, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn opt_as_text<S: serde::Serializer>(v: &Option<Scalar>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_string()),
        None => s.serialize_none(),
    }
}

fn scalar(name: &str, text: &str) -> Result<Scalar, ConfigError> {
    Scalar::parse(text).map_err(|e| ConfigError::Parse(format!("{} = {:?}: {}", name, text, e)))
}

impl SweepConfig {
    pub fn preset(name: &str) -> Result<SweepConfig, ConfigError> {
        let base = SweepConfig {
            preset: name.to_string(),
            n: 3,
            l: 1,
            q: Scalar::int(2),
            d: Scalar::int(2),
            x: None,
            y: None,
            mode: ParamMode::Duality,
            family: Family::L1,
            window: 8,
            a: Scalar::int(5),
            b: Scalar::int(7),
            modes: 3,
            probes: 50,
            seed: 1,
            radius: 0,
            relations: vec![],
            negative_control: false,
            out: None,
        };
        match name {
            "l1" => Ok(base),
            "poly" => Ok(SweepConfig {
                n: 4,
                l: 2,
                d: Scalar::int(3),
                family: Family::Polynomial,
                modes: 2,
                radius: 2,
                ..base
            }),
            other => Err(ConfigError::UnknownPreset(other.to_string())),
        }
    }

    /// Layer `file` and `over` on top of the selected preset and validate.
    pub fn resolve(file: Option<&ConfigFile>, over: &ConfigOverrides) -> Result<SweepConfig, ConfigError> {
        let empty = ConfigFile::default();
        let f = file.unwrap_or(&empty);
        let name = over.preset.clone().or_else(|| f.preset.clone()).unwrap_or_else(|| "l1".to_string());
        let mut c = SweepConfig::preset(&name)?;

        let p = &f.params;
        if let Some(v) = p.n {
            c.n = v;
        }
        if let Some(v) = p.l {
            c.l = v;
        }
        if let Some(v) = &p.q {
            c.q = scalar("q", v)?;
        }
        if let Some(v) = &p.d {
            c.d = scalar("d", v)?;
        }
        if let Some(v) = &p.x {
            c.x = Some(scalar("x", v)?);
        }
        if let Some(v) = &p.y {
            c.y = Some(scalar("y", v)?);
        }
        if let Some(v) = &p.c {
            if !scalar("c", v)?.is_one() {
                return Err(ConfigError::Constraint(format!("c = 1 (got c = {})", v)));
            }
        }
        if let Some(v) = p.mode {
            c.mode = v;
        }
        let m = &f.module;
        if let Some(v) = m.family {
            c.family = v;
        }
        if let Some(v) = m.window {
            c.window = v;
        }
        if let Some(v) = &m.a {
            c.a = scalar("a", v)?;
        }
        if let Some(v) = &m.b {
            c.b = scalar("b", v)?;
        }
        let s = &f.sweep;
        if let Some(v) = s.modes {
            c.modes = v;
        }
        if let Some(v) = s.probes {
            c.probes = v;
        }
        if let Some(v) = s.seed {
            c.seed = v;
        }
        if let Some(v) = s.radius {
            c.radius = v;
        }
        if let Some(v) = &s.relations {
            c.relations = v.clone();
        }
        if let Some(v) = s.negative_control {
            c.negative_control = v;
        }
        if let Some(v) = &f.output.path {
            c.out = Some(v.clone());
        }

        if let Some(v) = over.n {
            c.n = v;
        }
        if let Some(v) = over.l {
            c.l = v;
        }
        if let Some(v) = &over.q {
            c.q = scalar("q", v)?;
        }
        if let Some(v) = &over.d {
            c.d = scalar("d", v)?;
        }
        if let Some(v) = over.window {
            c.window = v;
        }
        if let Some(v) = over.modes {
            c.modes = v;
        }
        if let Some(v) = over.probes {
            c.probes = v;
        }
        if let Some(v) = over.seed {
            c.seed = v;
        }
        if let Some(v) = &over.out {
            c.out = Some(v.clone());
        }
        c.negative_control |= over.negative_control;

        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.modes < 1 {
            return Err(ConfigError::Constraint(format!("mode window K >= 1 (got {})", self.modes)));
        }
        if self.window < 1 {
            return Err(ConfigError::Constraint(format!("lattice window N >= 1 (got {})", self.window)));
        }
        if self.probes == 0 {
            return Err(ConfigError::Constraint("probes >= 1".into()));
        }
        if self.radius < 0 {
            return Err(ConfigError::Constraint(format!("radius >= 0 (got {})", self.radius)));
        }
        match self.family {
            Family::L1 if self.l != 1 => {
                return Err(ConfigError::Constraint(format!("the l1 family needs l = 1 (got l = {})", self.l)))
            }
            Family::Polynomial if self.l < 2 => {
                return Err(ConfigError::Constraint(format!("the polynomial family needs l >= 2 (got l = {})", self.l)))
            }
            _ => {}
        }
        let p = self.params()?;
        if self.family == Family::L1 && !p.x.is_one() {
            return Err(ConfigError::Constraint(format!("the l1 family needs x = 1 (got x = {})", p.x)));
        }
        Ok(())
    }

    pub fn params(&self) -> Result<Params, ConfigError> {
        let err = |e: crate::params::ParamError| ConfigError::Constraint(e.to_string().trim_start_matches("constraint violated: ").to_string());
        match self.mode {
            ParamMode::Duality => {
                let mut p = Params::duality(self.n, self.l, self.q.clone(), self.d.clone()).map_err(err)?;
                if let Some(x) = &self.x {
                    p.x = x.clone();
                }
                if let Some(y) = &self.y {
                    p.y = y.clone();
                }
                p.validate().map_err(err)?;
                Ok(p)
            }
            ParamMode::HeckeOnly => {
                let (Some(x), Some(y)) = (&self.x, &self.y) else {
                    return Err(ConfigError::Constraint("hecke-only mode needs explicit x and y".into()));
                };
                let mut p = Params::hecke_only(self.l, self.q.clone(), x.clone(), y.clone()).map_err(err)?;
                p.n = self.n;
                Ok(p)
            }
        }
    }

    /// Whether a relation id is selected.
    pub fn selects(&self, id: &str) -> bool {
        self.relations.is_empty() || self.relations.iter().any(|p| id.starts_with(p.as_str()))
    }
}
