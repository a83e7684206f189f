//! JSON experiment configs. Command-line flags override config fields.

use std::fs;
use std::path::{Path, PathBuf};

use cantorflip::{IfsSpec, ProbVector};
use serde::{Deserialize, Serialize};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Simulate,
    Bounds,
    Exact,
    Deterministic,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeterministicConfig {
    pub m: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

/// Every field is optional; each subcommand checks for the ones it needs.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ifs: Option<IfsSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<ProbVector>,
    #[serde(rename = "M", default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub master_seed: Option<u64>,
    /// Inclusive level range for the dimension regression.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deterministic: Option<DeterministicConfig>,
    /// Exponent of the energy diagnostic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy_t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::ConfigRead {
            path: path.to_owned(),
            source,
        })?;
        serde_json::from_str(&text).map_err(|source| CliError::ConfigParse {
            path: path.to_owned(),
            source,
        })
    }

    /// Reject a config written for a different subcommand.
    pub fn check_mode(&self, wanted: Mode) -> Result<()> {
        match self.mode {
            Some(mode) if mode != wanted => Err(CliError::Usage(format!(
                "config mode {mode:?} does not match the {wanted:?} subcommand"
            ))),
            _ => Ok(()),
        }
    }
}

/// Model flags shared by several subcommands.
#[derive(Debug, Clone, Default)]
pub struct ModelOverrides {
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub p: Option<Vec<f64>>,
    pub r: Option<f64>,
}

/// `p`, `M` and (when a ratio is known) the IFS after applying overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct Model {
    pub p: ProbVector,
    pub m: u32,
    pub ifs: Option<IfsSpec>,
}

impl Model {
    pub fn ifs(&self) -> Result<&IfsSpec> {
        self.ifs
            .as_ref()
            .ok_or_else(|| CliError::Usage("contraction ratio missing: pass --r or set ifs.r in the config".into()))
    }

    pub fn ratio(&self) -> Result<f64> {
        self.ifs().map(IfsSpec::ratio)
    }
}

pub fn resolve_model(cfg: &ExperimentConfig, flags: &ModelOverrides) -> Result<Model> {
    let p = match &flags.p {
        Some(v) => Some(ProbVector::new(v.clone())?),
        None => cfg.p.clone(),
    };
    let n = flags
        .n
        .or_else(|| p.as_ref().map(ProbVector::alphabet))
        .or_else(|| cfg.ifs.as_ref().map(IfsSpec::maps))
        .ok_or_else(|| CliError::Usage("alphabet size missing: pass --N, --p or a config with ifs/p".into()))?;
    let p = match p {
        Some(p) => p,
        None => ProbVector::uniform(n)?,
    };
    if p.alphabet() != n {
        return Err(CliError::Usage(format!("N = {n} but p has {} entries", p.len())));
    }
    let m = flags
        .m
        .or(cfg.m)
        .ok_or_else(|| CliError::Usage("arity missing: pass --M or set M in the config".into()))?;
    let ifs = match (flags.r, &cfg.ifs) {
        (None, Some(spec)) if spec.maps() == n => Some(spec.clone()),
        (None, Some(spec)) => {
            return Err(CliError::Usage(format!(
                "N = {n} but the config IFS has {} maps",
                spec.maps()
            )))
        }
        (Some(r), Some(spec)) if spec.maps() == n => {
            Some(IfsSpec::canonical(n, r)?.with_orientations(spec.orientations().to_vec())?)
        }
        (Some(r), _) => Some(IfsSpec::canonical(n, r)?),
        (None, None) => None,
    };
    Ok(Model { p, m, ifs })
}
