use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::loops::{Loop, LoopError, LoopSpec};
use crate::lattice::Lattice;
use crate::theory::{GroupSpec, ModelParams, ParamError};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error(transparent)]
    Params(#[from] ParamError),
    #[error("loop {index}: {reason}")]
    Loop { index: usize, reason: LoopError },
    #[error("{0}")]
    Invalid(String),
    #[error("config parse error: {0}")]
    Parse(String),
}

/// A loop entry; the corner defaults to the centred position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopEntry {
    pub l1: u32,
    pub l2: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plane: Option<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corner: Option<Vec<i32>>,
}

impl LoopEntry {
    pub fn square(l: u32) -> Self {
        LoopEntry { l1: l, l2: l, plane: None, corner: None }
    }

    pub fn spec(&self, dim: usize) -> LoopSpec {
        let mut s = LoopSpec::centered(dim, self.l1, self.l2);
        if let Some(p) = self.plane {
            s.plane = p;
            s.corner = vec![0; dim];
            if p[0] < dim && p[1] < dim {
                s.corner[p[0]] = -(self.l1 as i32 / 2);
                s.corner[p[1]] = -(self.l2 as i32 / 2);
            }
        }
        if let Some(c) = &self.corner {
            s.corner = c.clone();
        }
        s
    }
}

fn d_n() -> u32 {
    2
}
fn d_p() -> u32 {
    1
}
fn d_dim() -> usize {
    4
}
fn d_radius() -> i32 {
    3
}
fn d_beta() -> f64 {
    1.0
}
fn d_kappa() -> f64 {
    1.7
}
fn d_loops() -> Vec<LoopEntry> {
    (2..=4).map(LoopEntry::square).collect()
}
fn d_sweeps() -> u64 {
    2000
}
fn d_thin() -> u64 {
    2
}
fn d_chains() -> u64 {
    1
}
fn d_batches() -> usize {
    20
}
fn d_margin() -> i32 {
    1
}
fn d_b() -> f64 {
    13.0
}

/// The experiment document. Every key has a default; CLI flags override keys one-for-one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "d_n")]
    pub n: u32,
    #[serde(default = "d_p")]
    pub rep_exponent: u32,
    #[serde(default = "d_dim")]
    pub dim: usize,
    #[serde(default = "d_radius")]
    pub box_radius: i32,
    #[serde(default = "d_beta")]
    pub beta: f64,
    #[serde(default = "d_kappa")]
    pub kappa: f64,
    #[serde(default = "d_loops")]
    pub loops: Vec<LoopEntry>,
    #[serde(default)]
    pub seed: u64,
    /// Defaults to ten times the linear size of the box.
    #[serde(default)]
    pub burnin: Option<u64>,
    /// Sweeps in the measurement phase of each chain.
    #[serde(default = "d_sweeps")]
    pub sweeps: u64,
    #[serde(default = "d_thin")]
    pub thin: u64,
    #[serde(default = "d_chains")]
    pub chains: u64,
    #[serde(default = "d_batches")]
    pub batches: usize,
    /// Minimum distance from any loop site to the box boundary.
    #[serde(default = "d_margin")]
    pub min_margin: i32,
    #[serde(default = "d_b")]
    pub b: f64,
    #[serde(default)]
    pub c1: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// SVG of the last gauge sample (dimension 2 only).
    #[serde(default)]
    pub render: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("all keys have defaults")
    }
}

/// Validated configuration with derived objects.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub config: ExperimentConfig,
    pub params: ModelParams,
    pub lattice: Arc<Lattice>,
    pub loops: Vec<Loop>,
    pub burnin: u64,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(s).map_err(|e| ConfigError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn resolve(&self) -> Result<Resolved, ConfigError> {
        let group = GroupSpec::new(self.n, self.rep_exponent)?;
        let params = ModelParams::new(group, self.dim, self.box_radius, self.beta, self.kappa)?;
        if self.beta.is_infinite() {
            return Err(ConfigError::Invalid("beta must be finite for the heat-bath sampler".into()));
        }
        if self.loops.is_empty() {
            return Err(ConfigError::Invalid("at least one loop is required".into()));
        }
        if self.thin == 0 || self.chains == 0 {
            return Err(ConfigError::Invalid("thin and chains must be positive".into()));
        }
        if self.batches < 20 {
            return Err(ConfigError::Invalid(format!("batches must be at least 20, got {}", self.batches)));
        }
        if self.sweeps / self.thin < self.batches as u64 {
            return Err(ConfigError::Invalid(format!(
                "sweeps/thin = {} measurements per chain is fewer than {} batches",
                self.sweeps / self.thin,
                self.batches
            )));
        }
        if self.render.is_some() && self.dim != 2 {
            return Err(ConfigError::Invalid("render requires dim = 2".into()));
        }
        let lattice = Arc::new(params.lattice());
        let loops = self
            .loops
            .iter()
            .enumerate()
            .map(|(index, l)| {
                Loop::build(&l.spec(self.dim), &lattice, self.min_margin)
                    .map_err(|reason| ConfigError::Loop { index, reason })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let burnin = self.burnin.unwrap_or(10 * lattice.linear_size() as u64);
        Ok(Resolved { config: self.clone(), params, lattice, loops, burnin })
    }
}
