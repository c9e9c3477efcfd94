//! Run configuration: an optional TOML file, overridden by command-line flags.
//!
//! ```toml
//! seed = 42
//! trials = 10000
//! model = "both"          # physics | conventional | both
//! output = "gain.csv"
//! workers = 4             # 0 = one per core
//!
//! [topology]
//! L = 8
//! N_I = 128
//! z0 = 50.0
//!
//! [path_gains]            # every link defaults to 1.0
//! transmitter = 1.0
//! inter = [1.0, 1.0]      # L - 1 values
//! receiver = 1.0
//!
//! [sweep]
//! L = [1, 2, 3, 4, 5, 6, 7, 8]
//! N_I = [16, 32, 64, 128]
//! ```
//!
//! Unknown keys and out-of-range values are rejected before anything runs.

use std::path::{Path, PathBuf};

use multiris_core::los::PathGains;
use multiris_core::montecarlo::ModelSelection;
use multiris_core::network::{SystemTopology, DEFAULT_Z0};
use serde::Deserialize;

use crate::experiment::Workers;

pub const DEFAULT_TRIALS: u64 = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("{what} must be {requirement}, got {value}")]
    OutOfRange {
        what: &'static str,
        requirement: &'static str,
        value: String,
    },
    #[error(transparent)]
    Model(#[from] multiris_core::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModelArg {
    Physics,
    Conventional,
    Both,
}

impl From<ModelArg> for ModelSelection {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Physics => ModelSelection::Physics,
            ModelArg::Conventional => ModelSelection::Conventional,
            ModelArg::Both => ModelSelection::Both,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub model: Option<ModelArg>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
    pub topology: Option<TopologyConfig>,
    pub path_gains: Option<PathGainsConfig>,
    pub sweep: Option<SweepLists>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyConfig {
    #[serde(rename = "L")]
    pub ris_count: Option<usize>,
    #[serde(rename = "N_I")]
    pub elements: Option<usize>,
    pub z0: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathGainsConfig {
    pub transmitter: Option<f64>,
    pub inter: Option<Vec<f64>>,
    pub receiver: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepLists {
    #[serde(rename = "L")]
    pub ris_counts: Option<Vec<usize>>,
    #[serde(rename = "N_I")]
    pub elements: Option<Vec<usize>>,
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }
}

/// Command-line values for `gain`; `Some` overrides the file.
#[derive(Debug, Clone, Default)]
pub struct GainOverrides {
    pub ris_count: Option<usize>,
    pub elements: Option<usize>,
    pub z0: Option<f64>,
    pub model: Option<ModelArg>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

/// Command-line values for `delta-sweep`; `Some` overrides the file.
#[derive(Debug, Clone, Default)]
pub struct SweepOverrides {
    pub ris_counts: Option<Vec<usize>>,
    pub elements: Option<Vec<usize>>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainConfig {
    pub topology: SystemTopology,
    pub model: ModelSelection,
    pub trials: u64,
    /// `None` asks the caller to pick (and echo) a seed.
    pub seed: Option<u64>,
    pub path_gains: PathGains,
    pub output: Option<PathBuf>,
    pub workers: Workers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub ris_counts: Vec<usize>,
    pub elements: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub workers: Workers,
}

fn check_trials(trials: u64) -> Result<u64, ConfigError> {
    if trials == 0 {
        return Err(ConfigError::OutOfRange {
            what: "trials",
            requirement: "at least 1",
            value: trials.to_string(),
        });
    }
    Ok(trials)
}

fn check_list(what: &'static str, list: Vec<usize>) -> Result<Vec<usize>, ConfigError> {
    if list.is_empty() || list.contains(&0) {
        return Err(ConfigError::OutOfRange {
            what,
            requirement: "a non-empty list of positive integers",
            value: format!("{list:?}"),
        });
    }
    Ok(list)
}

fn workers(explicit: Option<usize>, file: Option<usize>) -> Result<Workers, ConfigError> {
    match explicit.or(file) {
        Some(n) => Ok(Workers(Some(n))),
        None => Workers::from_env().map_err(|e| ConfigError::OutOfRange {
            what: "worker count",
            requirement: "a non-negative integer",
            value: e.to_string(),
        }),
    }
}

pub fn resolve_gain(file: FileConfig, cli: GainOverrides) -> Result<GainConfig, ConfigError> {
    let topo = file.topology.unwrap_or_default();
    let ris_count = cli.ris_count.or(topo.ris_count).ok_or(ConfigError::Missing("L (--L or [topology] L)"))?;
    let elements = cli.elements.or(topo.elements).ok_or(ConfigError::Missing("N_I (--NI or [topology] N_I)"))?;
    let z0 = cli.z0.or(topo.z0).unwrap_or(DEFAULT_Z0);
    let topology = SystemTopology::new(ris_count, elements, z0)?;

    let g = file.path_gains.unwrap_or_default();
    let path_gains = PathGains {
        transmitter: g.transmitter.unwrap_or(1.0),
        inter: g.inter.unwrap_or_else(|| vec![1.0; ris_count - 1]),
        receiver: g.receiver.unwrap_or(1.0),
    };
    path_gains.validate(&topology)?;

    Ok(GainConfig {
        topology,
        model: cli.model.or(file.model).unwrap_or(ModelArg::Both).into(),
        trials: check_trials(cli.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS))?,
        seed: cli.seed.or(file.seed),
        path_gains,
        output: cli.output.or(file.output),
        workers: workers(cli.workers, file.workers)?,
    })
}

pub fn resolve_sweep(file: FileConfig, cli: SweepOverrides) -> Result<SweepConfig, ConfigError> {
    if file.topology.is_some() || file.path_gains.is_some() || file.model.is_some() {
        return Err(ConfigError::OutOfRange {
            what: "sweep config",
            requirement: "free of [topology], [path_gains] and model (a sweep runs both models with unit gains)",
            value: "a single-scenario key".into(),
        });
    }
    let lists = file.sweep.unwrap_or_default();
    let ris_counts = cli.ris_counts.or(lists.ris_counts).ok_or(ConfigError::Missing("L list (--L or [sweep] L)"))?;
    let elements = cli.elements.or(lists.elements).ok_or(ConfigError::Missing("N_I list (--NI or [sweep] N_I)"))?;
    Ok(SweepConfig {
        ris_counts: check_list("L list", ris_counts)?,
        elements: check_list("N_I list", elements)?,
        trials: check_trials(cli.trials.or(file.trials).unwrap_or(DEFAULT_TRIALS))?,
        seed: cli.seed.or(file.seed).ok_or(ConfigError::Missing("seed (--seed or `seed = ...`); sweeps are always seeded"))?,
        output: cli.output.or(file.output),
        workers: workers(cli.workers, file.workers)?,
    })
}
