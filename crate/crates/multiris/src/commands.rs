//! Report rendering shared by the binary and the tests. Everything here
//! returns bytes; writing them out is the caller's business.

use multiris_core::montecarlo::ExperimentSpec;

use crate::config::{GainConfig, SweepConfig};
use crate::experiment::{self, ExperimentError, SweepRow};
use crate::table::{self, TableError};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const PAIRING: &str = "pairing = both models are optimized on the same links in every trial";

#[derive(Debug, thiserror::Error)]
pub enum CommandError {
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Model(#[from] multiris_core::Error),
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

/// Runs `cfg` with master seed `seed` and renders the gain table.
/// `seed_note` is appended to the seed header line (e.g. "time-derived").
pub fn gain_report(cfg: &GainConfig, seed: u64, seed_note: Option<&str>) -> Result<Vec<u8>, CommandError> {
    let spec = ExperimentSpec::new(cfg.topology, cfg.model, cfg.trials, seed, cfg.path_gains.clone())?;
    let summary = experiment::run_gain_experiment(&spec, cfg.workers)?;
    let t = cfg.topology;
    let g = &cfg.path_gains;
    let mut comments = vec![
        format!("multiris {VERSION} gain"),
        format!("L = {}, N_I = {}, z0 = {}", t.ris_count(), t.elements(), t.z0()),
        format!("model = {:?}", cfg.model).to_lowercase(),
        format!("trials = {}", cfg.trials),
        match seed_note {
            Some(note) => format!("master_seed = {seed} ({note})"),
            None => format!("master_seed = {seed}"),
        },
        format!(
            "path_gains = transmitter {}, inter [{}], receiver {}",
            g.transmitter,
            join(&g.inter),
            g.receiver
        ),
    ];
    if summary.delta.is_some() {
        comments.push(PAIRING.into());
    }
    let stats: Vec<_> = [summary.physics, summary.conventional].into_iter().flatten().collect();
    let mut out = Vec::new();
    table::write_gain(&mut out, &comments, t.ris_count(), t.elements(), &stats, summary.delta)?;
    Ok(out)
}

pub fn sweep_comments(cfg: &SweepConfig) -> Vec<String> {
    vec![
        format!("multiris {VERSION} delta-sweep"),
        format!("master_seed = {}", cfg.seed),
        format!("trials = {}", cfg.trials),
        format!("L = {}", join(&cfg.ris_counts)),
        format!("N_I = {}", join(&cfg.elements)),
        "path_gains = 1".into(),
        PAIRING.into(),
    ]
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CommandError> {
    Ok(experiment::sweep(&cfg.ris_counts, &cfg.elements, cfg.trials, cfg.seed, cfg.workers)?)
}

/// Runs the sweep and renders the table.
pub fn sweep_report(cfg: &SweepConfig) -> Result<Vec<u8>, CommandError> {
    let rows = run_sweep(cfg)?;
    let records: Vec<_> = rows.into_iter().map(|r| r.record).collect();
    let mut out = Vec::new();
    table::write_sweep(&mut out, &sweep_comments(cfg), &records)?;
    Ok(out)
}
