//! Parallel Monte Carlo driver.
//!
//! Trials are mapped over a rayon pool and collected in trial order, then
//! reduced by the sequential code in `multiris_core::montecarlo`. Since every
//! trial draws from its own stream, the worker count never changes a result.

use multiris_core::los::PathGains;
use multiris_core::montecarlo::{self, DeltaEstimate, ExperimentSpec, ExperimentSummary, ModelSelection, TrialOutcome};
use multiris_core::network::SystemTopology;
use multiris_core::optimize;
use rayon::prelude::*;

use crate::table::SweepRecord;

/// Environment variable selecting the worker count. Unset or `0` means one
/// worker per available core.
pub const WORKERS_ENV: &str = "MULTIRIS_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Model(#[from] multiris_core::Error),
    #[error("{0} must not be empty")]
    EmptyList(&'static str),
    #[error("the paired relative difference needs both models, got {0:?}")]
    NeedsBothModels(ModelSelection),
    #[error("invalid {WORKERS_ENV} value {0:?}")]
    BadWorkerEnv(String),
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, ExperimentError>;

/// Worker count: `Some(n)` for exactly `n`, `None` (or `Some(0)`) for automatic.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Workers(pub Option<usize>);

impl Workers {
    pub fn from_env() -> Result<Self> {
        match std::env::var(WORKERS_ENV) {
            Ok(v) if v.trim().is_empty() => Ok(Self(None)),
            Ok(v) => v
                .trim()
                .parse()
                .map(|n| Self(Some(n)))
                .map_err(|_| ExperimentError::BadWorkerEnv(v)),
            Err(_) => Ok(Self(None)),
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.0 {
            builder = builder.num_threads(n);
        }
        Ok(builder.build()?)
    }
}

fn run_trials(spec: &ExperimentSpec, pool: &rayon::ThreadPool) -> Vec<TrialOutcome> {
    pool.install(|| {
        (0..spec.trials())
            .into_par_iter()
            .map(|t| montecarlo::run_trial(spec, t))
            .collect()
    })
}

/// Mean optimal gain, standard error and closed form for each requested model.
pub fn run_gain_experiment(spec: &ExperimentSpec, workers: Workers) -> Result<ExperimentSummary> {
    let pool = workers.pool()?;
    Ok(montecarlo::summarize(spec, &run_trials(spec, &pool)))
}

/// Paired relative difference of the two average optimal gains.
pub fn delta_empirical(spec: &ExperimentSpec, workers: Workers) -> Result<DeltaEstimate> {
    if spec.model() != ModelSelection::Both {
        return Err(ExperimentError::NeedsBothModels(spec.model()));
    }
    let summary = run_gain_experiment(spec, workers)?;
    Ok(summary.delta.expect("both models ran"))
}

/// splitmix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce5_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Master seed of the sweep cell `(L, N_I)`, so cells use unrelated streams.
pub fn cell_seed(master_seed: u64, ris_count: usize, elements: usize) -> u64 {
    mix(mix(master_seed) ^ mix(((ris_count as u64) << 32) | elements as u64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub record: SweepRecord,
    /// Paired standard error of `delta_empirical`; not part of the CSV table.
    pub delta_std_error: f64,
}

/// One row per `(L, N_I)` pair, `L` outermost, with unit path gains.
pub fn sweep(
    ris_counts: &[usize],
    elements: &[usize],
    trials: u64,
    master_seed: u64,
    workers: Workers,
) -> Result<Vec<SweepRow>> {
    if ris_counts.is_empty() {
        return Err(ExperimentError::EmptyList("L list"));
    }
    if elements.is_empty() {
        return Err(ExperimentError::EmptyList("N_I list"));
    }
    let pool = workers.pool()?;
    let mut rows = Vec::with_capacity(ris_counts.len() * elements.len());
    for &l in ris_counts {
        for &n in elements {
            let topology = SystemTopology::with_default_z0(l, n)?;
            let gains = PathGains::uniform(l, 1.0);
            let spec = ExperimentSpec::new(topology, ModelSelection::Both, trials, cell_seed(master_seed, l, n), gains)?;
            let summary = montecarlo::summarize(&spec, &run_trials(&spec, &pool));
            let physics = summary.physics.expect("both models ran");
            let conventional = summary.conventional.expect("both models ran");
            let delta = summary.delta.expect("both models ran");
            rows.push(SweepRow {
                record: SweepRecord {
                    ris_count: l,
                    elements: n,
                    trials,
                    mean_physics: physics.mean_gain,
                    se_physics: physics.std_error,
                    theory_physics: physics.theory_gain,
                    gain_conventional: conventional.mean_gain,
                    delta_empirical: delta.value,
                    delta_theory: optimize::delta_theory(l, n),
                },
                delta_std_error: delta.std_error,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_seeds_differ() {
        let seeds = [cell_seed(1, 1, 2), cell_seed(1, 2, 1), cell_seed(2, 1, 2), cell_seed(1, 1, 3)];
        for i in 0..seeds.len() {
            for j in i + 1..seeds.len() {
                assert_ne!(seeds[i], seeds[j]);
            }
        }
    }

    #[test]
    fn empty_lists_are_rejected() {
        assert!(matches!(sweep(&[1], &[], 1, 0, Workers(Some(1))), Err(ExperimentError::EmptyList("N_I list"))));
        assert!(matches!(sweep(&[], &[1], 1, 0, Workers(Some(1))), Err(ExperimentError::EmptyList("L list"))));
    }

    #[test]
    fn single_cell_sweep() {
        let rows = sweep(&[1], &[1], 1, 3, Workers(Some(1))).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0].record;
        assert_eq!(r.gain_conventional, 1.0);
        assert!((r.delta_theory - (std::f64::consts::PI.sqrt() + 1.0)).abs() < 1e-14);
        // one element: |c| = 1, so the optimum is exactly (1 + 1)².
        assert!((r.mean_physics - 4.0).abs() < 1e-12);
        assert_eq!(r.se_physics, 0.0);
        assert_eq!(rows[0].delta_std_error, 0.0);
    }

    #[test]
    fn delta_requires_both_models() {
        let topo = SystemTopology::with_default_z0(1, 4).unwrap();
        let spec = ExperimentSpec::unit_gains(topo, ModelSelection::Physics, 10, 0).unwrap();
        assert!(matches!(
            delta_empirical(&spec, Workers(Some(1))),
            Err(ExperimentError::NeedsBothModels(ModelSelection::Physics))
        ));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let topo = SystemTopology::with_default_z0(3, 8).unwrap();
        let spec = ExperimentSpec::unit_gains(topo, ModelSelection::Both, 500, 77).unwrap();
        let one = run_gain_experiment(&spec, Workers(Some(1))).unwrap();
        let many = run_gain_experiment(&spec, Workers(Some(5))).unwrap();
        assert_eq!(one, many);
        assert_eq!(one, montecarlo::run_sequential(&spec));
    }
}
