//! Per-trial Monte Carlo kernel and order-independent reductions.
//!
//! Trial `t` draws its links from stream `t` of the master seed, so the
//! outcome of a trial never depends on which worker ran it. Reductions run
//! over the outcomes in trial order with compensated summation. The
//! parallel driver lives in the `multiris` crate; [`run_sequential`] is the
//! single-threaded reference.

use alloc::vec::Vec;

use crate::los::{sample_los_links_with, stream_rng, PathGains};
use crate::network::SystemTopology;
use crate::optimize::{self, Model};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSelection {
    Physics,
    Conventional,
    Both,
}

impl ModelSelection {
    pub fn includes(&self, model: Model) -> bool {
        matches!(
            (self, model),
            (ModelSelection::Both, _)
                | (ModelSelection::Physics, Model::Physics)
                | (ModelSelection::Conventional, Model::Conventional)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    topology: SystemTopology,
    model: ModelSelection,
    trials: u64,
    master_seed: u64,
    path_gains: PathGains,
}

impl ExperimentSpec {
    pub fn new(
        topology: SystemTopology,
        model: ModelSelection,
        trials: u64,
        master_seed: u64,
        path_gains: PathGains,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        path_gains.validate(&topology)?;
        Ok(Self {
            topology,
            model,
            trials,
            master_seed,
            path_gains,
        })
    }

    /// Unit path gains on every link.
    pub fn unit_gains(topology: SystemTopology, model: ModelSelection, trials: u64, master_seed: u64) -> Result<Self> {
        let gains = PathGains::uniform(topology.ris_count(), 1.0);
        Self::new(topology, model, trials, master_seed, gains)
    }

    pub fn topology(&self) -> &SystemTopology {
        &self.topology
    }

    pub fn model(&self) -> ModelSelection {
        self.model
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn path_gains(&self) -> &PathGains {
        &self.path_gains
    }

    pub fn theory_gain(&self, model: Model) -> f64 {
        let l = self.topology.ris_count();
        let n = self.topology.elements();
        let total = self.path_gains.total();
        match model {
            Model::Physics => optimize::expected_gain_physics(l, n, total),
            Model::Conventional => optimize::gain_conventional(l, n, total),
        }
    }
}

/// Optimal gains of one trial for the selected models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub physics: Option<f64>,
    pub conventional: Option<f64>,
}

/// Runs trial `trial` of `spec`. Both models see the same links.
pub fn run_trial(spec: &ExperimentSpec, trial: u64) -> TrialOutcome {
    let mut rng = stream_rng(spec.master_seed, trial);
    let links = sample_los_links_with(&spec.topology, &spec.path_gains, &mut rng)
        .expect("path gains are validated by ExperimentSpec");
    let gain = |model| spec.model.includes(model).then(|| optimize::optimize(&links, model).gain);
    TrialOutcome {
        physics: gain(Model::Physics),
        conventional: gain(Model::Conventional),
    }
}

/// Neumaier compensated sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Sample mean and standard error of the mean.
///
/// The data are shifted by the first sample before summing, so a constant
/// sample has exactly that mean and an exactly zero standard error.
pub fn mean_and_std_error(samples: &[f64]) -> (f64, f64) {
    let Some(&shift) = samples.first() else {
        return (f64::NAN, f64::NAN);
    };
    let n = samples.len() as f64;
    let offset: CompensatedSum = samples.iter().map(|&x| x - shift).collect();
    let mean = shift + offset.value() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let ss: CompensatedSum = samples.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let variance = ss.value() / (n - 1.0);
    (mean, (variance / n).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GainStats {
    pub model: Model,
    pub mean_gain: f64,
    pub std_error: f64,
    pub trials: u64,
    /// Closed-form counterpart: the large-`N_I` scaling law for the physics
    /// model, the exact optimum for the conventional one.
    pub theory_gain: f64,
    /// `mean_gain / theory_gain - 1`.
    pub relative_deviation: f64,
}

/// Paired estimate of the relative difference
/// `(E|h|² - E|h'|²) / E|h'|²`, with a delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaEstimate {
    pub value: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub physics: Option<GainStats>,
    pub conventional: Option<GainStats>,
    /// Present when both models ran.
    pub delta: Option<DeltaEstimate>,
}

fn stats(spec: &ExperimentSpec, model: Model, samples: &[f64]) -> GainStats {
    let (mean_gain, std_error) = mean_and_std_error(samples);
    let theory_gain = spec.theory_gain(model);
    GainStats {
        model,
        mean_gain,
        std_error,
        trials: samples.len() as u64,
        theory_gain,
        relative_deviation: mean_gain / theory_gain - 1.0,
    }
}

/// Paired relative difference from per-trial gains of the same links.
pub fn paired_delta(physics: &[f64], conventional: &[f64]) -> DeltaEstimate {
    assert_eq!(physics.len(), conventional.len(), "paired samples must have equal length");
    let (mean_p, _) = mean_and_std_error(physics);
    let (mean_c, _) = mean_and_std_error(conventional);
    let ratio = mean_p / mean_c;
    let residuals: Vec<f64> = physics
        .iter()
        .zip(conventional)
        .map(|(p, c)| p - ratio * c)
        .collect();
    let (_, se_residual) = mean_and_std_error(&residuals);
    DeltaEstimate {
        value: ratio - 1.0,
        std_error: se_residual / mean_c,
    }
}

/// Reduces trial outcomes (in trial order) to summary statistics.
pub fn summarize(spec: &ExperimentSpec, outcomes: &[TrialOutcome]) -> ExperimentSummary {
    let physics: Option<Vec<f64>> = outcomes.iter().map(|o| o.physics).collect();
    let conventional: Option<Vec<f64>> = outcomes.iter().map(|o| o.conventional).collect();
    let delta = match (&physics, &conventional) {
        (Some(p), Some(c)) => Some(paired_delta(p, c)),
        _ => None,
    };
    ExperimentSummary {
        physics: physics.map(|p| stats(spec, Model::Physics, &p)),
        conventional: conventional.map(|c| stats(spec, Model::Conventional, &c)),
        delta,
    }
}

/// Single-threaded reference run.
pub fn run_sequential(spec: &ExperimentSpec) -> ExperimentSummary {
    let outcomes: Vec<TrialOutcome> = (0..spec.trials).map(|t| run_trial(spec, t)).collect();
    summarize(spec, &outcomes)
}
