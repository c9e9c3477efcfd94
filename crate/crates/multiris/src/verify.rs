//! Cross-model oracle suites behind `multiris verify`.
//!
//! Each suite compares a structured or closed-form computation against an
//! independent generic one on seeded random instances and reports the
//! largest error seen.

use std::f64::consts::TAU;
use std::fmt;

use multiris_core::bidiagonal::BlockBidiagonal;
use multiris_core::los::{sample_los_links_with, stream_rng, LosLinks, PathGains};
use multiris_core::matrix::{ComplexMatrix, C64};
use multiris_core::network::{
    channel_cascaded_impedance, channel_exact, ImpedanceCascade, PartitionedImpedance, RisLoadSet, SystemTopology,
};
use multiris_core::optimize::{self, Model};
use multiris_core::phase;
use multiris_core::scattering::{physics_channel, NormalizedLinks, RisScattering};
use rand::Rng;
use rand_distr::StandardNormal;

pub const GRID_POINTS: usize = 512;

/// Deliberate faults, to check that the suites can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mutation {
    /// Negate the scattering-domain channel before comparing it.
    FlipPhysicsSign,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub instances: usize,
    pub mutation: Option<Mutation>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            instances: 100,
            mutation: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Metric {
    pub label: &'static str,
    pub max: f64,
    pub tolerance: f64,
}

impl Metric {
    pub fn passed(&self) -> bool {
        self.max <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub instances: usize,
    pub metrics: Vec<Metric>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.metrics.iter().all(Metric::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} instances)", self.name, self.instances)?;
        for m in &self.metrics {
            write!(f, "\n    {}: max {:.3e} (tolerance {:.0e})", m.label, m.max, m.tolerance)?;
        }
        Ok(())
    }
}

fn cn<R: Rng>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| cn(rng))
}

fn relative(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.frobenius_distance(reference) / reference.frobenius_norm()
}

/// Structured inverse against LU with one refinement step.
pub fn block_inverse_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut worst = 0.0f64;
    for i in 0..opts.instances {
        let l = 1 + i % 8;
        let n = 1 + i / 8 % 16;
        let mut rng = stream_rng(opts.seed, (1 << 32) | i as u64);
        let diagonal = (0..l).map(|_| random_matrix(&mut rng, n, n)).collect();
        let sub = (1..l).map(|_| random_matrix(&mut rng, n, n)).collect();
        let err = BlockBidiagonal::new(diagonal, sub)
            .and_then(|m| {
                let structured = m.inverse()?.to_dense();
                let generic = m.to_dense().inverse_refined("M")?;
                Ok(relative(&structured, &generic))
            })
            .unwrap_or(f64::INFINITY);
        worst = worst.max(err);
    }
    SuiteReport {
        name: "block-bidiagonal inverse",
        instances: opts.instances,
        metrics: vec![Metric {
            label: "relative Frobenius error",
            max: worst,
            tolerance: 1e-10,
        }],
    }
}

/// Dense-solve channel vs cascaded impedance channel vs scattering channel.
pub fn model_chain_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut worst_rel = 0.0f64;
    let mut worst_phase = 0.0f64;
    for i in 0..opts.instances {
        let l = 1 + i % 4;
        let n = 1 + i / 4 % 8;
        let mut rng = stream_rng(opts.seed, (2 << 32) | i as u64);
        let topo = SystemTopology::with_default_z0(l, n).expect("positive sizes");
        let scale = C64::new(2.0 * topo.z0(), 0.0);
        let cascade = ImpedanceCascade {
            z_ri_last: random_matrix(&mut rng, 1, n).scale(scale),
            inter: (1..l).map(|_| random_matrix(&mut rng, n, n).scale(scale)).collect(),
            z_it_first: random_matrix(&mut rng, n, 1).scale(scale),
        };
        let phases: Vec<Vec<f64>> = (0..l)
            .map(|_| (0..n).map(|_| rng.random::<f64>() * TAU).collect())
            .collect();
        let outcome = (|| -> multiris_core::Result<(C64, C64, C64)> {
            let z = PartitionedImpedance::from_cascade(topo, &cascade)?;
            let loads = RisLoadSet::from_phases(&topo, &phases)?;
            let exact = channel_exact(&z, &loads)?;
            let cascaded = channel_cascaded_impedance(&cascade, &loads, topo.z0())?;
            let mut physics = physics_channel(&NormalizedLinks::from_impedance(&z)?, &RisScattering::from_phases(&phases)?)?;
            if opts.mutation == Some(Mutation::FlipPhysicsSign) {
                physics = -physics;
            }
            Ok((exact, cascaded, physics))
        })();
        match outcome {
            Ok((exact, cascaded, physics)) => {
                for h in [cascaded, physics] {
                    worst_rel = worst_rel.max((h - exact).norm() / exact.norm());
                    worst_phase = worst_phase.max(phase::distance(h.arg(), exact.arg()).abs());
                }
            }
            Err(_) => {
                worst_rel = f64::INFINITY;
                worst_phase = f64::INFINITY;
            }
        }
    }
    SuiteReport {
        name: "model-chain equivalence",
        instances: opts.instances,
        metrics: vec![
            Metric {
                label: "relative error",
                max: worst_rel,
                tolerance: 1e-10,
            },
            Metric {
                label: "phase error [rad]",
                max: worst_phase,
                tolerance: 1e-9,
            },
        ],
    }
}

/// Largest `|base + Σ a_n e^{jθ_n}|` over a `points`-per-element phase grid.
/// The last element is reduced exactly: the modulus is unimodal in its
/// phase, so only the two grid points bracketing the continuous optimum
/// need checking.
pub fn grid_max(a: &[C64], base: C64, points: usize) -> f64 {
    let table: Vec<C64> = (0..points).map(|k| C64::from_polar(1.0, TAU * k as f64 / points as f64)).collect();
    let step = TAU / points as f64;
    let Some((last, head)) = a.split_last() else {
        return base.norm();
    };
    let mut idx = vec![0usize; head.len()];
    let mut best = 0.0f64;
    loop {
        let s = head.iter().zip(&idx).fold(base, |acc, (ai, &k)| acc + ai * table[k]);
        let k0 = ((s.arg() - last.arg()).rem_euclid(TAU) / step).floor() as usize % points;
        for k in [k0, (k0 + 1) % points] {
            best = best.max((s + last * table[k]).norm());
        }
        let mut pos = 0;
        while pos < idx.len() {
            idx[pos] += 1;
            if idx[pos] < points {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            return best;
        }
    }
}

/// Grid-search optimum of `|h|²`, one surface at a time (the surfaces share
/// no phases and the gain is a product of per-surface moduli).
pub fn grid_gain(links: &LosLinks, model: Model, points: usize) -> f64 {
    let total = links.total_gain();
    (0..links.ris_count()).fold(total * total, |acc, l| {
        let (out, inc) = links.hop_phases(l);
        let a: Vec<C64> = out.iter().zip(inc).map(|(u, w)| C64::from_polar(1.0, u + w)).collect();
        let base = match model {
            Model::Physics => -a.iter().sum::<C64>(),
            Model::Conventional => C64::new(0.0, 0.0),
        };
        acc * grid_max(&a, base, points).powi(2)
    })
}

/// Closed-form optima never beaten by exhaustive grid search.
pub fn optimizer_suite(opts: &VerifyOptions) -> SuiteReport {
    let mut worst = [0.0f64; 2];
    for i in 0..opts.instances {
        let l = 1 + i % 3;
        let n = 1 + i / 3 % 3;
        let topo = SystemTopology::with_default_z0(l, n).expect("positive sizes");
        let mut rng = stream_rng(opts.seed, (3 << 32) | i as u64);
        let links = sample_los_links_with(&topo, &PathGains::uniform(l, 1.0), &mut rng).expect("unit gains");
        for (k, model) in [Model::Physics, Model::Conventional].into_iter().enumerate() {
            let closed = optimize::optimize(&links, model).gain;
            let grid = grid_gain(&links, model, GRID_POINTS);
            worst[k] = worst[k].max(grid / closed - 1.0);
        }
    }
    SuiteReport {
        name: "optimizer optimality",
        instances: opts.instances,
        metrics: vec![
            Metric {
                label: "physics: grid gain above closed form (relative)",
                max: worst[0],
                tolerance: 1e-3,
            },
            Metric {
                label: "conventional: grid gain above closed form (relative)",
                max: worst[1],
                tolerance: 1e-3,
            },
        ],
    }
}

pub fn run_all(opts: &VerifyOptions) -> Vec<SuiteReport> {
    vec![block_inverse_suite(opts), model_chain_suite(opts), optimizer_suite(opts)]
}
