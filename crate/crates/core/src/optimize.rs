//! Closed-form optimal phases and gain scaling laws under LOS links.
//!
//! With rank-one inter-surface links the channel factorizes into one scalar
//! per surface, `h = Λ Π_ℓ K_ℓ`, where `K_ℓ = out_ℓ · (Θ_ℓ - I) · in_ℓ`
//! (physics-compliant) or `K'_ℓ = out_ℓ · Θ_ℓ · in_ℓ` (conventional), with
//! `out_ℓ`, `in_ℓ` the unit-modulus steering vectors on either side of RIS ℓ.
//! Each factor is maximized independently.
//!
//! Writing `c_ℓ = out_ℓ · in_ℓ`, the physics factor is
//! `K_ℓ = Σₙ e^{j(θₙ + uₙ + wₙ)} - c_ℓ`, whose modulus is at most
//! `N_I + |c_ℓ|`, attained when every term points opposite to `c_ℓ`:
//! `θₙ = π + arg(c_ℓ) - uₙ - wₙ`. The conventional factor is maximized by
//! co-phasing, `θₙ = -uₙ - wₙ`, giving `|K'_ℓ| = N_I`.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use crate::los::LosLinks;
use crate::matrix::C64;
use crate::phase;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    /// Keeps the structural scattering term, `Θ_ℓ - I`.
    Physics,
    /// Drops it, `Θ_ℓ`.
    Conventional,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Physics => "physics",
            Model::Conventional => "conventional",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub model: Model,
    /// `θ_ℓ` per RIS, each in `[0, 2π)`.
    pub phases: Vec<Vec<f64>>,
    /// `|K_ℓ|` at the optimum, per RIS.
    pub hop_magnitudes: Vec<f64>,
    /// `Λ² Π |K_ℓ|²`.
    pub gain: f64,
    /// Natural log of `gain`, accumulated term by term so it stays finite
    /// when `gain` itself overflows.
    pub log_gain: f64,
}

fn finish(model: Model, links: &LosLinks, phases: Vec<Vec<f64>>, hop_magnitudes: Vec<f64>) -> OptimizationResult {
    let total = links.total_gain();
    let gain = hop_magnitudes.iter().fold(total * total, |acc, &k| acc * (k * k));
    let log_gain = 2.0 * total.ln() + 2.0 * hop_magnitudes.iter().map(|k| k.ln()).sum::<f64>();
    OptimizationResult {
        model,
        phases,
        hop_magnitudes,
        gain,
        log_gain,
    }
}

/// Globally optimal phases for the physics-compliant model. The gain is
/// `Λ² Π (|c_ℓ| + N_I)²`.
pub fn optimize_physics(links: &LosLinks) -> OptimizationResult {
    let n = links.elements() as f64;
    let mut phases = Vec::with_capacity(links.ris_count());
    let mut mags = Vec::with_capacity(links.ris_count());
    for l in 0..links.ris_count() {
        let (out, inc) = links.hop_phases(l);
        let inner = phase::steering_inner(out, inc);
        let target = PI + phase::arg(inner);
        phases.push(
            out.iter()
                .zip(inc)
                .map(|(u, w)| phase::wrap(target - u - w))
                .collect(),
        );
        mags.push(inner.norm() + n);
    }
    finish(Model::Physics, links, phases, mags)
}

/// Globally optimal phases for the conventional model. The gain is
/// `Λ² N_I^{2L}` for every realization.
pub fn optimize_conventional(links: &LosLinks) -> OptimizationResult {
    let n = links.elements() as f64;
    let phases = (0..links.ris_count())
        .map(|l| {
            let (out, inc) = links.hop_phases(l);
            out.iter().zip(inc).map(|(u, w)| phase::wrap(-u - w)).collect()
        })
        .collect();
    finish(Model::Conventional, links, phases, alloc::vec![n; links.ris_count()])
}

pub fn optimize(links: &LosLinks, model: Model) -> OptimizationResult {
    match model {
        Model::Physics => optimize_physics(links),
        Model::Conventional => optimize_conventional(links),
    }
}

/// Per-surface factor `K_l` (or `K'_l`) at reflection phases `theta`.
pub fn hop_factor(links: &LosLinks, l: usize, theta: &[f64], model: Model) -> C64 {
    let (out, inc) = links.hop_phases(l);
    let reflected: C64 = out
        .iter()
        .zip(inc)
        .zip(theta)
        .map(|((u, w), t)| phase::unit(u + w + t))
        .sum();
    match model {
        Model::Physics => reflected - phase::steering_inner(out, inc),
        Model::Conventional => reflected,
    }
}

/// `|h|²` at the given phases, evaluated through the per-surface factors.
pub fn channel_gain(links: &LosLinks, phases: &[Vec<f64>], model: Model) -> Result<f64> {
    if phases.len() != links.ris_count() {
        return Err(Error::DimensionMismatch {
            what: "phase vector count",
            expected: (links.ris_count(), 1),
            found: (phases.len(), 1),
        });
    }
    let total = links.total_gain();
    let mut gain = total * total;
    for (l, theta) in phases.iter().enumerate() {
        if theta.len() != links.elements() {
            return Err(Error::PhaseCount {
                ris: l,
                expected: links.elements(),
                found: theta.len(),
            });
        }
        gain *= hop_factor(links, l, theta, model).norm_sqr();
    }
    Ok(gain)
}

/// Average optimal physics-compliant gain for large `N_I`,
/// `Λ² (N_I² + √(π N_I) N_I + N_I)^L`, evaluated in the log domain.
pub fn expected_gain_physics(ris_count: usize, elements: usize, total_path_gain: f64) -> f64 {
    if total_path_gain == 0.0 {
        return 0.0;
    }
    let n = elements as f64;
    let per_hop = n * n + (PI * n).sqrt() * n + n;
    (2.0 * total_path_gain.ln() + ris_count as f64 * per_hop.ln()).exp()
}

/// Optimal conventional gain `Λ² N_I^{2L}` (deterministic).
pub fn gain_conventional(ris_count: usize, elements: usize, total_path_gain: f64) -> f64 {
    let n = elements as f64;
    (0..ris_count).fold(total_path_gain * total_path_gain, |acc, _| acc * (n * n))
}

/// Relative difference of the two average optimal gains,
/// `((N_I + √(π N_I) + 1)^L - N_I^L) / N_I^L`.
pub fn delta_theory(ris_count: usize, elements: usize) -> f64 {
    let n = elements as f64;
    let ratio = ((PI * n).sqrt() + 1.0) / n;
    (ris_count as f64 * ratio.ln_1p()).exp_m1()
}
