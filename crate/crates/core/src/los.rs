//! Line-of-sight links with independent uniform steering phases.
//!
//! Every link is a path gain times unit-modulus steering vectors:
//! `h_IT,1 = Λ_IT,1 h̃_IT,1`, `h_RI,L = Λ_RI,L h̃_RI,L` and the rank-one
//! inter-surface links `H_{ℓ,ℓ-1} = Λ_{ℓ,ℓ-1} ã_{ℓ,ℓ-1} b̃_{ℓ,ℓ-1}`, where
//! `ã` is a column (arrival at RIS ℓ) and `b̃` a row (departure from RIS ℓ-1).

use alloc::vec::Vec;
use core::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::{ComplexMatrix, C64};
use crate::network::SystemTopology;
use crate::phase;
use crate::scattering::NormalizedLinks;
use crate::{Error, Result};

/// Deterministic stream `stream` under `seed`. Streams are independent
/// ChaCha8 streams, so trial `t` of an experiment draws from
/// `stream_rng(seed, t)` regardless of which worker runs it.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Path gains `Λ_IT,1`, `Λ_{ℓ,ℓ-1}` (ℓ = 2..L) and `Λ_RI,L`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGains {
    pub transmitter: f64,
    pub inter: Vec<f64>,
    pub receiver: f64,
}

impl PathGains {
    pub fn uniform(ris_count: usize, value: f64) -> Self {
        Self {
            transmitter: value,
            inter: alloc::vec![value; ris_count.saturating_sub(1)],
            receiver: value,
        }
    }

    pub fn validate(&self, topology: &SystemTopology) -> Result<()> {
        if self.inter.len() + 1 != topology.ris_count() {
            return Err(Error::DimensionMismatch {
                what: "inter-RIS path gains",
                expected: (topology.ris_count() - 1, 1),
                found: (self.inter.len(), 1),
            });
        }
        let check = |link: &'static str, value: f64| {
            if value >= 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidPathGain { link, value })
            }
        };
        check("TX -> RIS 1", self.transmitter)?;
        check("RIS L -> RX", self.receiver)?;
        for &g in &self.inter {
            check("inter-RIS", g)?;
        }
        Ok(())
    }

    /// Total path gain `Λ = Λ_RI,L · Π Λ_{ℓ,ℓ-1} · Λ_IT,1`.
    pub fn total(&self) -> f64 {
        self.receiver * self.inter.iter().product::<f64>() * self.transmitter
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LosLinks {
    gains: PathGains,
    /// `φ_IT,1`
    tx_phases: Vec<f64>,
    /// `φ_RI,L`
    rx_phases: Vec<f64>,
    /// `α_{k+2,k+1}`: arrival phases at RIS `k + 1` (zero-based).
    arrival: Vec<Vec<f64>>,
    /// `β_{k+2,k+1}`: departure phases at RIS `k` (zero-based).
    departure: Vec<Vec<f64>>,
}

impl LosLinks {
    /// Links from explicit phases; phases are wrapped to `[0, 2π)`.
    pub fn new(
        gains: PathGains,
        tx_phases: Vec<f64>,
        arrival: Vec<Vec<f64>>,
        departure: Vec<Vec<f64>>,
        rx_phases: Vec<f64>,
    ) -> Result<Self> {
        let n = tx_phases.len();
        let topology = SystemTopology::with_default_z0(arrival.len() + 1, n)?;
        gains.validate(&topology)?;
        let bad = rx_phases.len() != n
            || arrival.len() != departure.len()
            || arrival.iter().chain(&departure).any(|v| v.len() != n);
        if bad {
            return Err(Error::DimensionMismatch {
                what: "steering phase vectors",
                expected: (topology.ris_count(), n),
                found: (arrival.len() + 1, rx_phases.len()),
            });
        }
        let wrap_all = |v: Vec<f64>| v.into_iter().map(phase::wrap).collect::<Vec<_>>();
        Ok(Self {
            gains,
            tx_phases: wrap_all(tx_phases),
            rx_phases: wrap_all(rx_phases),
            arrival: arrival.into_iter().map(wrap_all).collect(),
            departure: departure.into_iter().map(wrap_all).collect(),
        })
    }

    pub fn ris_count(&self) -> usize {
        self.arrival.len() + 1
    }

    pub fn elements(&self) -> usize {
        self.tx_phases.len()
    }

    pub fn gains(&self) -> &PathGains {
        &self.gains
    }

    pub fn total_gain(&self) -> f64 {
        self.gains.total()
    }

    pub fn tx_phases(&self) -> &[f64] {
        &self.tx_phases
    }

    pub fn rx_phases(&self) -> &[f64] {
        &self.rx_phases
    }

    /// Arrival phases of the link from RIS `l - 1` into RIS `l` (`l ≥ 1`).
    pub fn arrival_phases(&self, l: usize) -> &[f64] {
        &self.arrival[l - 1]
    }

    /// Departure phases of the link from RIS `l - 1` into RIS `l` (`l ≥ 1`).
    pub fn departure_phases(&self, l: usize) -> &[f64] {
        &self.departure[l - 1]
    }

    /// Steering phases on either side of RIS `l`: the outgoing vector
    /// (towards the receiver) and the incoming one (from the transmitter).
    /// The per-surface factor is `out · (Θ_l - I) · in`.
    pub fn hop_phases(&self, l: usize) -> (&[f64], &[f64]) {
        let last = self.ris_count() - 1;
        let outgoing = if l == last {
            &self.rx_phases[..]
        } else {
            &self.departure[l][..]
        };
        let incoming = if l == 0 {
            &self.tx_phases[..]
        } else {
            &self.arrival[l - 1][..]
        };
        (outgoing, incoming)
    }

    /// Unit-modulus inner product `out · in` across RIS `l`.
    pub fn hop_inner(&self, l: usize) -> C64 {
        let (out, inc) = self.hop_phases(l);
        phase::steering_inner(out, inc)
    }

    /// Dense link blocks `h_RI,L`, `H_{ℓ,ℓ-1}`, `h_IT,1`.
    pub fn materialize(&self) -> NormalizedLinks {
        let steer = |gain: f64, phases: &[f64]| -> Vec<C64> {
            phases.iter().map(|&p| C64::from_polar(gain, p)).collect()
        };
        let n = self.elements();
        let inter = self
            .arrival
            .iter()
            .zip(&self.departure)
            .zip(&self.gains.inter)
            .map(|((a, b), &g)| ComplexMatrix::from_fn(n, n, |i, j| C64::from_polar(g, a[i] + b[j])))
            .collect();
        NormalizedLinks::new(
            steer(self.gains.receiver, &self.rx_phases),
            inter,
            steer(self.gains.transmitter, &self.tx_phases),
        )
        .expect("LosLinks dimensions are validated at construction")
    }
}

fn uniform_phases<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| phase::wrap(rng.random::<f64>() * TAU)).collect()
}

/// Draws all steering phases independently and uniformly in `[0, 2π)` from
/// `rng`, in the order `φ_IT,1`, then `(α, β)` link by link, then `φ_RI,L`.
pub fn sample_los_links_with<R: Rng + ?Sized>(
    topology: &SystemTopology,
    gains: &PathGains,
    rng: &mut R,
) -> Result<LosLinks> {
    gains.validate(topology)?;
    let n = topology.elements();
    let tx_phases = uniform_phases(rng, n);
    let mut arrival = Vec::with_capacity(topology.ris_count() - 1);
    let mut departure = Vec::with_capacity(topology.ris_count() - 1);
    for _ in 1..topology.ris_count() {
        arrival.push(uniform_phases(rng, n));
        departure.push(uniform_phases(rng, n));
    }
    let rx_phases = uniform_phases(rng, n);
    Ok(LosLinks {
        gains: gains.clone(),
        tx_phases,
        rx_phases,
        arrival,
        departure,
    })
}

/// Samples links from stream 0 of `seed`.
pub fn sample_los_links(topology: &SystemTopology, gains: &PathGains, seed: u64) -> Result<LosLinks> {
    sample_los_links_with(topology, gains, &mut stream_rng(seed, 0))
}
