mod common;

use std::f64::consts::{PI, TAU};

use common::rng;
use multiris_core::los::{sample_los_links, sample_los_links_with, PathGains};
use multiris_core::matrix::C64;
use multiris_core::network::SystemTopology;

fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn phases_are_uniform() {
    let topo = SystemTopology::with_default_z0(4, 64).unwrap();
    let gains = PathGains::uniform(4, 1.0);
    let mut phases = Vec::new();
    for t in 0..40u64 {
        let links = sample_los_links_with(&topo, &gains, &mut rng(2024, t)).unwrap();
        phases.extend_from_slice(links.tx_phases());
        phases.extend_from_slice(links.rx_phases());
        for l in 1..4 {
            phases.extend_from_slice(links.arrival_phases(l));
            phases.extend_from_slice(links.departure_phases(l));
        }
    }
    assert!(phases.iter().all(|p| (0.0..TAU).contains(p)));
    phases.sort_by(f64::total_cmp);
    let n = phases.len() as f64;
    let ks = phases
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let cdf = p / TAU;
            (cdf - i as f64 / n).abs().max(((i + 1) as f64 / n - cdf).abs())
        })
        .fold(0.0, f64::max);
    // 1% critical value of the one-sample Kolmogorov–Smirnov statistic.
    assert!(ks < 1.63 / n.sqrt(), "KS {ks}");
    let (mean, se) = mean_and_se(&phases);
    assert!((mean - PI).abs() < 3.0 * se);
}

/// `|·|` and `|·|²` of the steering inner products across all hops.
fn inner_samples(l: usize, n: usize, trials: u64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let topo = SystemTopology::with_default_z0(l, n).unwrap();
    let gains = PathGains::uniform(l, 1.0);
    let mut abs = Vec::new();
    let mut sq = Vec::new();
    for t in 0..trials {
        let links = sample_los_links_with(&topo, &gains, &mut rng(seed, t)).unwrap();
        for hop in 0..l {
            let (out, inc) = links.hop_phases(hop);
            let c: C64 = out.iter().zip(inc).map(|(u, w)| C64::from_polar(1.0, u + w)).sum();
            abs.push(c.norm());
            sq.push(c.norm_sqr());
        }
    }
    (abs, sq)
}

#[test]
fn inner_product_magnitude_follows_clt() {
    for n in [32usize, 64, 128] {
        let (abs, _) = inner_samples(3, n, 1500, 11);
        let (mean, se) = mean_and_se(&abs);
        let rayleigh = (PI * n as f64 / 4.0).sqrt();
        assert!((mean - rayleigh).abs() < 3.0 * se, "N={n}: {mean} vs {rayleigh} (se {se})");
    }
}

#[test]
fn inner_product_power_is_n() {
    for n in [1usize, 2, 3, 8, 32] {
        let (_, sq) = inner_samples(3, n, 1500, 12);
        let (mean, se) = mean_and_se(&sq);
        if n == 1 {
            assert!(sq.iter().all(|&v| (v - 1.0).abs() < 1e-12));
        } else {
            assert!((mean - n as f64).abs() < 3.0 * se, "N={n}: {mean} (se {se})");
        }
    }
}

#[test]
fn links_are_rank_one_with_constant_modulus() {
    for seed in 0..20u64 {
        let l = 2 + (seed % 3) as usize;
        let n = 2 + (seed % 7) as usize;
        let topo = SystemTopology::with_default_z0(l, n).unwrap();
        let gains = PathGains {
            transmitter: 0.3,
            inter: (0..l - 1).map(|k| 1.5 + k as f64).collect(),
            receiver: 2.0,
        };
        let dense = sample_los_links(&topo, &gains, seed).unwrap().materialize();
        assert!(dense.h_it_first().iter().all(|h| (h.norm() - 0.3).abs() < 1e-14));
        assert!(dense.h_ri_last().iter().all(|h| (h.norm() - 2.0).abs() < 1e-14));
        for (k, h) in dense.inter().iter().enumerate() {
            let g = gains.inter[k];
            assert!(h.as_slice().iter().all(|x| (x.norm() - g).abs() < 1e-13));
            for i in 1..n {
                for j in 1..n {
                    let minor = h[(0, 0)] * h[(i, j)] - h[(0, j)] * h[(i, 0)];
                    assert!(minor.norm() < 1e-12 * g * g, "2x2 minor {}", minor.norm());
                }
            }
        }
    }
}

#[test]
fn links_are_a_function_of_the_seed() {
    let topo = SystemTopology::with_default_z0(3, 16).unwrap();
    let gains = PathGains::uniform(3, 1.0);
    let a = sample_los_links(&topo, &gains, 5).unwrap();
    assert_eq!(a, sample_los_links(&topo, &gains, 5).unwrap());
    assert_eq!(a, sample_los_links_with(&topo, &gains, &mut rng(5, 0)).unwrap());
    assert_ne!(a, sample_los_links(&topo, &gains, 6).unwrap());
}
