#![allow(dead_code)]

use multiris_core::matrix::{ComplexMatrix, C64};
use multiris_core::network::{ImpedanceCascade, SystemTopology};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub use multiris_core::los::stream_rng as rng;

/// Circularly symmetric complex normal with unit variance.
pub fn cn(rng: &mut ChaCha8Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| cn(rng))
}

pub fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random::<f64>() * std::f64::consts::TAU).collect()
}

/// Random impedance-domain cascade with entries of order `2 Z0`.
pub fn random_cascade(rng: &mut ChaCha8Rng, topo: &SystemTopology) -> ImpedanceCascade {
    let n = topo.elements();
    let scale = C64::new(2.0 * topo.z0(), 0.0);
    ImpedanceCascade {
        z_ri_last: random_matrix(rng, 1, n).scale(scale),
        inter: (1..topo.ris_count()).map(|_| random_matrix(rng, n, n).scale(scale)).collect(),
        z_it_first: random_matrix(rng, n, 1).scale(scale),
    }
}

pub fn to_nalgebra(m: &ComplexMatrix) -> nalgebra::DMatrix<C64> {
    nalgebra::DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn from_nalgebra(m: &nalgebra::DMatrix<C64>) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

pub fn relative_frobenius(a: &ComplexMatrix, reference: &ComplexMatrix) -> f64 {
    a.frobenius_distance(reference) / reference.frobenius_norm()
}

/// Wrapped phase difference of two complex numbers.
pub fn phase_gap(a: C64, b: C64) -> f64 {
    multiris_core::phase::distance(a.arg(), b.arg()).abs()
}
