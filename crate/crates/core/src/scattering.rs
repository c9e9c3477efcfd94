//! Scattering-parameter view of the cascade.
//!
//! Each RIS is described by its scattering matrix
//! `Θ_ℓ = (Z_I,ℓ + Z0 I)⁻¹ (Z_I,ℓ - Z0 I)`, and the links by the normalized
//! blocks `h_RI,L = z_RI,L/(2Z0)`, `H_{ℓ,ℓ-1} = Z_{ℓ,ℓ-1}/(2Z0)`,
//! `h_IT,1 = z_IT,1/(2Z0)`. Two channel expressions are provided:
//!
//! * [`physics_channel`]: `h_RI,L (Θ_L - I) Π H_{ℓ,ℓ-1} (Θ_{ℓ-1} - I) h_IT,1`,
//!   which keeps the structural scattering term `-I` of every surface;
//! * [`conventional_channel`]: the same chain with `Θ_ℓ` in place of
//!   `Θ_ℓ - I`, as commonly used in the multi-hop RIS literature.
//!
//! The channel evaluators accept `Θ = I`; only the conversion back to an
//! impedance rejects it.

use alloc::vec::Vec;

use crate::matrix::{dot, ComplexMatrix, RCOND_THRESHOLD, C64};
use crate::network::{ImpedanceCascade, PartitionedImpedance, RisLoadSet};
use crate::phase;
use crate::{Error, Result};

/// `Θ = (Z + Z0 I)⁻¹ (Z - Z0 I)`.
pub fn scattering_from_impedance(load: &ComplexMatrix, z0: f64) -> Result<ComplexMatrix> {
    let n = load.rows();
    load.ensure_shape("RIS load", n, n)?;
    let shift = ComplexMatrix::scaled_identity(n, C64::new(z0, 0.0));
    let lu = (load + &shift).lu()?.checked("Z_I + Z0 I")?;
    let numer = load - &shift;
    let mut theta = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let col: Vec<C64> = (0..n).map(|i| numer[(i, j)]).collect();
        for (i, v) in lu.solve(&col)?.into_iter().enumerate() {
            theta[(i, j)] = v;
        }
    }
    Ok(theta)
}

/// `Z = Z0 (I + Θ)(I - Θ)⁻¹`, the inverse of [`scattering_from_impedance`].
///
/// A unit eigenvalue of `Θ` (open-circuit load) has no finite impedance and
/// is reported as [`Error::OpenCircuit`]; for diagonal `Θ` the offending
/// element is named.
pub fn impedance_from_scattering(theta: &ComplexMatrix, z0: f64) -> Result<ComplexMatrix> {
    let n = theta.rows();
    theta.ensure_shape("scattering matrix", n, n)?;
    let eye = ComplexMatrix::identity(n);
    let open_circuit = || {
        let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || theta[(i, j)] == C64::new(0.0, 0.0)));
        let element = if diagonal {
            (0..n)
                .map(|i| (i, (C64::new(1.0, 0.0) - theta[(i, i)]).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .map(|(i, _)| i)
        } else {
            None
        };
        Error::OpenCircuit { element }
    };
    let lu = (&eye - theta).lu()?;
    if lu.rcond() < RCOND_THRESHOLD {
        return Err(open_circuit());
    }
    let inv = lu.inverse()?;
    Ok((&(&eye + theta) * &inv).scale(C64::new(z0, 0.0)))
}

/// Diagonal lossless loads `Z0 (1 + e^{jθ})/(1 - e^{jθ}) = j Z0 cot(θ/2)`.
pub fn impedance_from_phases(phases: &[f64], z0: f64) -> Result<Vec<C64>> {
    phases
        .iter()
        .enumerate()
        .map(|(n, &th)| {
            let e = phase::unit(th);
            let d = C64::new(1.0, 0.0) - e;
            if d.norm() < 2.0 * RCOND_THRESHOLD {
                return Err(Error::OpenCircuit { element: Some(n) });
            }
            Ok((C64::new(1.0, 0.0) + e) / d * z0)
        })
        .collect()
}

/// Per-RIS scattering matrices `Θ_ℓ`.
#[derive(Debug, Clone, PartialEq)]
pub struct RisScattering {
    matrices: Vec<ComplexMatrix>,
    diagonal_unimodular: bool,
}

impl RisScattering {
    /// Arbitrary square scattering matrices of a common size.
    pub fn new(matrices: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = matrices.first() else {
            return Err(Error::InvalidTopology("at least one RIS is required"));
        };
        let n = first.rows();
        for m in &matrices {
            m.ensure_shape("scattering matrix", n, n)?;
        }
        Ok(Self {
            matrices,
            diagonal_unimodular: false,
        })
    }

    /// `Θ_ℓ = diag(e^{jθ_ℓ,1}, …, e^{jθ_ℓ,N})`.
    pub fn from_phases(phases: &[Vec<f64>]) -> Result<Self> {
        let Some(first) = phases.first() else {
            return Err(Error::InvalidTopology("at least one RIS is required"));
        };
        let n = first.len();
        let matrices = phases
            .iter()
            .enumerate()
            .map(|(l, th)| {
                if th.len() != n {
                    return Err(Error::PhaseCount {
                        ris: l,
                        expected: n,
                        found: th.len(),
                    });
                }
                let diag: Vec<C64> = th.iter().map(|&t| phase::unit(t)).collect();
                Ok(ComplexMatrix::from_diagonal(&diag))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            matrices,
            diagonal_unimodular: true,
        })
    }

    /// Scattering matrices of the given loads.
    pub fn from_loads(loads: &RisLoadSet, z0: f64) -> Result<Self> {
        let matrices = loads
            .iter()
            .map(|z| scattering_from_impedance(z, z0))
            .collect::<Result<Vec<_>>>()?;
        let mut ris = Self::new(matrices)?;
        ris.diagonal_unimodular = ris.check_diagonal_unimodular();
        Ok(ris)
    }

    /// `Θ_ℓ = c·I` for every RIS.
    pub fn uniform(ris_count: usize, elements: usize, value: C64) -> Self {
        let unimodular = (value.norm() - 1.0).abs() <= 1e-12;
        Self {
            matrices: (0..ris_count)
                .map(|_| ComplexMatrix::scaled_identity(elements, value))
                .collect(),
            diagonal_unimodular: unimodular,
        }
    }

    fn check_diagonal_unimodular(&self) -> bool {
        self.matrices.iter().all(|m| {
            let n = m.rows();
            (0..n).all(|i| {
                (0..n).all(|j| {
                    if i == j {
                        (m[(i, i)].norm() - 1.0).abs() <= 1e-12
                    } else {
                        m[(i, j)] == C64::new(0.0, 0.0)
                    }
                })
            })
        })
    }

    pub fn is_diagonal_unimodular(&self) -> bool {
        self.diagonal_unimodular
    }

    pub fn ris_count(&self) -> usize {
        self.matrices.len()
    }

    pub fn elements(&self) -> usize {
        self.matrices[0].rows()
    }

    pub fn matrix(&self, l: usize) -> &ComplexMatrix {
        &self.matrices[l]
    }

    /// Canonical phases in `[0, 2π)` of a diagonal unimodular configuration.
    pub fn phases(&self) -> Option<Vec<Vec<f64>>> {
        self.diagonal_unimodular.then(|| {
            self.matrices
                .iter()
                .map(|m| m.diagonal().into_iter().map(|d| phase::wrap(phase::arg(d))).collect())
                .collect()
        })
    }
}

/// Dimensionless link blocks of the cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedLinks {
    h_ri_last: Vec<C64>,
    inter: Vec<ComplexMatrix>,
    h_it_first: Vec<C64>,
}

impl NormalizedLinks {
    /// `inter[k]` is `H_{k+2,k+1}` in one-based RIS numbering, i.e. the link
    /// from RIS `k` into RIS `k + 1` with zero-based indices.
    pub fn new(h_ri_last: Vec<C64>, inter: Vec<ComplexMatrix>, h_it_first: Vec<C64>) -> Result<Self> {
        let n = h_it_first.len();
        if n == 0 {
            return Err(Error::InvalidTopology("each RIS needs at least one element"));
        }
        if h_ri_last.len() != n {
            return Err(Error::DimensionMismatch {
                what: "h_RI,L",
                expected: (1, n),
                found: (1, h_ri_last.len()),
            });
        }
        for h in &inter {
            h.ensure_shape("H_{l,l-1}", n, n)?;
        }
        Ok(Self {
            h_ri_last,
            inter,
            h_it_first,
        })
    }

    /// Normalizes impedance-domain blocks by `2 Z0`.
    pub fn from_cascade(cascade: &ImpedanceCascade, z0: f64) -> Result<Self> {
        let k = C64::new(1.0 / (2.0 * z0), 0.0);
        Self::new(
            cascade.z_ri_last.scale(k).as_slice().to_vec(),
            cascade.inter.iter().map(|h| h.scale(k)).collect(),
            cascade.z_it_first.scale(k).as_slice().to_vec(),
        )
    }

    pub fn from_impedance(z: &PartitionedImpedance) -> Result<Self> {
        Self::from_cascade(&z.cascade(), z.topology().z0())
    }

    pub fn ris_count(&self) -> usize {
        self.inter.len() + 1
    }

    pub fn elements(&self) -> usize {
        self.h_it_first.len()
    }

    pub fn h_ri_last(&self) -> &[C64] {
        &self.h_ri_last
    }

    pub fn h_it_first(&self) -> &[C64] {
        &self.h_it_first
    }

    pub fn inter(&self) -> &[ComplexMatrix] {
        &self.inter
    }
}

fn chain(links: &NormalizedLinks, ris: &RisScattering, structural: bool) -> Result<C64> {
    if ris.ris_count() != links.ris_count() || ris.elements() != links.elements() {
        return Err(Error::DimensionMismatch {
            what: "RIS scattering matrices",
            expected: (links.ris_count(), links.elements()),
            found: (ris.ris_count(), ris.elements()),
        });
    }
    let mut v = links.h_it_first.clone();
    for (l, theta) in ris.matrices.iter().enumerate() {
        let mut next = theta.mul_vec(&v);
        if structural {
            for (x, y) in next.iter_mut().zip(&v) {
                *x -= y;
            }
        }
        v = next;
        if let Some(h) = links.inter.get(l) {
            v = h.mul_vec(&v);
        }
    }
    Ok(dot(&links.h_ri_last, &v))
}

/// Physics-compliant channel, keeping the structural scattering `-I` of
/// each surface.
pub fn physics_channel(links: &NormalizedLinks, ris: &RisScattering) -> Result<C64> {
    chain(links, ris, true)
}

/// Cascaded channel without structural scattering.
pub fn conventional_channel(links: &NormalizedLinks, ris: &RisScattering) -> Result<C64> {
    chain(links, ris, false)
}
