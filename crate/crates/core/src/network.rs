//! The transmitter / RIS / receiver system as an N-port network.
//!
//! Ports are ordered transmitter, the `L·N_I` RIS elements (RIS by RIS), then
//! the receiver, so the impedance matrix partitions as
//!
//! ```text
//!     ┌ z_TT  z_TI  z_TR ┐
//! Z = │ z_IT  Z_II  z_IR │
//!     └ z_RT  z_RI  z_RR ┘
//! ```
//!
//! with `Z_II` further split into `N_I × N_I` blocks: `Z_II,ℓ` on the diagonal
//! (array self and mutual impedance of RIS ℓ) and `Z_{i,j}` off the diagonal
//! (transmission from RIS j to RIS i). RIS indices are zero-based in the API.

use alloc::vec::Vec;

use crate::matrix::{dot, ComplexMatrix, Tolerance, C64};
use crate::scattering;
use crate::{Error, Result};

pub const DEFAULT_Z0: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemTopology {
    ris_count: usize,
    elements: usize,
    z0: f64,
}

impl SystemTopology {
    pub fn new(ris_count: usize, elements: usize, z0: f64) -> Result<Self> {
        if ris_count == 0 {
            return Err(Error::InvalidTopology("at least one RIS is required"));
        }
        if elements == 0 {
            return Err(Error::InvalidTopology("each RIS needs at least one element"));
        }
        if !(z0 > 0.0 && z0.is_finite()) {
            return Err(Error::InvalidTopology("reference impedance must be positive and finite"));
        }
        Ok(Self {
            ris_count,
            elements,
            z0,
        })
    }

    /// Topology with the default 50 Ω reference impedance.
    pub fn with_default_z0(ris_count: usize, elements: usize) -> Result<Self> {
        Self::new(ris_count, elements, DEFAULT_Z0)
    }

    /// Number of RISs, `L`.
    pub fn ris_count(&self) -> usize {
        self.ris_count
    }

    /// Elements per RIS, `N_I`.
    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// Total RIS element count `L·N_I`.
    pub fn ris_ports(&self) -> usize {
        self.ris_count * self.elements
    }

    /// Total port count `2 + L·N_I`.
    pub fn port_count(&self) -> usize {
        2 + self.ris_ports()
    }
}

/// Modeling assumptions that zero out or fix blocks of the impedance matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AssumptionSet {
    /// 1: no feedback towards transmitter or from receiver (`z_TI = 0`, `z_TR = 0`, `z_IR = 0`).
    pub unilateral_endpoints: bool,
    /// 2: transmit and receive antennas matched (`z_TT = z_RR = Z0`).
    pub matched_endpoints: bool,
    /// 3: only TX→RIS 1 and RIS L→RX links exist; direct TX→RX is blocked.
    pub blocked_endpoint_links: bool,
    /// 4: no feedback between RISs (`Z_{i,j} = 0` for `i < j`).
    pub unilateral_ris: bool,
    /// 5: only adjacent RISs are connected (`Z_{i,j} = 0` for `i - j ≥ 2`).
    pub nearest_neighbor_ris: bool,
    /// 6: RIS arrays matched and uncoupled (`Z_II,ℓ = Z0·I`).
    pub matched_uncoupled_ris: bool,
}

impl AssumptionSet {
    pub const NONE: Self = Self {
        unilateral_endpoints: false,
        matched_endpoints: false,
        blocked_endpoint_links: false,
        unilateral_ris: false,
        nearest_neighbor_ris: false,
        matched_uncoupled_ris: false,
    };

    pub const ALL: Self = Self {
        unilateral_endpoints: true,
        matched_endpoints: true,
        blocked_endpoint_links: true,
        unilateral_ris: true,
        nearest_neighbor_ris: true,
        matched_uncoupled_ris: true,
    };

    /// Flag by number, 1 through 6.
    pub fn is_active(&self, assumption: u8) -> bool {
        match assumption {
            1 => self.unilateral_endpoints,
            2 => self.matched_endpoints,
            3 => self.blocked_endpoint_links,
            4 => self.unilateral_ris,
            5 => self.nearest_neighbor_ris,
            6 => self.matched_uncoupled_ris,
            _ => false,
        }
    }

    pub fn with(mut self, assumption: u8, active: bool) -> Self {
        match assumption {
            1 => self.unilateral_endpoints = active,
            2 => self.matched_endpoints = active,
            3 => self.blocked_endpoint_links = active,
            4 => self.unilateral_ris = active,
            5 => self.nearest_neighbor_ris = active,
            6 => self.matched_uncoupled_ris = active,
            _ => {}
        }
        self
    }
}

/// Raw block inputs for [`assemble_impedance_matrix`]. Omitted blocks are
/// zero unless an active assumption fixes them.
#[derive(Debug, Clone, Default)]
pub struct ImpedanceBlocks {
    pub z_tt: Option<C64>,
    pub z_rr: Option<C64>,
    pub z_tr: Option<C64>,
    pub z_rt: Option<C64>,
    /// `1 × L·N_I`
    pub z_ti: Option<ComplexMatrix>,
    /// `L·N_I × 1`
    pub z_it: Option<ComplexMatrix>,
    /// `1 × L·N_I`
    pub z_ri: Option<ComplexMatrix>,
    /// `L·N_I × 1`
    pub z_ir: Option<ComplexMatrix>,
    /// `L·N_I × L·N_I`
    pub z_ii: Option<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PartitionedImpedance {
    topology: SystemTopology,
    assumptions: AssumptionSet,
    reciprocal: bool,
    pub(crate) z_tt: C64,
    pub(crate) z_rr: C64,
    pub(crate) z_tr: C64,
    pub(crate) z_rt: C64,
    pub(crate) z_ti: ComplexMatrix,
    pub(crate) z_it: ComplexMatrix,
    pub(crate) z_ri: ComplexMatrix,
    pub(crate) z_ir: ComplexMatrix,
    pub(crate) z_ii: ComplexMatrix,
}

impl PartitionedImpedance {
    pub fn topology(&self) -> &SystemTopology {
        &self.topology
    }

    pub fn assumptions(&self) -> AssumptionSet {
        self.assumptions
    }

    /// Whether the network was assembled as reciprocal.
    pub fn is_reciprocal(&self) -> bool {
        self.reciprocal
    }

    pub fn z_tt(&self) -> C64 {
        self.z_tt
    }

    pub fn z_rr(&self) -> C64 {
        self.z_rr
    }

    pub fn z_tr(&self) -> C64 {
        self.z_tr
    }

    pub fn z_rt(&self) -> C64 {
        self.z_rt
    }

    pub fn z_ti(&self) -> &ComplexMatrix {
        &self.z_ti
    }

    pub fn z_it(&self) -> &ComplexMatrix {
        &self.z_it
    }

    pub fn z_ri(&self) -> &ComplexMatrix {
        &self.z_ri
    }

    pub fn z_ir(&self) -> &ComplexMatrix {
        &self.z_ir
    }

    pub fn z_ii(&self) -> &ComplexMatrix {
        &self.z_ii
    }

    /// `Z_II,ℓ`, the array impedance of RIS `l`.
    pub fn z_ii_diag(&self, l: usize) -> ComplexMatrix {
        self.z_ii_cross(l, l)
    }

    /// `Z_{i,j}`, transmission from RIS `j` to RIS `i`.
    pub fn z_ii_cross(&self, i: usize, j: usize) -> ComplexMatrix {
        let n = self.topology.elements;
        self.z_ii.block(i * n, j * n, n, n)
    }

    /// `z_IT,ℓ` (`N_I × 1`).
    pub fn z_it_seg(&self, l: usize) -> ComplexMatrix {
        let n = self.topology.elements;
        self.z_it.block(l * n, 0, n, 1)
    }

    /// `z_RI,ℓ` (`1 × N_I`).
    pub fn z_ri_seg(&self, l: usize) -> ComplexMatrix {
        let n = self.topology.elements;
        self.z_ri.block(0, l * n, 1, n)
    }

    /// The full `N × N` impedance matrix in port order TX, RIS elements, RX.
    pub fn to_dense(&self) -> ComplexMatrix {
        let m = self.topology.ris_ports();
        let mut z = ComplexMatrix::zeros(m + 2, m + 2);
        z[(0, 0)] = self.z_tt;
        z[(0, m + 1)] = self.z_tr;
        z[(m + 1, 0)] = self.z_rt;
        z[(m + 1, m + 1)] = self.z_rr;
        z.set_block(0, 1, &self.z_ti);
        z.set_block(1, 0, &self.z_it);
        z.set_block(1, 1, &self.z_ii);
        z.set_block(1, m + 1, &self.z_ir);
        z.set_block(m + 1, 1, &self.z_ri);
        z
    }

    /// Impedance-domain cascade blocks `z_RI,L`, `Z_{ℓ,ℓ-1}`, `z_IT,1`.
    pub fn cascade(&self) -> ImpedanceCascade {
        let last = self.topology.ris_count - 1;
        ImpedanceCascade {
            z_ri_last: self.z_ri_seg(last),
            inter: (1..=last).map(|l| self.z_ii_cross(l, l - 1)).collect(),
            z_it_first: self.z_it_seg(0),
        }
    }

    /// Assembles a network with all six assumptions active from its cascade
    /// blocks.
    pub fn from_cascade(topology: SystemTopology, cascade: &ImpedanceCascade) -> Result<Self> {
        cascade.validate(&topology)?;
        let n = topology.elements;
        let l_count = topology.ris_count;
        let m = topology.ris_ports();
        let mut z_it = ComplexMatrix::zeros(m, 1);
        z_it.set_block(0, 0, &cascade.z_it_first);
        let mut z_ri = ComplexMatrix::zeros(1, m);
        z_ri.set_block(0, (l_count - 1) * n, &cascade.z_ri_last);
        let mut z_ii = ComplexMatrix::zeros(m, m);
        for (k, h) in cascade.inter.iter().enumerate() {
            z_ii.set_block((k + 1) * n, k * n, h);
        }
        let blocks = ImpedanceBlocks {
            z_it: Some(z_it),
            z_ri: Some(z_ri),
            z_ii: Some(z_ii),
            ..Default::default()
        };
        assemble_impedance_matrix(topology, blocks, AssumptionSet::ALL, false)
    }
}

fn check_forced_scalar(
    supplied: Option<C64>,
    forced: C64,
    assumption: u8,
    block: &'static str,
) -> Result<()> {
    match supplied {
        Some(v) if !Tolerance::default().scalars_close(v, forced) => {
            Err(Error::AssumptionContradiction { assumption, block })
        }
        _ => Ok(()),
    }
}

fn check_forced_block(
    supplied: &ComplexMatrix,
    forced: &ComplexMatrix,
    assumption: u8,
    block: &'static str,
) -> Result<()> {
    if Tolerance::default().matrices_close(supplied, forced) {
        Ok(())
    } else {
        Err(Error::AssumptionContradiction { assumption, block })
    }
}

/// Builds the partitioned impedance matrix and enforces every active
/// assumption.
///
/// Supplied blocks that disagree with an assumption (beyond the default
/// tolerance) are rejected rather than silently overwritten. With
/// `reciprocal`, supplied transpose pairs must agree and an omitted partner
/// is filled by transposition; feedback blocks zeroed by assumption 1 are
/// exempt from reciprocity, since that assumption deliberately drops them.
pub fn assemble_impedance_matrix(
    topology: SystemTopology,
    blocks: ImpedanceBlocks,
    assumptions: AssumptionSet,
    reciprocal: bool,
) -> Result<PartitionedImpedance> {
    let m = topology.ris_ports();
    let n = topology.elements;
    let l_count = topology.ris_count;
    let z0 = C64::new(topology.z0, 0.0);
    let zero = C64::new(0.0, 0.0);

    for (blk, what, rows, cols) in [
        (&blocks.z_ti, "z_TI", 1, m),
        (&blocks.z_it, "z_IT", m, 1),
        (&blocks.z_ri, "z_RI", 1, m),
        (&blocks.z_ir, "z_IR", m, 1),
        (&blocks.z_ii, "Z_II", m, m),
    ] {
        if let Some(b) = blk {
            b.ensure_shape(what, rows, cols)?;
        }
    }

    let tol = Tolerance::default();
    if reciprocal {
        if let (Some(a), Some(b)) = (blocks.z_tr, blocks.z_rt) {
            if !tol.scalars_close(a, b) {
                return Err(Error::NotReciprocal("z_TR != z_RT"));
            }
        }
        if let (Some(a), Some(b)) = (&blocks.z_ti, &blocks.z_it) {
            if !tol.matrices_close(a, &b.transpose()) {
                return Err(Error::NotReciprocal("z_TI != z_IT^T"));
            }
        }
        if let (Some(a), Some(b)) = (&blocks.z_ir, &blocks.z_ri) {
            if !tol.matrices_close(a, &b.transpose()) {
                return Err(Error::NotReciprocal("z_IR != z_RI^T"));
            }
        }
        if let Some(z_ii) = &blocks.z_ii {
            if !tol.matrices_close(z_ii, &z_ii.transpose()) && !assumptions.unilateral_ris {
                return Err(Error::NotReciprocal("Z_II != Z_II^T"));
            }
        }
    }

    // Assumption checks run on the blocks as supplied.
    if assumptions.unilateral_endpoints {
        check_forced_scalar(blocks.z_tr, zero, 1, "z_TR")?;
        if let Some(b) = &blocks.z_ti {
            check_forced_block(b, &ComplexMatrix::zeros(1, m), 1, "z_TI")?;
        }
        if let Some(b) = &blocks.z_ir {
            check_forced_block(b, &ComplexMatrix::zeros(m, 1), 1, "z_IR")?;
        }
    }
    if assumptions.matched_endpoints {
        check_forced_scalar(blocks.z_tt, z0, 2, "z_TT")?;
        check_forced_scalar(blocks.z_rr, z0, 2, "z_RR")?;
    }
    if assumptions.blocked_endpoint_links {
        check_forced_scalar(blocks.z_rt, zero, 3, "z_RT")?;
        let zero_seg = ComplexMatrix::zeros(n, 1);
        if let Some(b) = &blocks.z_it {
            for l in 1..l_count {
                check_forced_block(&b.block(l * n, 0, n, 1), &zero_seg, 3, "z_IT segment")?;
            }
        }
        let zero_seg = ComplexMatrix::zeros(1, n);
        if let Some(b) = &blocks.z_ri {
            for l in 0..l_count - 1 {
                check_forced_block(&b.block(0, l * n, 1, n), &zero_seg, 3, "z_RI segment")?;
            }
        }
    }
    if let Some(z_ii) = &blocks.z_ii {
        let zero_block = ComplexMatrix::zeros(n, n);
        let matched = ComplexMatrix::scaled_identity(n, z0);
        for i in 0..l_count {
            for j in 0..l_count {
                let b = z_ii.block(i * n, j * n, n, n);
                if i < j && assumptions.unilateral_ris {
                    check_forced_block(&b, &zero_block, 4, "Z_II upper block")?;
                }
                if i >= j + 2 && assumptions.nearest_neighbor_ris {
                    check_forced_block(&b, &zero_block, 5, "Z_II non-adjacent block")?;
                }
                // An all-zero diagonal block counts as omitted.
                if i == j && assumptions.matched_uncoupled_ris && !b.is_zero() {
                    check_forced_block(&b, &matched, 6, "Z_II diagonal block")?;
                }
            }
        }
    }

    let mut z_tt = blocks.z_tt.unwrap_or(zero);
    let mut z_rr = blocks.z_rr.unwrap_or(zero);
    let mut z_rt = blocks.z_rt.unwrap_or(zero);
    let mut z_tr = blocks.z_tr.or(if reciprocal { blocks.z_rt } else { None }).unwrap_or(zero);
    if reciprocal && blocks.z_rt.is_none() {
        z_rt = z_tr;
    }
    let mut z_it = blocks.z_it.clone().unwrap_or_else(|| ComplexMatrix::zeros(m, 1));
    let mut z_ri = blocks.z_ri.clone().unwrap_or_else(|| ComplexMatrix::zeros(1, m));
    let mut z_ti = match (&blocks.z_ti, reciprocal) {
        (Some(b), _) => b.clone(),
        (None, true) => z_it.transpose(),
        (None, false) => ComplexMatrix::zeros(1, m),
    };
    let mut z_ir = match (&blocks.z_ir, reciprocal) {
        (Some(b), _) => b.clone(),
        (None, true) => z_ri.transpose(),
        (None, false) => ComplexMatrix::zeros(m, 1),
    };
    if reciprocal && blocks.z_it.is_none() {
        z_it = z_ti.transpose();
    }
    if reciprocal && blocks.z_ri.is_none() {
        z_ri = z_ir.transpose();
    }
    let mut z_ii = blocks.z_ii.unwrap_or_else(|| ComplexMatrix::zeros(m, m));

    if assumptions.unilateral_endpoints {
        z_ti = ComplexMatrix::zeros(1, m);
        z_tr = zero;
        z_ir = ComplexMatrix::zeros(m, 1);
    }
    if assumptions.matched_endpoints {
        z_tt = z0;
        z_rr = z0;
    }
    if assumptions.blocked_endpoint_links {
        z_rt = zero;
        for l in 1..l_count {
            z_it.set_block(l * n, 0, &ComplexMatrix::zeros(n, 1));
        }
        for l in 0..l_count - 1 {
            z_ri.set_block(0, l * n, &ComplexMatrix::zeros(1, n));
        }
    }
    let zero_block = ComplexMatrix::zeros(n, n);
    let matched = ComplexMatrix::scaled_identity(n, z0);
    for i in 0..l_count {
        for j in 0..l_count {
            if (i < j && assumptions.unilateral_ris) || (i >= j + 2 && assumptions.nearest_neighbor_ris) {
                z_ii.set_block(i * n, j * n, &zero_block);
            }
        }
        if assumptions.matched_uncoupled_ris {
            z_ii.set_block(i * n, i * n, &matched);
        }
    }

    Ok(PartitionedImpedance {
        topology,
        assumptions,
        reciprocal,
        z_tt,
        z_rr,
        z_tr,
        z_rt,
        z_ti,
        z_it,
        z_ri,
        z_ir,
        z_ii,
    })
}

/// Reconfigurable impedance networks `Z_I,ℓ`, one `N_I × N_I` matrix per RIS.
#[derive(Debug, Clone, PartialEq)]
pub struct RisLoadSet {
    loads: Vec<ComplexMatrix>,
}

impl RisLoadSet {
    pub fn new(topology: &SystemTopology, loads: Vec<ComplexMatrix>) -> Result<Self> {
        if loads.len() != topology.ris_count {
            return Err(Error::DimensionMismatch {
                what: "RIS load count",
                expected: (topology.ris_count, 1),
                found: (loads.len(), 1),
            });
        }
        for z in &loads {
            z.ensure_shape("RIS load", topology.elements, topology.elements)?;
        }
        Ok(Self { loads })
    }

    /// Lossless diagonal loads `Z0·(1 + e^{jθ})/(1 - e^{jθ})` realizing the
    /// reflection phases `θ_ℓ`. Phase 0 (open circuit) is rejected.
    pub fn from_phases(topology: &SystemTopology, phases: &[Vec<f64>]) -> Result<Self> {
        if phases.len() != topology.ris_count {
            return Err(Error::DimensionMismatch {
                what: "phase vector count",
                expected: (topology.ris_count, 1),
                found: (phases.len(), 1),
            });
        }
        let loads = phases
            .iter()
            .enumerate()
            .map(|(l, th)| {
                if th.len() != topology.elements {
                    return Err(Error::PhaseCount {
                        ris: l,
                        expected: topology.elements,
                        found: th.len(),
                    });
                }
                let diag = scattering::impedance_from_phases(th, topology.z0)?;
                Ok(ComplexMatrix::from_diagonal(&diag))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { loads })
    }

    pub fn len(&self) -> usize {
        self.loads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loads.is_empty()
    }

    pub fn load(&self, l: usize) -> &ComplexMatrix {
        &self.loads[l]
    }

    pub fn iter(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.loads.iter()
    }

    /// `Z_I = diag(Z_I,1, …, Z_I,L)`.
    pub fn block_diagonal(&self) -> ComplexMatrix {
        let n = self.loads.first().map_or(0, |z| z.rows());
        let mut z = ComplexMatrix::zeros(n * self.loads.len(), n * self.loads.len());
        for (l, load) in self.loads.iter().enumerate() {
            z.set_block(l * n, l * n, load);
        }
        z
    }
}

/// Channel from a full impedance description via a dense solve:
/// `h = (z_RT - z_RI (Z_I + Z_II)⁻¹ z_IT) / (2 Z0)`.
///
/// Valid when the endpoint feedback is negligible and the endpoints are
/// matched (assumptions 1 and 2), which must be active in `z`.
pub fn channel_exact(z: &PartitionedImpedance, loads: &RisLoadSet) -> Result<C64> {
    for a in [1, 2] {
        if !z.assumptions.is_active(a) {
            return Err(Error::AssumptionRequired(a));
        }
    }
    let topo = z.topology;
    if loads.len() != topo.ris_count || loads.load(0).rows() != topo.elements {
        return Err(Error::DimensionMismatch {
            what: "RIS loads",
            expected: (topo.ris_count, topo.elements),
            found: (loads.len(), loads.load(0).rows()),
        });
    }
    let system = &loads.block_diagonal() + &z.z_ii;
    let x = system.solve(z.z_it.as_slice(), "Z_I + Z_II")?;
    let coupled = dot(z.z_ri.as_slice(), &x);
    Ok((z.z_rt - coupled) / (2.0 * topo.z0))
}

/// Impedance-domain blocks of a nearest-neighbour cascade.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceCascade {
    /// `z_RI,L`, `1 × N_I`.
    pub z_ri_last: ComplexMatrix,
    /// `Z_{ℓ,ℓ-1}` for ℓ = 2..L, so `inter[k]` couples RIS `k` into RIS `k + 1`.
    pub inter: Vec<ComplexMatrix>,
    /// `z_IT,1`, `N_I × 1`.
    pub z_it_first: ComplexMatrix,
}

impl ImpedanceCascade {
    pub fn validate(&self, topology: &SystemTopology) -> Result<()> {
        let n = topology.elements();
        self.z_ri_last.ensure_shape("z_RI,L", 1, n)?;
        self.z_it_first.ensure_shape("z_IT,1", n, 1)?;
        if self.inter.len() + 1 != topology.ris_count() {
            return Err(Error::DimensionMismatch {
                what: "inter-RIS block count",
                expected: (topology.ris_count() - 1, 1),
                found: (self.inter.len(), 1),
            });
        }
        for z in &self.inter {
            z.ensure_shape("Z_{l,l-1}", n, n)?;
        }
        Ok(())
    }

    pub fn ris_count(&self) -> usize {
        self.inter.len() + 1
    }
}

/// Channel of a cascade under all six assumptions, using only the `(L, 1)`
/// block of `(Z_I + Z_II)⁻¹`:
///
/// ```text
/// h = -(-1)^(L-1)/(2 Z0) · z_RI,L (Z_I,L + Z0 I)⁻¹ Π_{ℓ=L..2} [Z_{ℓ,ℓ-1} (Z_I,ℓ-1 + Z0 I)⁻¹] z_IT,1
/// ```
///
/// Evaluated right to left as a chain of solves against `z_IT,1`.
pub fn channel_cascaded_impedance(cascade: &ImpedanceCascade, loads: &RisLoadSet, z0: f64) -> Result<C64> {
    let l_count = cascade.ris_count();
    let n = cascade.z_it_first.rows();
    let topo = SystemTopology::new(l_count, n, z0)?;
    cascade.validate(&topo)?;
    if loads.len() != l_count {
        return Err(Error::DimensionMismatch {
            what: "RIS load count",
            expected: (l_count, 1),
            found: (loads.len(), 1),
        });
    }
    let shift = ComplexMatrix::scaled_identity(n, C64::new(z0, 0.0));
    let mut v = cascade.z_it_first.as_slice().to_vec();
    for (l, load) in loads.iter().enumerate() {
        load.ensure_shape("RIS load", n, n)?;
        v = (load + &shift).solve(&v, "Z_I,l + Z0 I")?;
        if l + 1 < l_count {
            v = cascade.inter[l].mul_vec(&v);
        }
    }
    // -(-1)^(L-1) = (-1)^L
    let sign = if l_count % 2 == 0 { 1.0 } else { -1.0 };
    Ok(dot(cascade.z_ri_last.as_slice(), &v) * (sign / (2.0 * z0)))
}
