//! Block lower-bidiagonal matrices and their closed-form inverse.
//!
//! A matrix with square blocks `D_ℓ` on the diagonal and `S_{ℓ,ℓ-1}` on the
//! first subdiagonal is inverted block by block:
//!
//! ```text
//! N_ij = 0                                              i < j
//! N_ii = D_i⁻¹
//! N_ij = (-1)^(i-j) D_i⁻¹ · S_{i,i-1} D_{i-1}⁻¹ · … · S_{j+1,j} D_j⁻¹   i > j
//! ```
//!
//! The factors in the last product are taken with the subdiagonal index
//! decreasing from left to right; the order matters since the blocks do not
//! commute. Indices in this module are zero-based.

use alloc::vec::Vec;

use crate::matrix::{ComplexMatrix, C64};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockBidiagonal {
    block_size: usize,
    diagonal: Vec<ComplexMatrix>,
    subdiagonal: Vec<ComplexMatrix>,
}

impl BlockBidiagonal {
    /// `subdiagonal[k]` is the block in block-row `k + 1`, block-column `k`.
    ///
    /// Every diagonal block must pass the reciprocal condition check.
    pub fn new(diagonal: Vec<ComplexMatrix>, subdiagonal: Vec<ComplexMatrix>) -> Result<Self> {
        let Some(first) = diagonal.first() else {
            return Err(Error::InvalidTopology("block bidiagonal matrix needs at least one block"));
        };
        let n = first.rows();
        if n == 0 {
            return Err(Error::InvalidTopology("block size must be at least 1"));
        }
        if subdiagonal.len() + 1 != diagonal.len() {
            return Err(Error::DimensionMismatch {
                what: "subdiagonal block count",
                expected: (diagonal.len() - 1, 1),
                found: (subdiagonal.len(), 1),
            });
        }
        for d in &diagonal {
            d.ensure_shape("diagonal block", n, n)?;
            d.lu()?.checked("diagonal block")?;
        }
        for s in &subdiagonal {
            s.ensure_shape("subdiagonal block", n, n)?;
        }
        Ok(Self {
            block_size: n,
            diagonal,
            subdiagonal,
        })
    }

    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block_count(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal_block(&self, l: usize) -> &ComplexMatrix {
        &self.diagonal[l]
    }

    /// Block at block-row `l`, block-column `l - 1` (`l ≥ 1`).
    pub fn subdiagonal_block(&self, l: usize) -> &ComplexMatrix {
        &self.subdiagonal[l - 1]
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.block_size;
        let mut m = ComplexMatrix::zeros(n * self.block_count(), n * self.block_count());
        for (l, d) in self.diagonal.iter().enumerate() {
            m.set_block(l * n, l * n, d);
        }
        for (k, s) in self.subdiagonal.iter().enumerate() {
            m.set_block((k + 1) * n, k * n, s);
        }
        m
    }

    /// Structured inverse, assembled from explicit `D_ℓ⁻¹` products.
    pub fn inverse(&self) -> Result<BlockLowerTriangular> {
        let count = self.block_count();
        let d_inv = self
            .diagonal
            .iter()
            .map(|d| d.inverse("diagonal block"))
            .collect::<Result<Vec<_>>>()?;
        // S_{k,k-1} · D_{k-1}⁻¹ for k = 1..L-1
        let links: Vec<ComplexMatrix> = self
            .subdiagonal
            .iter()
            .enumerate()
            .map(|(k, s)| s * &d_inv[k])
            .collect();

        let mut blocks = Vec::with_capacity(count * (count + 1) / 2);
        for i in 0..count {
            let mut row = Vec::with_capacity(i + 1);
            let mut acc = d_inv[i].clone();
            row.push(acc.clone());
            let mut sign = 1.0;
            for j in (0..i).rev() {
                acc = &acc * &links[j];
                sign = -sign;
                row.push(acc.scale(C64::new(sign, 0.0)));
            }
            row.reverse();
            blocks.extend(row);
        }
        Ok(BlockLowerTriangular {
            block_size: self.block_size,
            block_count: count,
            blocks,
        })
    }
}

/// Square block matrix whose blocks above the diagonal are zero; only the
/// lower triangle is stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockLowerTriangular {
    block_size: usize,
    block_count: usize,
    // Row-major over the lower triangle: (0,0), (1,0), (1,1), (2,0), ...
    blocks: Vec<ComplexMatrix>,
}

impl BlockLowerTriangular {
    pub fn block_size(&self) -> usize {
        self.block_size
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    /// Stored block `(i, j)` for `i ≥ j`, `None` above the diagonal.
    pub fn lower_block(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        assert!(i < self.block_count && j < self.block_count, "block index out of range");
        (j <= i).then(|| &self.blocks[i * (i + 1) / 2 + j])
    }

    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        match self.lower_block(i, j) {
            Some(b) => b.clone(),
            None => ComplexMatrix::zeros(self.block_size, self.block_size),
        }
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.block_size;
        let mut m = ComplexMatrix::zeros(n * self.block_count, n * self.block_count);
        for i in 0..self.block_count {
            for j in 0..=i {
                m.set_block(i * n, j * n, &self.blocks[i * (i + 1) / 2 + j]);
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Tolerance;
    use alloc::vec;

    fn scalar(v: f64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[C64::new(v, 0.0)])
    }

    #[test]
    fn single_block_is_plain_inverse() {
        let d = ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(2.0, 1.0), C64::new(0.5, 0.0), C64::new(0.0, -1.0), C64::new(3.0, 0.0)],
        )
        .unwrap();
        let m = BlockBidiagonal::new(vec![d.clone()], vec![]).unwrap();
        let inv = m.inverse().unwrap();
        assert!(Tolerance::default().matrices_close(&inv.block(0, 0), &d.inverse("d").unwrap()));
    }

    #[test]
    fn scalar_two_block_example() {
        // M = [[2, 0], [8, 4]]  ->  M⁻¹ = [[0.5, 0], [-1, 0.25]]
        let m = BlockBidiagonal::new(vec![scalar(2.0), scalar(4.0)], vec![scalar(8.0)]).unwrap();
        let inv = m.inverse().unwrap().to_dense();
        let expected = ComplexMatrix::from_row_major(
            2,
            2,
            vec![C64::new(0.5, 0.0), C64::new(0.0, 0.0), C64::new(-1.0, 0.0), C64::new(0.25, 0.0)],
        )
        .unwrap();
        assert!(Tolerance::new(0.0, 1e-15).matrices_close(&inv, &expected));
    }

    #[test]
    fn upper_blocks_are_exact_zeros() {
        let m = BlockBidiagonal::new(
            vec![scalar(1.0), scalar(2.0), scalar(3.0)],
            vec![scalar(1.0), scalar(1.0)],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert!(inv.lower_block(0, 2).is_none());
        assert!(inv.block(0, 1).is_zero());
        assert!(inv.to_dense()[(0, 2)] == C64::new(0.0, 0.0));
    }

    #[test]
    fn singular_diagonal_block_is_rejected() {
        let err = BlockBidiagonal::new(vec![scalar(1.0), scalar(0.0)], vec![scalar(1.0)]).unwrap_err();
        assert!(matches!(err, Error::IllConditioned { .. }));
    }

    #[test]
    fn mismatched_subdiagonal_count_is_rejected() {
        assert!(BlockBidiagonal::new(vec![scalar(1.0), scalar(1.0)], vec![]).is_err());
        assert!(BlockBidiagonal::new(vec![], vec![]).is_err());
    }
}
