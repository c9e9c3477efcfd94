//! Dense complex matrices and LU factorization.
//!
//! Storage is row-major. The sizes handled here are small to moderate
//! (at most a few thousand rows), so everything is plain `Vec` backed and
//! all algorithms are the textbook dense ones.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::Zero;

use crate::{Error, Result};

pub type C64 = Complex64;

/// Reciprocal condition estimates below this value are treated as singular.
pub const RCOND_THRESHOLD: f64 = 1e-12;

/// Absolute/relative tolerance pair used for every approximate comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rel: 1e-10,
            abs: 1e-12,
        }
    }
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    pub fn scalars_close(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.abs + self.rel * a.norm().max(b.norm())
    }

    pub fn reals_close(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.abs + self.rel * a.abs().max(b.abs())
    }

    /// Frobenius-norm comparison of two equally shaped matrices.
    pub fn matrices_close(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> bool {
        if a.shape() != b.shape() {
            return false;
        }
        let diff = a.frobenius_distance(b);
        diff <= self.abs + self.rel * a.frobenius_norm().max(b.frobenius_norm())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, C64::new(1.0, 0.0))
    }

    pub fn scaled_identity(n: usize, value: C64) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = value;
        }
        m
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "row-major data",
                expected: (rows * cols, 1),
                found: (data.len(), 1),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn row_vector(entries: &[C64]) -> Self {
        Self {
            rows: 1,
            cols: entries.len(),
            data: entries.to_vec(),
        }
    }

    pub fn column_vector(entries: &[C64]) -> Self {
        Self {
            rows: entries.len(),
            cols: 1,
            data: entries.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entries in row-major order.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| x * factor).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Copies the `(rows, cols)` sized block whose top-left entry is `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of range");
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Self) {
        assert!(
            r0 + block.rows <= self.rows && c0 + block.cols <= self.cols,
            "block out of range"
        );
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(r0 + i, c0 + j)] = block[(i, j)];
            }
        }
    }

    pub fn ensure_shape(&self, what: &'static str, rows: usize, cols: usize) -> Result<()> {
        if self.shape() == (rows, cols) {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                what,
                expected: (rows, cols),
                found: self.shape(),
            })
        }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                what: "matrix product",
                expected: (self.cols, rhs.cols),
                found: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(rhs.row(k)) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn lu(&self) -> Result<Lu> {
        Lu::factor(self)
    }

    /// Inverse via LU; fails when the reciprocal condition estimate is below
    /// [`RCOND_THRESHOLD`].
    pub fn inverse(&self, what: &'static str) -> Result<Self> {
        self.lu()?.checked(what)?.inverse()
    }

    /// LU inverse followed by one Newton step `X ← X + X (I - A X)`.
    ///
    /// The plain LU inverse of a matrix with condition number `κ` carries a
    /// relative error of order `κ·ε`; the correction step brings it back to
    /// roughly `ε` for `κ` well below `1/ε`.
    pub fn inverse_refined(&self, what: &'static str) -> Result<Self> {
        let x = self.inverse(what)?;
        let residual = &Self::identity(self.rows) - &(self * &x);
        Ok(&x + &(&x * &residual))
    }

    /// Solves `self * x = b` for a single right-hand side.
    pub fn solve(&self, b: &[C64], what: &'static str) -> Result<Vec<C64>> {
        self.lu()?.checked(what)?.solve(b)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.try_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference dimension mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale(C64::new(-1.0, 0.0))
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    // L (unit, strictly lower part) and U packed together, row-major.
    factors: Vec<C64>,
    // Row i of P·A is row perm[i] of A.
    perm: Vec<usize>,
    norm1: f64,
    has_zero_pivot: bool,
}

impl Lu {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                what: "LU factorization (square matrix required)",
                expected: (a.rows, a.rows),
                found: a.shape(),
            });
        }
        let n = a.rows;
        let mut f = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut has_zero_pivot = false;

        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, f[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 || !pmax.is_finite() {
                has_zero_pivot = true;
                continue;
            }
            if p != k {
                for j in 0..n {
                    f.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = f[k * n + k];
            for i in k + 1..n {
                let l = f[i * n + k] / pivot;
                f[i * n + k] = l;
                if l.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = f[k * n + j];
                    f[i * n + j] -= l * u;
                }
            }
        }

        Ok(Self {
            n,
            factors: f,
            perm,
            norm1: a.norm1(),
            has_zero_pivot,
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Returns `self` if the reciprocal condition estimate clears
    /// [`RCOND_THRESHOLD`].
    pub fn checked(self, what: &'static str) -> Result<Self> {
        let rcond = self.rcond();
        if rcond < RCOND_THRESHOLD || rcond.is_nan() {
            Err(Error::IllConditioned { what, rcond })
        } else {
            Ok(self)
        }
    }

    fn at(&self, i: usize, j: usize) -> C64 {
        self.factors[i * self.n + j]
    }

    fn solve_unchecked(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.at(i, j) * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.at(i, j) * x[j];
            }
            x[i] = s / self.at(i, i);
        }
        x
    }

    // Solves A^H x = b using A^H = U^H L^H P.
    fn solve_adjoint_unchecked(&self, b: &[C64]) -> Vec<C64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let mut s = y[i];
            for j in 0..i {
                s -= self.at(j, i).conj() * y[j];
            }
            y[i] = s / self.at(i, i).conj();
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for j in i + 1..n {
                s -= self.at(j, i).conj() * y[j];
            }
            y[i] = s;
        }
        let mut x = vec![C64::zero(); n];
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = y[i];
        }
        x
    }

    pub fn solve(&self, b: &[C64]) -> Result<Vec<C64>> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                what: "LU solve right-hand side",
                expected: (self.n, 1),
                found: (b.len(), 1),
            });
        }
        if self.has_zero_pivot {
            return Err(Error::IllConditioned {
                what: "LU solve",
                rcond: 0.0,
            });
        }
        Ok(self.solve_unchecked(b))
    }

    pub fn inverse(&self) -> Result<ComplexMatrix> {
        let n = self.n;
        let mut inv = ComplexMatrix::zeros(n, n);
        let mut e = vec![C64::zero(); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            let col = self.solve(&e)?;
            e[j] = C64::zero();
            for (i, v) in col.into_iter().enumerate() {
                inv[(i, j)] = v;
            }
        }
        Ok(inv)
    }

    /// Reciprocal 1-norm condition number estimate (Hager/Higham estimator
    /// for `‖A⁻¹‖₁`). Returns 0 for exactly singular factors.
    pub fn rcond(&self) -> f64 {
        let n = self.n;
        if n == 0 {
            return 1.0;
        }
        if self.has_zero_pivot || self.norm1 == 0.0 {
            return 0.0;
        }
        let one = C64::new(1.0, 0.0);
        let mut x = vec![C64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0_f64;
        let mut last_j = usize::MAX;
        for iter in 0..5 {
            let y = self.solve_unchecked(&x);
            estimate = estimate.max(y.iter().map(|v| v.norm()).sum());
            let xi: Vec<C64> = y
                .iter()
                .map(|v| {
                    let m = v.norm();
                    if m == 0.0 {
                        one
                    } else {
                        v / m
                    }
                })
                .collect();
            let z = self.solve_adjoint_unchecked(&xi);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold((0, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if (iter > 0 && zmax <= ztx) || j == last_j {
                break;
            }
            last_j = j;
            x = vec![C64::zero(); n];
            x[j] = one;
        }
        // Alternating test vector guards against the estimator stalling.
        let alt: Vec<C64> = (0..n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                let ramp = if n > 1 { i as f64 / (n - 1) as f64 } else { 0.0 };
                C64::new(sign * (1.0 + ramp), 0.0)
            })
            .collect();
        let alt_est =
            2.0 * self.solve_unchecked(&alt).iter().map(|v| v.norm()).sum::<f64>() / (3.0 * n as f64);
        estimate = estimate.max(alt_est);
        if !estimate.is_finite() {
            return 0.0;
        }
        1.0 / (self.norm1 * estimate)
    }
}

/// `Σ aᵢ·bᵢ` (no conjugation).
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn solve_small_system() {
        let a = ComplexMatrix::from_row_major(2, 2, vec![c(2.0, 0.0), c(1.0, 1.0), c(0.0, -1.0), c(3.0, 0.0)])
            .unwrap();
        let x = [c(1.0, 2.0), c(-1.0, 0.5)];
        let b = a.mul_vec(&x);
        let got = a.solve(&b, "test").unwrap();
        let tol = Tolerance::default();
        for (g, e) in got.iter().zip(&x) {
            assert!(tol.scalars_close(*g, *e), "{g} vs {e}");
        }
    }

    #[test]
    fn inverse_times_matrix_is_identity() {
        let a = ComplexMatrix::from_fn(5, 5, |i, j| {
            c((i * 7 + j * 3) as f64 % 5.0 - 2.0, ((i + 2 * j) % 3) as f64) + if i == j { c(6.0, 0.0) } else { C64::zero() }
        });
        let inv = a.inverse("test").unwrap();
        let prod = &a * &inv;
        assert!(Tolerance::default().matrices_close(&prod, &ComplexMatrix::identity(5)));
    }

    #[test]
    fn adjoint_solve_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(4, 4, |i, j| c((i as f64 - j as f64).sin() + 2.0 * (i == j) as u8 as f64, (i * j) as f64 * 0.3));
        let lu = a.lu().unwrap();
        let b = [c(1.0, 0.0), c(0.0, 1.0), c(-2.0, 0.5), c(0.25, 0.25)];
        let x = lu.solve_adjoint_unchecked(&b);
        let back = a.adjoint().mul_vec(&x);
        for (g, e) in back.iter().zip(&b) {
            assert!((g - e).norm() < 1e-12);
        }
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!(matches!(a.inverse("m"), Err(Error::IllConditioned { what: "m", .. })));
    }

    #[test]
    fn near_singular_matrix_is_rejected() {
        let a = ComplexMatrix::from_row_major(2, 2, vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0 + 1e-15, 0.0)])
            .unwrap();
        assert!(a.lu().unwrap().rcond() < RCOND_THRESHOLD);
        assert!(a.inverse("m").is_err());
    }

    #[test]
    fn rcond_of_identity_and_diagonal() {
        let i = ComplexMatrix::identity(6);
        assert!((i.lu().unwrap().rcond() - 1.0).abs() < 1e-15);
        let d = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(1e-3, 0.0)]);
        assert!((d.lu().unwrap().rcond() - 1e-3).abs() < 1e-15);
    }

    #[test]
    fn tolerance_uses_relative_and_absolute_parts() {
        let tol = Tolerance::default();
        assert!(tol.scalars_close(c(1e6, 0.0), c(1e6 + 1e-5, 0.0)));
        assert!(!tol.scalars_close(c(1.0, 0.0), c(1.0 + 1e-9, 0.0)));
        assert!(tol.scalars_close(C64::zero(), c(1e-13, 0.0)));
    }

    #[test]
    fn blocks_round_trip() {
        let a = ComplexMatrix::from_fn(4, 6, |i, j| c(i as f64, j as f64));
        let b = a.block(1, 2, 2, 3);
        assert_eq!(b[(0, 0)], c(1.0, 2.0));
        let mut z = ComplexMatrix::zeros(4, 6);
        z.set_block(1, 2, &b);
        assert_eq!(z[(2, 4)], a[(2, 4)]);
        assert_eq!(z[(0, 0)], C64::zero());
    }
}
