//! Dense complex matrix kernel.
//!
//! Row-major storage, explicit dimensions, and the handful of operations the
//! rest of the crate is built on: arithmetic, block structure (direct sums and
//! Kronecker products), operator norms via a Jacobi SVD, inverses, and seeded
//! random generators.
//!
//! The Kronecker convention is fixed once for the whole crate:
//! `(A ⊗ B)[(i*rB + k), (j*cB + l)] = A[i,j] * B[k,l]`, i.e. the first factor
//! is the slow index. Every tensor-shaped identity in the crate relies on this
//! choice; under it the identification `(C^m ⊗ H) ⊕ (C^n ⊗ H) = C^(m+n) ⊗ H`
//! is index-preserving.

pub(crate) mod decomp;
mod random;
mod serde_impl;

pub use decomp::{lstsq, orthonormal_complement, qr, singular_values, svd, LstsqSolution, Svd};
pub use random::{random_gaussian, random_strict_contraction, random_unitary, seeded_rng};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::fmt;

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Build from row-major data. Panics if `data.len() != rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        assert_eq!(
            data.len(),
            rows * cols,
            "CMatrix::new: data length {} does not match {}x{}",
            data.len(),
            rows,
            cols
        );
        CMatrix { rows, cols, data }
    }

    /// Build from row-major data, checking shape and finiteness.
    pub fn try_new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dim(format!(
                "data length {} does not match {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        let m = CMatrix { rows, cols, data };
        m.check_finite()?;
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// 1x1 matrix holding a single scalar.
    pub fn scalar(z: Complex64) -> Self {
        CMatrix::new(1, 1, vec![z])
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Square diagonal matrix from complex entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    /// Square diagonal matrix from real entries.
    pub fn diag_re(entries: &[f64]) -> Self {
        CMatrix::diag(&entries.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<()> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let z = self[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "add: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        CMatrix::new(self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "sub: shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        CMatrix::new(self.rows, self.cols, data)
    }

    pub fn neg(&self) -> CMatrix {
        let data = self.data.iter().map(|a| -a).collect();
        CMatrix::new(self.rows, self.cols, data)
    }

    pub fn scale(&self, z: Complex64) -> CMatrix {
        let data = self.data.iter().map(|a| a * z).collect();
        CMatrix::new(self.rows, self.cols, data)
    }

    pub fn scale_re(&self, x: f64) -> CMatrix {
        self.scale(Complex64::new(x, 0.0))
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(
            self.cols, other.rows,
            "mul: inner dimensions {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = CMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let lhs = i * other.cols;
                let rhs = k * other.cols;
                for j in 0..other.cols {
                    out.data[lhs + j] += a * other.data[rhs + j];
                }
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// `self^H * other` without forming the adjoint.
    pub fn adjoint_mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.rows, other.rows, "adjoint_mul: row mismatch");
        let mut out = CMatrix::zeros(self.cols, other.cols);
        for k in 0..self.rows {
            for i in 0..self.cols {
                let a = self[(k, i)].conj();
                let lhs = i * other.cols;
                let rhs = k * other.cols;
                for j in 0..other.cols {
                    out.data[lhs + j] += a * other.data[rhs + j];
                }
            }
        }
        out
    }

    /// Gram matrix `self^H * self`.
    pub fn gram(&self) -> CMatrix {
        self.adjoint_mul(self)
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace: matrix not square");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Copy a rectangular block, rows `r0..r0+nr`, cols `c0..c0+nc`.
    pub fn block(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> CMatrix {
        assert!(r0 + nr <= self.rows && c0 + nc <= self.cols, "block: out of range");
        CMatrix::from_fn(nr, nc, |i, j| self[(r0 + i, c0 + j)])
    }

    /// Overwrite a rectangular block starting at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, b: &CMatrix) {
        assert!(r0 + b.rows <= self.rows && c0 + b.cols <= self.cols, "set_block: out of range");
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Assemble a 2x2 block matrix `[a b; c d]` with conformal shapes.
    pub fn from_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> CMatrix {
        assert_eq!(a.rows, b.rows, "from_blocks: top row mismatch");
        assert_eq!(c.rows, d.rows, "from_blocks: bottom row mismatch");
        assert_eq!(a.cols, c.cols, "from_blocks: left col mismatch");
        assert_eq!(b.cols, d.cols, "from_blocks: right col mismatch");
        let mut m = CMatrix::zeros(a.rows + c.rows, a.cols + b.cols);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols, b);
        m.set_block(a.rows, 0, c);
        m.set_block(a.rows, a.cols, d);
        m
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows.min(12) {
            write!(f, "  ")?;
            for j in 0..self.cols.min(12) {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Block-diagonal direct sum `diag(A, B)`; off-diagonal blocks exactly zero.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut m = CMatrix::zeros(a.rows + b.rows, a.cols + b.cols);
    m.set_block(0, 0, a);
    m.set_block(a.rows, a.cols, b);
    m
}

/// Kronecker product in the crate-wide convention
/// `(A ⊗ B)[(i*rB + k), (j*cB + l)] = A[i,j] * B[k,l]`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            let z = a[(i, j)];
            if z.re == 0.0 && z.im == 0.0 {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = z * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Largest singular value. Errors on non-finite entries.
pub fn op_norm(a: &CMatrix) -> Result<f64> {
    a.check_finite()?;
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(decomp::singular_values(a).first().copied().unwrap_or(0.0))
}

/// Relative threshold below which a matrix counts as singular.
pub const SINGULARITY_THRESHOLD: f64 = 1e-12;

/// Matrix inverse via SVD. Errors when the smallest singular value is below
/// `1e-12` times the largest.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Dim(format!("inverse of non-square {}x{}", a.rows, a.cols)));
    }
    a.check_finite()?;
    if a.rows == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    let svd = decomp::svd(a);
    let smax = svd.sigma[0];
    let smin = *svd.sigma.last().unwrap();
    let threshold = SINGULARITY_THRESHOLD * smax;
    if smin <= threshold || smax == 0.0 {
        return Err(Error::NearSingular {
            sigma_min: smin,
            threshold,
        });
    }
    // A^{-1} = V Σ^{-1} U^H
    let n = a.rows;
    let mut vsinv = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            vsinv[(i, j)] = svd.v[(i, j)] / svd.sigma[j];
        }
    }
    Ok(vsinv.mul(&svd.u.adjoint()))
}

/// Determinant via LU with partial pivoting.
pub fn det(a: &CMatrix) -> Complex64 {
    assert!(a.is_square(), "det: matrix not square");
    decomp::det_lu(a)
}

#[cfg(test)]
mod tests;
