//! The symmetrization map on the biball.
//!
//! A pair of matrices `x = (x1, x2)` is split into `u = (x1 + x2)/2` and
//! `v = (x1 - x2)/2` and sent to the one-variable matrix power series
//! `(u, v^2, vuv, vu^2v, ...)`, whose generating function is the rational
//! expression `u + v z (1 - u z)^{-1} v`. Series are kept as finite
//! truncations with a certified geometric tail bound.

use crate::error::{Error, Result};
use crate::mat::{self, CMatrix};
use crate::ncfun::{in_biball, GradedPoint};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Truncated matrix power series with a certified bound on the sup-norm of
/// the discarded tail. Coefficient `j` is an `level x level` matrix.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscAlgElem {
    pub level: usize,
    pub coeffs: Vec<CMatrix>,
    pub tail_bound: f64,
}

impl DiscAlgElem {
    pub fn new(level: usize, coeffs: Vec<CMatrix>, tail_bound: f64) -> Result<Self> {
        if level == 0 {
            return Err(Error::Invalid("series level must be at least 1".into()));
        }
        for (j, c) in coeffs.iter().enumerate() {
            if c.rows() != level || c.cols() != level {
                return Err(Error::Dim(format!(
                    "coefficient {j} is {}x{}, expected {level}x{level}",
                    c.rows(),
                    c.cols()
                )));
            }
            c.check_finite()?;
        }
        if !tail_bound.is_finite() || tail_bound < 0.0 {
            return Err(Error::Invalid(format!("tail bound {tail_bound} must be finite and >= 0")));
        }
        Ok(DiscAlgElem { level, coeffs, tail_bound })
    }

    /// Constant series.
    pub fn constant(c: CMatrix) -> Result<Self> {
        let level = c.rows();
        DiscAlgElem::new(level, vec![c], 0.0)
    }

    /// Scalar-level series from complex coefficients, zero tail.
    pub fn scalar_series(coeffs: &[Complex64]) -> Self {
        DiscAlgElem::new(1, coeffs.iter().map(|&z| CMatrix::scalar(z)).collect(), 0.0).unwrap()
    }

    /// Number of stored coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, j: usize) -> CMatrix {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| CMatrix::zeros(self.level, self.level))
    }

    /// Evaluate the truncated series at a point of the closed disc.
    pub fn eval_at(&self, z: Complex64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.level, self.level);
        let mut zp = Complex64::new(1.0, 0.0);
        for c in &self.coeffs {
            acc = acc.add(&c.scale(zp));
            zp *= z;
        }
        acc
    }

    /// Coefficientwise direct sum; tails bound a block-diagonal remainder, so
    /// the combined tail is the max.
    pub fn direct_sum(&self, other: &DiscAlgElem) -> DiscAlgElem {
        let len = self.len().max(other.len());
        let coeffs = (0..len)
            .map(|j| mat::direct_sum(&self.coeff(j), &other.coeff(j)))
            .collect();
        DiscAlgElem::new(
            self.level + other.level,
            coeffs,
            self.tail_bound.max(other.tail_bound),
        )
        .unwrap()
    }

    /// Coefficientwise similarity `s^{-1} g s`. The tail bound is inflated by
    /// the condition number of `s`.
    pub fn conjugate(&self, s: &CMatrix) -> Result<DiscAlgElem> {
        let sinv = mat::inverse(s)?;
        let coeffs: Vec<CMatrix> = self.coeffs.iter().map(|c| sinv.mul(c).mul(s)).collect();
        let cond = mat::op_norm(s)? * mat::op_norm(&sinv)?;
        DiscAlgElem::new(self.level, coeffs, self.tail_bound * cond)
    }
}

/// The image of a biball point under the symmetrization map.
#[derive(Clone, Debug)]
pub struct SymPoint {
    pub u: CMatrix,
    pub v: CMatrix,
    pub series: DiscAlgElem,
}

/// Split a pair into its average and half-difference:
/// `u = (x1 + x2)/2`, `v = (x1 - x2)/2`; inverted by `x1 = u + v, x2 = u - v`.
pub fn uv(x: &GradedPoint) -> (CMatrix, CMatrix) {
    let x1 = x.component(0);
    let x2 = x.component(1);
    (x1.add(x2).scale_re(0.5), x1.sub(x2).scale_re(0.5))
}

/// Tail bound for a truncation with `n_coeffs` stored coefficients:
/// the discarded terms are `v u^{j-1} v` for `j >= n_coeffs`, summing to at
/// most `‖v‖^2 ‖u‖^(n_coeffs - 1) / (1 - ‖u‖)`.
fn geometric_tail(norm_u: f64, norm_v: f64, n_coeffs: usize) -> f64 {
    if norm_v == 0.0 {
        return 0.0;
    }
    norm_v * norm_v * norm_u.powi(n_coeffs as i32 - 1) / (1.0 - norm_u)
}

/// Smallest truncation length whose tail bound is at most 1e-12, capped at 512.
pub fn default_truncation(x: &GradedPoint) -> Result<usize> {
    let (u, v) = uv(x);
    let nu = mat::op_norm(&u)?;
    let nv = mat::op_norm(&v)?;
    if nu >= 1.0 {
        return Err(Error::OutsideBiball { norm: x.max_norm()? });
    }
    let mut n = 2usize;
    while n < 512 && geometric_tail(nu, nv, n) > 1e-12 {
        n += 1;
    }
    Ok(n)
}

/// Apply the symmetrization map, keeping `n_coeffs` series coefficients:
/// `(u, v^2, vuv, vu^2v, ...)`. Requires a biball point (the tail bound
/// diverges otherwise) and `n_coeffs >= 2`.
pub fn symmetrize(x: &GradedPoint, n_coeffs: usize) -> Result<SymPoint> {
    if !in_biball(x) {
        return Err(Error::OutsideBiball { norm: x.max_norm()? });
    }
    if n_coeffs < 2 {
        return Err(Error::Invalid("truncation length must be at least 2".into()));
    }
    let (u, v) = uv(x);
    let mut coeffs = Vec::with_capacity(n_coeffs);
    coeffs.push(u.clone());
    // v u^{j-1} v for j = 1, 2, ...: carry the running product v u^{j-1}.
    let mut left = v.clone();
    for _ in 1..n_coeffs {
        coeffs.push(left.mul(&v));
        left = left.mul(&u);
    }
    let tail = geometric_tail(mat::op_norm(&u)?, mat::op_norm(&v)?, n_coeffs);
    let series = DiscAlgElem::new(x.level(), coeffs, tail)?;
    Ok(SymPoint { u, v, series })
}

/// Symmetrize with the default truncation (tail at most 1e-12, capped at 512).
pub fn symmetrize_default(x: &GradedPoint) -> Result<SymPoint> {
    symmetrize(x, default_truncation(x)?)
}

/// Closed form of the symmetrized generating function at `z` in the closed
/// disc: `u + v z (1 - u z)^{-1} v`.
pub fn generating_value(x: &GradedPoint, z: Complex64) -> Result<CMatrix> {
    if !in_biball(x) {
        return Err(Error::OutsideBiball { norm: x.max_norm()? });
    }
    let (u, v) = uv(x);
    let n = x.level();
    let pencil = CMatrix::identity(n).sub(&u.scale(z));
    let inv = mat::inverse(&pencil)?;
    Ok(u.add(&v.scale(z).mul(&inv).mul(&v)))
}

/// The 2x2 block matrix `[u v; v u]`, whose operator norm equals
/// `max(‖x1‖, ‖x2‖)`: it is the conjugate of `diag(x1, x2)` by
/// [`pair_block_unitary`].
pub fn pair_block(x: &GradedPoint) -> CMatrix {
    let (u, v) = uv(x);
    CMatrix::from_blocks(&u, &v, &v, &u)
}

/// The self-adjoint unitary `W = (1/sqrt 2) [I I; I -I]` with
/// `pair_block(x) = W diag(x1, x2) W`.
pub fn pair_block_unitary(n: usize) -> CMatrix {
    let i = CMatrix::identity(n).scale_re(std::f64::consts::FRAC_1_SQRT_2);
    CMatrix::from_blocks(&i, &i, &i, &i.neg())
}

/// Grid estimate of the sup-norm over the closed disc: the maximum of
/// `‖g(z)‖` over equispaced boundary points, plus the certified tail bound.
/// The grid maximum under-estimates the true boundary sup while the tail
/// bound over-corrects, and the result is exact for constants.
pub fn sup_norm(g: &DiscAlgElem, grid_size: usize) -> Result<f64> {
    if grid_size < 64 {
        return Err(Error::Invalid(format!("grid size {grid_size} must be at least 64")));
    }
    let mut best = 0.0f64;
    for m in 0..grid_size {
        let theta = 2.0 * std::f64::consts::PI * (m as f64) / (grid_size as f64);
        let z = Complex64::new(theta.cos(), theta.sin());
        best = best.max(mat::op_norm(&g.eval_at(z))?);
    }
    Ok(best + g.tail_bound)
}

/// Default boundary grid for sup-norm estimates.
pub const SUP_NORM_GRID: usize = 256;
