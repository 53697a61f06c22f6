//! Linear fractional transformations and the Redheffer star product.
//!
//! A colligation is a 2x2 block operator matrix `p = [p11 p12; p21 p22]`
//! mapping `K1 ⊕ H2 -> H1 ⊕ K2`; its blocks parameterize the lower and upper
//! linear fractional maps and their graded (level-n) versions. The block
//! dimensions are stored explicitly because the graded maps need the
//! `H/K` splits as ambient data.

use crate::error::{Error, Result};
use crate::mat::{self, CMatrix, SINGULARITY_THRESHOLD};
use serde::{Deserialize, Serialize};

/// Block dimensions `(h1, k1, h2, k2)` of a colligation
/// `K1 ⊕ H2 -> H1 ⊕ K2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockDims {
    pub h1: usize,
    pub k1: usize,
    pub h2: usize,
    pub k2: usize,
}

/// 2x2 block operator matrix with declared block dimensions:
/// `p11: K1 -> H1`, `p12: H2 -> H1`, `p21: K1 -> K2`, `p22: H2 -> K2`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Colligation {
    pub dims: BlockDims,
    pub p11: CMatrix,
    pub p12: CMatrix,
    pub p21: CMatrix,
    pub p22: CMatrix,
}

impl Colligation {
    pub fn new(dims: BlockDims, p11: CMatrix, p12: CMatrix, p21: CMatrix, p22: CMatrix) -> Result<Self> {
        let BlockDims { h1, k1, h2, k2 } = dims;
        let shape_ok = p11.rows() == h1
            && p11.cols() == k1
            && p12.rows() == h1
            && p12.cols() == h2
            && p21.rows() == k2
            && p21.cols() == k1
            && p22.rows() == k2
            && p22.cols() == h2;
        if !shape_ok {
            return Err(Error::Dim(format!(
                "colligation blocks do not match dims ({h1},{k1},{h2},{k2})"
            )));
        }
        Ok(Colligation { dims, p11, p12, p21, p22 })
    }

    /// Split a square operator on `C^a ⊕ C^b` into a colligation with
    /// `h1 = k1 = a` and `h2 = k2 = b`.
    pub fn from_square(m: &CMatrix, a: usize) -> Result<Self> {
        if !m.is_square() || m.rows() < a {
            return Err(Error::Dim(format!(
                "cannot split {}x{} at block size {a}",
                m.rows(),
                m.cols()
            )));
        }
        let b = m.rows() - a;
        Colligation::new(
            BlockDims { h1: a, k1: a, h2: b, k2: b },
            m.block(0, 0, a, a),
            m.block(0, a, a, b),
            m.block(a, 0, b, a),
            m.block(a, a, b, b),
        )
    }

    /// The assembled `(h1 + k2) x (k1 + h2)` matrix.
    pub fn assemble(&self) -> CMatrix {
        CMatrix::from_blocks(&self.p11, &self.p12, &self.p21, &self.p22)
    }

    pub fn norm(&self) -> Result<f64> {
        mat::op_norm(&self.assemble())
    }

    /// True when the assembled matrix is a contraction up to 1e-12 slack.
    pub fn is_contraction(&self) -> Result<bool> {
        Ok(self.norm()? <= 1.0 + 1e-12)
    }
}

/// Invert `I - m`, reporting the named pencil on failure.
fn invert_pencil(m: &CMatrix, name: &'static str) -> Result<CMatrix> {
    let n = m.rows();
    let pencil = CMatrix::identity(n).sub(m);
    mat::inverse(&pencil).map_err(|e| match e {
        Error::NearSingular { sigma_min, .. } => Error::SingularPencil { name, sigma_min },
        other => other,
    })
}

/// Lower linear fractional transformation
/// `p22 + p21 X (1 - p11 X)^{-1} p12`, for `X: H1 -> K1`.
pub fn f_lower(p: &Colligation, x: &CMatrix) -> Result<CMatrix> {
    if x.rows() != p.dims.k1 || x.cols() != p.dims.h1 {
        return Err(Error::Dim(format!(
            "lower LFT argument {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            p.dims.k1,
            p.dims.h1
        )));
    }
    let inv = invert_pencil(&p.p11.mul(x), "1 - p11 X")?;
    Ok(p.p22.add(&p.p21.mul(x).mul(&inv).mul(&p.p12)))
}

/// Upper linear fractional transformation
/// `p11 + p12 X (1 - p22 X)^{-1} p21`, for `X: K2 -> H2`.
pub fn f_upper(p: &Colligation, x: &CMatrix) -> Result<CMatrix> {
    if x.rows() != p.dims.h2 || x.cols() != p.dims.k2 {
        return Err(Error::Dim(format!(
            "upper LFT argument {}x{}, expected {}x{}",
            x.rows(),
            x.cols(),
            p.dims.h2,
            p.dims.k2
        )));
    }
    let inv = invert_pencil(&p.p22.mul(x), "1 - p22 X")?;
    Ok(p.p11.add(&p.p12.mul(x).mul(&inv).mul(&p.p21)))
}

/// Graded upper linear fractional map at level `n`:
/// `1_n ⊗ p11 + (1_n ⊗ p12) X (1 - (1_n ⊗ p22) X)^{-1} (1_n ⊗ p21)`
/// for `X: C^n ⊗ K2 -> C^n ⊗ H2`.
pub fn graded_f_upper(p: &Colligation, n: usize, x: &CMatrix) -> Result<CMatrix> {
    if x.rows() != n * p.dims.h2 || x.cols() != n * p.dims.k2 {
        return Err(Error::Dim(format!(
            "graded upper LFT argument {}x{}, expected {}x{} at level {n}",
            x.rows(),
            x.cols(),
            n * p.dims.h2,
            n * p.dims.k2
        )));
    }
    let eye = CMatrix::identity(n);
    let p12 = mat::kron(&eye, &p.p12);
    let p21 = mat::kron(&eye, &p.p21);
    let p22 = mat::kron(&eye, &p.p22);
    let inv = invert_pencil(&p22.mul(x), "1 - (1 ⊗ p22) X")?;
    Ok(mat::kron(&eye, &p.p11).add(&p12.mul(x).mul(&inv).mul(&p21)))
}

/// Residual of the defect identity for the lower map: the norm gap between
/// `1 - F(X)^H F(X)` and its two-term positive decomposition
/// `p12^H (1 - X^H p11^H)^{-1} (1 - X^H X) (1 - p11 X)^{-1} p12
///  + [B; 1]^H (1 - p^H p) [B; 1]` with `B = X (1 - p11 X)^{-1} p12`.
pub fn realization_residual(p: &Colligation, x: &CMatrix) -> Result<f64> {
    let f = f_lower(p, x)?;
    let h2 = p.dims.h2;
    let lhs = CMatrix::identity(h2).sub(&f.adjoint_mul(&f));

    let inv = invert_pencil(&p.p11.mul(x), "1 - p11 X")?;
    let right = inv.mul(&p.p12); // (1 - p11 X)^{-1} p12 : H2 -> H1
    let defect_x = CMatrix::identity(x.cols()).sub(&x.adjoint_mul(x));
    let term1 = right.adjoint().mul(&defect_x).mul(&right);

    let b = x.mul(&right); // X (1 - p11 X)^{-1} p12 : H2 -> K1
    let assembled = p.assemble();
    let defect_p = CMatrix::identity(assembled.cols()).sub(&assembled.gram());
    let stacked = {
        let mut s = CMatrix::zeros(b.rows() + h2, h2);
        s.set_block(0, 0, &b);
        s.set_block(b.rows(), 0, &CMatrix::identity(h2));
        s
    };
    let term2 = stacked.adjoint().mul(&defect_p).mul(&stacked);

    let rhs = term1.add(&term2);
    mat::op_norm(&lhs.sub(&rhs))
}

/// Redheffer star product `b ⋆ a`: the colligation whose upper map is the
/// composition of the upper maps, `F_u(b ⋆ a) = F_u(b) ∘ F_u(a)`.
/// Requires `a`'s outer spaces to match `b`'s inner ones
/// (`h1(a) = h2(b)`, `k1(a) = k2(b)`).
pub fn redheffer(b: &Colligation, a: &Colligation) -> Result<Colligation> {
    if a.dims.h1 != b.dims.h2 || a.dims.k1 != b.dims.k2 {
        return Err(Error::Dim(format!(
            "redheffer: inner spaces mismatch (a: h1={}, k1={}; b: h2={}, k2={})",
            a.dims.h1, a.dims.k1, b.dims.h2, b.dims.k2
        )));
    }
    let inv_ab = invert_pencil(&a.p11.mul(&b.p22), "1 - a11 b22")?;
    let inv_ba = invert_pencil(&b.p22.mul(&a.p11), "1 - b22 a11")?;
    Colligation::new(
        BlockDims {
            h1: b.dims.h1,
            k1: b.dims.k1,
            h2: a.dims.h2,
            k2: a.dims.k2,
        },
        f_upper(b, &a.p11)?,
        b.p12.mul(&inv_ab).mul(&a.p12),
        a.p21.mul(&inv_ba).mul(&b.p21),
        f_lower(a, &b.p22)?,
    )
}

/// Shared singularity threshold for LFT pencils.
pub const PENCIL_THRESHOLD: f64 = SINGULARITY_THRESHOLD;
