//! Synthesis of exact test instances: a seeded unitary colligation on
//! `C ⊕ (H1 ⊕ H2)` constrained to commute with the exchange of the two
//! summands realizes a symmetric graded function, and the associated model
//! map satisfies the model relation exactly because the colligation is
//! unitary.

use super::{GradedMap, NcModel};
use crate::error::{Error, Result};
use crate::linfrac::{self, BlockDims, Colligation};
use crate::mat::{self, CMatrix};
use crate::ncfun::{in_biball, GradedPoint};
use num_complex::Complex64;
use std::sync::Arc;

/// Sampling layout for generated instances.
#[derive(Clone, Copy, Debug)]
pub struct SampleDesign {
    /// Base points drawn per level; the swap closure doubles them.
    pub base_per_level: usize,
    /// Held-out verification points per level.
    pub held_out_per_level: usize,
    /// Norm budget for drawn contractions.
    pub radius: f64,
}

impl Default for SampleDesign {
    fn default() -> Self {
        SampleDesign { base_per_level: 6, held_out_per_level: 4, radius: 0.8 }
    }
}

/// The realized symmetric function `phi(x) = F_u(1 ⊗ V)(x_P)` of a
/// swap-equivariant unitary colligation `V`.
#[derive(Clone)]
pub struct SymmetricColligationOracle {
    v: Colligation,
    p1: CMatrix,
    p2: CMatrix,
}

impl SymmetricColligationOracle {
    pub fn colligation(&self) -> &Colligation {
        &self.v
    }

    fn x_projected(&self, x: &GradedPoint) -> CMatrix {
        mat::kron(x.component(0), &self.p1).add(&mat::kron(x.component(1), &self.p2))
    }
}

impl GradedMap for SymmetricColligationOracle {
    fn eval(&self, x: &GradedPoint) -> Result<CMatrix> {
        if x.arity() != 2 {
            return Err(Error::NotTwoLetters(x.arity()));
        }
        if !in_biball(x) {
            return Err(Error::OutsideBiball { norm: x.max_norm()? });
        }
        linfrac::graded_f_upper(&self.v, x.level(), &self.x_projected(x))
    }
}

/// Orthonormal basis of `C ⊕ C^{2k}` adapted to the swap eigenspaces: the
/// scalar slot and the symmetric combinations span the +1 eigenspace, the
/// antisymmetric combinations the -1 eigenspace.
fn swap_adapted_basis(k_half: usize) -> CMatrix {
    let dim = 1 + 2 * k_half;
    let mut r = CMatrix::zeros(dim, dim);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    r[(0, 0)] = Complex64::new(1.0, 0.0);
    for i in 0..k_half {
        // Symmetric: (e_i + e_{k+i}) / sqrt 2 in column 1 + i.
        r[(1 + i, 1 + i)] = Complex64::new(s, 0.0);
        r[(1 + k_half + i, 1 + i)] = Complex64::new(s, 0.0);
        // Antisymmetric: (e_i - e_{k+i}) / sqrt 2 in column 1 + k + i.
        r[(1 + i, 1 + k_half + i)] = Complex64::new(s, 0.0);
        r[(1 + k_half + i, 1 + k_half + i)] = Complex64::new(-s, 0.0);
    }
    r
}

/// Draw a seeded unitary on `C ⊕ C^{2k}` commuting with `1 ⊕ swap`: block
/// diagonal in the swap-adapted basis, with independent Haar factors on the
/// two eigenspaces.
fn swap_equivariant_unitary(seed: u64, k_half: usize) -> CMatrix {
    let v_plus = mat::random_unitary(seed.wrapping_mul(2).wrapping_add(1), 1 + k_half);
    let v_minus = mat::random_unitary(seed.wrapping_mul(2).wrapping_add(2), k_half);
    let r = swap_adapted_basis(k_half);
    r.mul(&mat::direct_sum(&v_plus, &v_minus)).mul(&r.adjoint())
}

fn biball_point(seed: u64, n: usize, radius: f64) -> GradedPoint {
    GradedPoint::pair(
        mat::random_strict_contraction(seed, n, radius),
        mat::random_strict_contraction(seed.wrapping_add(1), n, radius),
    )
    .unwrap()
}

/// Generate a symmetric function with an exact model.
///
/// The function is `phi(x) = F_u(1 ⊗ V)(x_P)` for a seeded swap-equivariant
/// unitary colligation `V = [a B; C D]` on `C ⊕ C^{2 k_half}`; the model map
/// is `m(x) = (1 - (1_n ⊗ D) x_P)^{-1} (1_n ⊗ C)`, which satisfies the model
/// relation exactly by unitarity. Samples are swap-closed per level, with
/// extra held-out points.
pub fn gen_symmetric_colligation(
    seed: u64,
    k_half_dim: usize,
    levels: &[usize],
    design: &SampleDesign,
) -> Result<(SymmetricColligationOracle, NcModel)> {
    if k_half_dim == 0 {
        return Err(Error::Invalid("model half-dimension must be at least 1".into()));
    }
    let k = 2 * k_half_dim;
    let v_full = swap_equivariant_unitary(seed, k_half_dim);
    let v = Colligation::new(
        BlockDims { h1: 1, k1: 1, h2: k, k2: k },
        v_full.block(0, 0, 1, 1),
        v_full.block(0, 1, 1, k),
        v_full.block(1, 0, k, 1),
        v_full.block(1, 1, k, k),
    )?;

    let p1 = mat::direct_sum(&CMatrix::identity(k_half_dim), &CMatrix::zeros(k_half_dim, k_half_dim));
    let p2 = mat::direct_sum(&CMatrix::zeros(k_half_dim, k_half_dim), &CMatrix::identity(k_half_dim));

    let oracle = SymmetricColligationOracle { v: v.clone(), p1: p1.clone(), p2: p2.clone() };

    let c_block = v.p21.clone();
    let d_block = v.p22.clone();
    let (mp1, mp2) = (p1.clone(), p2.clone());
    let model_map = move |x: &GradedPoint| -> Result<CMatrix> {
        let n = x.level();
        let eye_n = CMatrix::identity(n);
        let x_p = mat::kron(x.component(0), &mp1).add(&mat::kron(x.component(1), &mp2));
        let pencil = CMatrix::identity(n * d_block.rows())
            .sub(&mat::kron(&eye_n, &d_block).mul(&x_p));
        let inv = mat::inverse(&pencil)?;
        Ok(inv.mul(&mat::kron(&eye_n, &c_block)))
    };

    let mut samples = Vec::new();
    let mut held_out = Vec::new();
    for (li, &level) in levels.iter().enumerate() {
        let level_seed = seed
            .wrapping_mul(1_000_003)
            .wrapping_add(10_000 * (li as u64 + 1));
        for b in 0..design.base_per_level {
            let x = biball_point(level_seed.wrapping_add(10 * b as u64), level, design.radius);
            samples.push(x.swap()?);
            samples.push(x);
        }
        for h in 0..design.held_out_per_level {
            held_out.push(biball_point(
                level_seed.wrapping_add(7_000).wrapping_add(10 * h as u64),
                level,
                design.radius,
            ));
        }
    }

    let model = NcModel {
        model_dim: k,
        p1,
        p2,
        m: Arc::new(model_map),
        samples,
        held_out,
    };
    model.validate_projections()?;
    Ok((oracle, model))
}
