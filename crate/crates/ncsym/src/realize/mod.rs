//! The realization pipeline: from a sampled model of a symmetric graded
//! function to a colligation-and-unitary pair whose linear fractional /
//! functional-calculus composite reproduces the function on and off the
//! fitting samples.
//!
//! Stages, in order: validate the model relation, split the model along the
//! two projections, average into the stacked maps `w` and `w~`, solve a
//! lurking isometry for the intertwining unitary `U`, form the resolvent sum
//! `A(x)`, solve a second lurking isometry for the colligation `T`, assemble
//! `p = T diag(1, -U)`, and verify the factorization on fit and held-out
//! points. Every stage identity is checked numerically and recorded.

mod gen;
mod pipeline;

pub use gen::{gen_symmetric_colligation, SampleDesign, SymmetricColligationOracle};
pub use pipeline::{
    run_pipeline, PipelineConfig, PipelineOutcome, PipelineReport, StageResidual, VerifyReport,
};

use crate::error::{Error, Result};
use crate::funcalc::{self, FejerPlan};
use crate::linfrac::{self, BlockDims, Colligation};
use crate::lurking::{self, IsometrySolution};
use crate::mat::{self, CMatrix};
use crate::ncfun::{in_biball, GradedPoint};
use crate::symmap::DiscAlgElem;
use num_complex::Complex64;
use std::sync::Arc;

/// A graded matrix map: level-`n` points to matrices whose shape is
/// determined by the level.
pub trait GradedMap: Send + Sync {
    fn eval(&self, x: &GradedPoint) -> Result<CMatrix>;
}

impl<F> GradedMap for F
where
    F: Fn(&GradedPoint) -> Result<CMatrix> + Send + Sync,
{
    fn eval(&self, x: &GradedPoint) -> Result<CMatrix> {
        self(x)
    }
}

/// Sampled model data for a symmetric graded function: an orthogonal
/// decomposition `P1 + P2 = 1` of a finite model space `K` and a graded map
/// `m(x): C^n -> C^n ⊗ K` satisfying the model relation
/// `1 - phi(y)^H phi(x) = m(y)^H (1 - x_P-pairing) m(x)`
/// on a swap-closed family of biball samples.
#[derive(Clone)]
pub struct NcModel {
    pub model_dim: usize,
    pub p1: CMatrix,
    pub p2: CMatrix,
    pub m: Arc<dyn GradedMap>,
    /// Swap-closed fitting samples.
    pub samples: Vec<GradedPoint>,
    /// Extra verification points, not used for fitting.
    pub held_out: Vec<GradedPoint>,
}

impl NcModel {
    /// Check the projection structure: `P1`, `P2` idempotent self-adjoint
    /// with `P1 + P2 = 1` within 1e-12.
    pub fn validate_projections(&self) -> Result<()> {
        let k = self.model_dim;
        for (name, p) in [("P1", &self.p1), ("P2", &self.p2)] {
            if p.rows() != k || p.cols() != k {
                return Err(Error::Dim(format!("{name} is {}x{}, expected {k}x{k}", p.rows(), p.cols())));
            }
            if mat::op_norm(&p.sub(&p.adjoint()))? > 1e-12 {
                return Err(Error::Invalid(format!("{name} is not self-adjoint")));
            }
            if mat::op_norm(&p.mul(p).sub(p))? > 1e-12 {
                return Err(Error::Invalid(format!("{name} is not idempotent")));
            }
        }
        let sum = self.p1.add(&self.p2);
        if mat::op_norm(&sum.sub(&CMatrix::identity(k)))? > 1e-12 {
            return Err(Error::Invalid("P1 + P2 != 1".into()));
        }
        Ok(())
    }

    /// `x_P = x1 ⊗ P1 + x2 ⊗ P2`, an operator on `C^n ⊗ K`.
    pub fn x_projected(&self, x: &GradedPoint) -> CMatrix {
        mat::kron(x.component(0), &self.p1).add(&mat::kron(x.component(1), &self.p2))
    }

    pub fn m_eval(&self, x: &GradedPoint) -> Result<CMatrix> {
        let out = self.m.eval(x)?;
        let n = x.level();
        if out.rows() != n * self.model_dim || out.cols() != n {
            return Err(Error::Contract(format!(
                "model map returned {}x{} at level {n}, expected {}x{n}",
                out.rows(),
                out.cols(),
                n * self.model_dim
            )));
        }
        Ok(out)
    }

    /// Compression onto the first summand: `(1_n ⊗ P1) m(x)`, kept in the
    /// ambient space.
    pub fn m1(&self, x: &GradedPoint) -> Result<CMatrix> {
        let n = x.level();
        Ok(mat::kron(&CMatrix::identity(n), &self.p1).mul(&self.m_eval(x)?))
    }

    pub fn m2(&self, x: &GradedPoint) -> Result<CMatrix> {
        let n = x.level();
        Ok(mat::kron(&CMatrix::identity(n), &self.p2).mul(&self.m_eval(x)?))
    }

    /// The averaged stacked map `w(x) = (m1(x) + m2(x~)) / sqrt 2` where `x~`
    /// is the swapped point; lands in the ambient `C^n ⊗ K`.
    pub fn w(&self, x: &GradedPoint) -> Result<CMatrix> {
        let xs = x.swap()?;
        Ok(self.m1(x)?.add(&self.m2(&xs)?).scale_re(std::f64::consts::FRAC_1_SQRT_2))
    }

    /// `w~(x) = w(x~)`.
    pub fn w_tilde(&self, x: &GradedPoint) -> Result<CMatrix> {
        self.w(&x.swap()?)
    }

    /// Verify that every fitting sample has its swapped partner in the set.
    pub fn require_swap_closed(&self) -> Result<()> {
        for (i, x) in self.samples.iter().enumerate() {
            let xs = x.swap()?;
            let found = self.samples.iter().any(|y| {
                y.level() == xs.level()
                    && y.component(0).sub(xs.component(0)).max_abs() <= 1e-14
                    && y.component(1).sub(xs.component(1)).max_abs() <= 1e-14
            });
            if !found {
                return Err(Error::MissingSwapPartner { index: i, level: x.level() });
            }
        }
        Ok(())
    }

    /// Double the model space with a zero block: the new map is `0 ⊕ m(x)`
    /// on `K ⊕ K`, the pad is absorbed into the first projection so the two
    /// still sum to the identity, and the model relation is untouched. This
    /// enlarges the redundant subspaces without changing any residual.
    pub fn pad(&self) -> NcModel {
        let k = self.model_dim;
        let p1 = mat::direct_sum(&CMatrix::identity(k), &self.p1);
        let p2 = mat::direct_sum(&CMatrix::zeros(k, k), &self.p2);
        let inner = self.m.clone();
        let padded = move |x: &GradedPoint| -> Result<CMatrix> {
            let mx = inner.eval(x)?;
            let n = x.level();
            stack_tensor_blocks(&[&CMatrix::zeros(n * k, n), &mx], &[k, k], n)
        };
        NcModel {
            model_dim: 2 * k,
            p1,
            p2,
            m: Arc::new(padded),
            samples: self.samples.clone(),
            held_out: self.held_out.clone(),
        }
    }
}

/// Interleave operators `f_i: C^n -> C^n ⊗ V_i` into one operator
/// `C^n -> C^n ⊗ (V_1 ⊕ V_2 ⊕ ...)` under the slow-first tensor convention.
pub fn stack_tensor_blocks(blocks: &[&CMatrix], dims: &[usize], n: usize) -> Result<CMatrix> {
    if blocks.len() != dims.len() {
        return Err(Error::Dim("stack: blocks and dims length mismatch".into()));
    }
    let total: usize = dims.iter().sum();
    let mut out = CMatrix::zeros(n * total, n);
    let mut offset = 0;
    for (b, &d) in blocks.iter().zip(dims) {
        if b.rows() != n * d || b.cols() != n {
            return Err(Error::Dim(format!(
                "stack: block is {}x{}, expected {}x{n}",
                b.rows(),
                b.cols(),
                n * d
            )));
        }
        for i in 0..n {
            for t in 0..d {
                for j in 0..n {
                    out[(i * total + offset + t, j)] = b[(i * d + t, j)];
                }
            }
        }
        offset += d;
    }
    Ok(out)
}

/// Prepend a scalar block: `[f0; f1]` as a map `C^n -> C^n ⊗ (C ⊕ K)`.
pub fn stack_scalar_block(f0: &CMatrix, f1: &CMatrix, k_dim: usize, n: usize) -> Result<CMatrix> {
    stack_tensor_blocks(&[f0, f1], &[1, k_dim], n)
}

/// Maximum residual of the model relation over same-level sample pairs.
pub struct ModelResidual {
    pub max: f64,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
}

pub fn model_residual(model: &NcModel, phi: &dyn GradedMap) -> Result<ModelResidual> {
    let phis: Vec<CMatrix> = model.samples.iter().map(|x| phi.eval(x)).collect::<Result<_>>()?;
    let ms: Vec<CMatrix> = model.samples.iter().map(|x| model.m_eval(x)).collect::<Result<_>>()?;
    let xps: Vec<CMatrix> = model.samples.iter().map(|x| model.x_projected(x)).collect();

    let mut max = 0.0f64;
    let mut checked = 0;
    let mut skipped = 0;
    for (ix, x) in model.samples.iter().enumerate() {
        for (iy, y) in model.samples.iter().enumerate() {
            if x.level() != y.level() {
                skipped += 1;
                continue;
            }
            checked += 1;
            let n = x.level();
            let lhs = CMatrix::identity(n).sub(&phis[iy].adjoint_mul(&phis[ix]));
            let pencil = CMatrix::identity(n * model.model_dim).sub(&xps[iy].adjoint_mul(&xps[ix]));
            let rhs = ms[iy].adjoint().mul(&pencil).mul(&ms[ix]);
            max = max.max(mat::op_norm(&lhs.sub(&rhs))?);
        }
    }
    Ok(ModelResidual { max, pairs_checked: checked, pairs_skipped: skipped })
}

/// Residual of the split two-term decomposition
/// `1 - phi(y)^H phi(x) = Σ_i m_i(y)^H ((1 - y_i^H x_i) ⊗ 1) m_i(x)`.
pub fn split_relation_residual(model: &NcModel, phi: &dyn GradedMap) -> Result<f64> {
    let phis: Vec<CMatrix> = model.samples.iter().map(|x| phi.eval(x)).collect::<Result<_>>()?;
    let m1s: Vec<CMatrix> = model.samples.iter().map(|x| model.m1(x)).collect::<Result<_>>()?;
    let m2s: Vec<CMatrix> = model.samples.iter().map(|x| model.m2(x)).collect::<Result<_>>()?;

    let mut max = 0.0f64;
    let eye_k = CMatrix::identity(model.model_dim);
    for (ix, x) in model.samples.iter().enumerate() {
        for (iy, y) in model.samples.iter().enumerate() {
            if x.level() != y.level() {
                continue;
            }
            let n = x.level();
            let lhs = CMatrix::identity(n).sub(&phis[iy].adjoint_mul(&phis[ix]));
            let mut rhs = CMatrix::zeros(n, n);
            for i in 0..2 {
                let (mi_x, mi_y) = if i == 0 {
                    (&m1s[ix], &m1s[iy])
                } else {
                    (&m2s[ix], &m2s[iy])
                };
                let defect = CMatrix::identity(n)
                    .sub(&y.component(i).adjoint_mul(x.component(i)));
                rhs = rhs.add(&mi_y.adjoint().mul(&mat::kron(&defect, &eye_k)).mul(mi_x));
            }
            max = max.max(mat::op_norm(&lhs.sub(&rhs))?);
        }
    }
    Ok(max)
}

/// Residual of the averaged two-block relation satisfied by `w` and `w~`:
/// `1 - phi(y)^H phi(x) = w(y)^H ((1 - y1^H x1) ⊗ 1) w(x)
///  + w~(y)^H ((1 - y2^H x2) ⊗ 1) w~(x)`.
pub fn averaged_relation_residual(model: &NcModel, phi: &dyn GradedMap) -> Result<f64> {
    let phis: Vec<CMatrix> = model.samples.iter().map(|x| phi.eval(x)).collect::<Result<_>>()?;
    let ws: Vec<CMatrix> = model.samples.iter().map(|x| model.w(x)).collect::<Result<_>>()?;
    let wts: Vec<CMatrix> = model.samples.iter().map(|x| model.w_tilde(x)).collect::<Result<_>>()?;

    let mut max = 0.0f64;
    let eye_k = CMatrix::identity(model.model_dim);
    for (ix, x) in model.samples.iter().enumerate() {
        for (iy, y) in model.samples.iter().enumerate() {
            if x.level() != y.level() {
                continue;
            }
            let n = x.level();
            let lhs = CMatrix::identity(n).sub(&phis[iy].adjoint_mul(&phis[ix]));
            let d1 = CMatrix::identity(n).sub(&y.component(0).adjoint_mul(x.component(0)));
            let d2 = CMatrix::identity(n).sub(&y.component(1).adjoint_mul(x.component(1)));
            let rhs = ws[iy]
                .adjoint()
                .mul(&mat::kron(&d1, &eye_k))
                .mul(&ws[ix])
                .add(&wts[iy].adjoint().mul(&mat::kron(&d2, &eye_k)).mul(&wts[ix]));
            max = max.max(mat::op_norm(&lhs.sub(&rhs))?);
        }
    }
    Ok(max)
}

/// Outcome of the intertwiner stage.
pub struct UnitaryStage {
    pub solution: IsometrySolution,
    /// Max residual of `(1 - x1 ⊗ U) w(x) = (1 - x2 ⊗ U) w~(x)` over samples.
    pub residual: f64,
    /// Set when the collected families had (numerically) no span at all.
    pub degenerate_span: bool,
}

/// Solve for the intertwining operator `U` with
/// `w - w~ = (1_n ⊗ U)((x1 ⊗ 1) w - (x2 ⊗ 1) w~)`, padded to a unitary.
pub fn solve_unitary(model: &NcModel, pad_to_unitary: bool) -> Result<UnitaryStage> {
    let k = model.model_dim;
    let p_side = |x: &GradedPoint| -> Result<CMatrix> {
        let eye_k = CMatrix::identity(k);
        let lhs = mat::kron(x.component(0), &eye_k).mul(&model.w(x)?);
        let rhs = mat::kron(x.component(1), &eye_k).mul(&model.w_tilde(x)?);
        Ok(lhs.sub(&rhs))
    };
    let q_side = |x: &GradedPoint| -> Result<CMatrix> { Ok(model.w(x)?.sub(&model.w_tilde(x)?)) };

    let p_fam = lurking::collect_vectors(&p_side, &model.samples, k)?;
    let q_fam = lurking::collect_vectors(&q_side, &model.samples, k)?;
    let solution = lurking::solve(&p_fam, &q_fam, pad_to_unitary)
        .map_err(|e| e.at_stage("intertwine"))?;

    let mut residual = 0.0f64;
    for x in &model.samples {
        let n = x.level();
        let eye = CMatrix::identity(n * k);
        let u1 = mat::kron(x.component(0), &solution.j);
        let u2 = mat::kron(x.component(1), &solution.j);
        let lhs = eye.sub(&u1).mul(&model.w(x)?);
        let rhs = eye.sub(&u2).mul(&model.w_tilde(x)?);
        residual = residual.max(mat::op_norm(&lhs.sub(&rhs))?);
    }
    let degenerate_span = solution.rank == 0;
    Ok(UnitaryStage { solution, residual, degenerate_span })
}

/// `nu(x) = (1 - x1 ⊗ U) w(x)`, the symmetric kernel vector of the model.
pub fn nu(model: &NcModel, u: &CMatrix, x: &GradedPoint) -> Result<CMatrix> {
    let n = x.level();
    let pencil = CMatrix::identity(n * model.model_dim).sub(&mat::kron(x.component(0), u));
    Ok(pencil.mul(&model.w(x)?))
}

/// Max swap-asymmetry of `nu` over the samples.
pub fn nu_symmetry_residual(model: &NcModel, u: &CMatrix) -> Result<f64> {
    let mut max = 0.0f64;
    for x in &model.samples {
        let lhs = nu(model, u, x)?;
        let rhs = nu(model, u, &x.swap()?)?;
        max = max.max(mat::op_norm(&lhs.sub(&rhs))?);
    }
    Ok(max)
}

/// The resolvent sum `A(x) = (1 - x1 ⊗ U)^{-1} + (1 - x2 ⊗ U)^{-1} - 1`.
pub fn resolvent_sum(x: &GradedPoint, u: &CMatrix) -> Result<CMatrix> {
    if !in_biball(x) {
        return Err(Error::OutsideBiball { norm: x.max_norm()? });
    }
    let n = x.level();
    let dim = n * u.rows();
    let eye = CMatrix::identity(dim);
    let inv1 = mat::inverse(&eye.sub(&mat::kron(x.component(0), u)))
        .map_err(|e| name_pencil(e, "1 - x1 ⊗ U"))?;
    let inv2 = mat::inverse(&eye.sub(&mat::kron(x.component(1), u)))
        .map_err(|e| name_pencil(e, "1 - x2 ⊗ U"))?;
    Ok(inv1.add(&inv2).sub(&eye))
}

fn name_pencil(e: Error, name: &'static str) -> Error {
    match e {
        Error::NearSingular { sigma_min, .. } => Error::SingularPencil { name, sigma_min },
        other => other,
    }
}

/// Residual of the kernel form of the model relation:
/// `1 - phi(y)^H phi(x) = nu(y)^H [A(x) + A(y)^H] nu(x)`.
pub fn resolvent_relation_residual(
    model: &NcModel,
    phi: &dyn GradedMap,
    u: &CMatrix,
) -> Result<f64> {
    let phis: Vec<CMatrix> = model.samples.iter().map(|x| phi.eval(x)).collect::<Result<_>>()?;
    let nus: Vec<CMatrix> = model.samples.iter().map(|x| nu(model, u, x)).collect::<Result<_>>()?;
    let sums: Vec<CMatrix> = model.samples.iter().map(|x| resolvent_sum(x, u)).collect::<Result<_>>()?;

    let mut max = 0.0f64;
    for (ix, x) in model.samples.iter().enumerate() {
        for (iy, y) in model.samples.iter().enumerate() {
            if x.level() != y.level() {
                continue;
            }
            let n = x.level();
            let lhs = CMatrix::identity(n).sub(&phis[iy].adjoint_mul(&phis[ix]));
            let kernel = sums[ix].add(&sums[iy].adjoint());
            let rhs = nus[iy].adjoint().mul(&kernel).mul(&nus[ix]);
            max = max.max(mat::op_norm(&lhs.sub(&rhs))?);
        }
    }
    Ok(max)
}

/// Residual of the Cayley-transform identity
/// `(1 + A(x))^{-1} (1 - A(x)) = -(1_n ⊗ U) Theta_U(S(x))`,
/// with the right side through the closed form of the calculus.
pub fn cayley_residual(x: &GradedPoint, u: &CMatrix) -> Result<f64> {
    let a = resolvent_sum(x, u)?;
    let dim = a.rows();
    let eye = CMatrix::identity(dim);
    let inv = mat::inverse(&eye.add(&a)).map_err(|e| name_pencil(e, "1 + A"))?;
    let lhs = inv.mul(&eye.sub(&a));
    let n = x.level();
    let rhs = mat::kron(&CMatrix::identity(n), u)
        .mul(&funcalc::closed_form_symmetrized(x, u)?)
        .neg();
    mat::op_norm(&lhs.sub(&rhs))
}

/// Residual of the harmonic-mean identity
/// `4 (Z1^{-1} + Z2^{-1})^{-1} = Z1 + Z2 - (Z1 - Z2)(Z1 + Z2)^{-1}(Z1 - Z2)`.
pub fn harmonic_mean_identity_residual(z1: &CMatrix, z2: &CMatrix) -> Result<f64> {
    let inv1 = mat::inverse(z1).map_err(|e| name_pencil_direct(e, "Z1"))?;
    let inv2 = mat::inverse(z2).map_err(|e| name_pencil_direct(e, "Z2"))?;
    let sum = z1.add(&z2);
    let sum_inv = mat::inverse(&sum).map_err(|e| name_pencil_direct(e, "Z1 + Z2"))?;
    let harm = mat::inverse(&inv1.add(&inv2))
        .map_err(|e| name_pencil_direct(e, "Z1^{-1} + Z2^{-1}"))?
        .scale_re(4.0);
    let diff = z1.sub(z2);
    let rhs = sum.sub(&diff.mul(&sum_inv).mul(&diff));
    mat::op_norm(&harm.sub(&rhs))
}

fn name_pencil_direct(e: Error, name: &'static str) -> Error {
    match e {
        Error::NearSingular { sigma_min, .. } => Error::SingularPencil { name, sigma_min },
        other => other,
    }
}

/// Outcome of the colligation stage.
pub struct ColligationStage {
    pub t: Colligation,
    pub solution_rank: usize,
    /// Max residual of the colligation relation over samples.
    pub residual: f64,
}

/// Solve for the contraction `T = [a B; C D]` with
/// `[phi(x); (1 + A(x)) nu(x) / sqrt 2] = (1_n ⊗ T) [1_n; (1 - A(x)) nu(x) / sqrt 2]`.
pub fn solve_colligation(
    model: &NcModel,
    phi: &dyn GradedMap,
    u: &CMatrix,
) -> Result<ColligationStage> {
    let k = model.model_dim;
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let p_side = |x: &GradedPoint| -> Result<CMatrix> {
        let n = x.level();
        let a = resolvent_sum(x, u)?;
        let lower = CMatrix::identity(n * k).sub(&a).mul(&nu(model, u, x)?).scale_re(half);
        stack_scalar_block(&CMatrix::identity(n), &lower, k, n)
    };
    let q_side = |x: &GradedPoint| -> Result<CMatrix> {
        let n = x.level();
        let a = resolvent_sum(x, u)?;
        let lower = CMatrix::identity(n * k).add(&a).mul(&nu(model, u, x)?).scale_re(half);
        stack_scalar_block(&phi.eval(x)?, &lower, k, n)
    };

    let p_fam = lurking::collect_vectors(&p_side, &model.samples, 1 + k)?;
    let q_fam = lurking::collect_vectors(&q_side, &model.samples, 1 + k)?;
    let solution = lurking::solve(&p_fam, &q_fam, false).map_err(|e| e.at_stage("colligation"))?;

    let mut residual = 0.0f64;
    for x in &model.samples {
        let n = x.level();
        let lhs = mat::kron(&CMatrix::identity(n), &solution.j).mul(&p_side(x)?);
        residual = residual.max(mat::op_norm(&lhs.sub(&q_side(x)?))?);
    }

    let t = Colligation::from_square(&solution.j, 1)?;
    Ok(ColligationStage { t, solution_rank: solution.rank, residual })
}

/// The realized pair: a unitary (or partial isometry) `U` and a contractive
/// colligation `p` on `C ⊕ K`.
#[derive(Clone, Debug)]
pub struct Realization {
    pub u: CMatrix,
    pub p: Colligation,
    pub u_unitary: bool,
}

/// Assemble `p = T diag(1, -U)`; a contraction because both factors are.
pub fn assemble_realization(t: &Colligation, u: &CMatrix, u_unitary: bool) -> Result<Realization> {
    let k = u.rows();
    if t.dims != (BlockDims { h1: 1, k1: 1, h2: k, k2: k }) {
        return Err(Error::Dim(format!(
            "colligation dims {:?} do not match a scalar block plus a {k}-dim block",
            t.dims
        )));
    }
    let factor = mat::direct_sum(&CMatrix::identity(1), &u.neg());
    let p = t.assemble().mul(&factor);
    Ok(Realization {
        u: u.clone(),
        p: Colligation::from_square(&p, 1)?,
        u_unitary,
    })
}

impl Realization {
    /// Apply the realized function to a series: the graded upper linear
    /// fractional map of `p` at the calculus value `g(U)` (Fejér-summed).
    pub fn phi_eval(&self, g: &DiscAlgElem, plan: &FejerPlan) -> Result<CMatrix> {
        let value = funcalc::theta(g, &self.u, plan)?.value;
        linfrac::graded_f_upper(&self.p, g.level, &value)
    }

    /// Apply the realized function to a biball point through the closed form
    /// of the calculus on symmetrized points (the exact composite).
    pub fn phi_eval_closed(&self, x: &GradedPoint) -> Result<CMatrix> {
        let value = funcalc::closed_form_symmetrized(x, &self.u)?;
        linfrac::graded_f_upper(&self.p, x.level(), &value)
    }
}

/// Max factorization error `‖phi(x) - F_u(p)(Theta_U(S(x)))‖` over the points.
pub fn verify_factorization(
    r: &Realization,
    phi: &dyn GradedMap,
    points: &[GradedPoint],
) -> Result<f64> {
    let mut max = 0.0f64;
    for x in points {
        let expect = phi.eval(x)?;
        let got = r.phi_eval_closed(x)?;
        max = max.max(mat::op_norm(&expect.sub(&got))?);
    }
    Ok(max)
}

/// Residual of the star-product route: `phi(x) = F_u(C(x))(1_n ⊗ U)` where
/// `C(x) = (1_n ⊗ p) ⋆ (pair_block(x) ⊗ 1_K)`.
pub fn redheffer_route_residual(
    r: &Realization,
    phi: &dyn GradedMap,
    x: &GradedPoint,
) -> Result<f64> {
    let n = x.level();
    let k = r.u.rows();
    let eye_n = CMatrix::identity(n);
    let eye_k = CMatrix::identity(k);

    // B = 1_n ⊗ p with dims (n, n, n k, n k).
    let b = Colligation::new(
        BlockDims { h1: n, k1: n, h2: n * k, k2: n * k },
        mat::kron(&eye_n, &r.p.p11),
        mat::kron(&eye_n, &r.p.p12),
        mat::kron(&eye_n, &r.p.p21),
        mat::kron(&eye_n, &r.p.p22),
    )?;
    // A = pair_block(x) ⊗ 1_K with all block dims n k.
    let (u, v) = crate::symmap::uv(x);
    let a = Colligation::new(
        BlockDims { h1: n * k, k1: n * k, h2: n * k, k2: n * k },
        mat::kron(&u, &eye_k),
        mat::kron(&v, &eye_k),
        mat::kron(&v, &eye_k),
        mat::kron(&u, &eye_k),
    )?;
    let c = linfrac::redheffer(&b, &a)?;
    let got = linfrac::f_upper(&c, &mat::kron(&eye_n, &r.u))?;
    mat::op_norm(&phi.eval(x)?.sub(&got))
}

/// The determinant functional witnessing non-uniqueness: for a series `g` at
/// level `n` and `0 < |z0| < 1`,
/// `(det(g(z0) - g(0)) - z0^n det g'(0) / det(1 - g(0) z0)) * 1_n`.
/// It vanishes identically on symmetrized points but does not respect direct
/// sums.
pub fn nonuniqueness_phi0(g: &DiscAlgElem, z0: Complex64) -> Result<CMatrix> {
    if g.len() < 2 {
        return Err(Error::Invalid("the functional needs at least two series coefficients".into()));
    }
    let r = z0.norm();
    if r == 0.0 || r >= 1.0 {
        return Err(Error::Invalid(format!("z0 must satisfy 0 < |z0| < 1, got |z0| = {r}")));
    }
    let n = g.level;
    let g0 = g.coeff(0);
    let pencil = CMatrix::identity(n).sub(&g0.scale(z0));
    let sv = mat::singular_values(&pencil);
    if sv[n - 1] <= 1e-12 * sv[0] {
        return Err(Error::SingularPencil { name: "1 - g(0) z0", sigma_min: sv[n - 1] });
    }
    let first = mat::det(&g.eval_at(z0).sub(&g0));
    let second = z0.powu(n as u32) * mat::det(&g.coeff(1)) / mat::det(&pencil);
    Ok(CMatrix::identity(n).scale(first - second))
}
