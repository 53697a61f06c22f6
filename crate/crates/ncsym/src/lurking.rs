//! Lurking isometries: from two vector families with equal Gramians,
//! construct a partial isometry (optionally extended to a unitary) mapping
//! one family onto the other.
//!
//! Construction: thin SVD of the stacked first family gives an orthonormal
//! basis of its span; the correspondence carries that basis to the second
//! family, where it is re-orthonormalized; composing the two frames yields
//! the partial isometry. This avoids forming Gram inverses and keeps the
//! output a partial isometry even when the Gram hypothesis only holds to
//! rounding.

use crate::error::{Error, Result};
use crate::mat::{self, CMatrix};
use crate::ncfun::GradedPoint;
use num_complex::Complex64;

/// Tag recording where a collected vector came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLabel {
    pub sample: usize,
    pub level: usize,
    /// Row-block index `k` (which C^n slot was sliced).
    pub row_block: usize,
    /// Which standard basis vector the map was applied to.
    pub basis_index: usize,
}

/// A list of vectors in a common ambient space, with provenance labels.
#[derive(Clone, Debug)]
pub struct VectorFamily {
    pub ambient_dim: usize,
    vectors: Vec<(Vec<Complex64>, VectorLabel)>,
}

impl VectorFamily {
    pub fn new(ambient_dim: usize) -> Self {
        VectorFamily { ambient_dim, vectors: Vec::new() }
    }

    pub fn push(&mut self, v: Vec<Complex64>, label: VectorLabel) {
        assert_eq!(v.len(), self.ambient_dim, "vector length mismatch");
        self.vectors.push((v, label));
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &VectorLabel> {
        self.vectors.iter().map(|(_, l)| l)
    }

    /// Stack the family as columns of an `ambient_dim x len` matrix.
    pub fn as_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.ambient_dim, self.vectors.len());
        for (j, (v, _)) in self.vectors.iter().enumerate() {
            for (i, &z) in v.iter().enumerate() {
                m[(i, j)] = z;
            }
        }
        m
    }

    /// Keep only the vectors whose label satisfies the predicate.
    pub fn filtered(&self, keep: impl Fn(&VectorLabel) -> bool) -> VectorFamily {
        VectorFamily {
            ambient_dim: self.ambient_dim,
            vectors: self.vectors.iter().filter(|(_, l)| keep(l)).cloned().collect(),
        }
    }
}

/// Collect the sliced vectors of a graded map with values in
/// `L(C^n, C^n ⊗ K)`: for each sample at level `n`, each row block `k < n`
/// and each standard basis column, the `K`-component slice. A level-`n`
/// sample contributes `n^2` vectors.
pub fn collect_vectors<F>(f: &F, samples: &[GradedPoint], k_dim: usize) -> Result<VectorFamily>
where
    F: Fn(&GradedPoint) -> Result<CMatrix>,
{
    let mut family = VectorFamily::new(k_dim);
    for (sample_id, x) in samples.iter().enumerate() {
        let n = x.level();
        let fx = f(x)?;
        if fx.rows() != n * k_dim || fx.cols() != n {
            return Err(Error::Contract(format!(
                "graded map returned {}x{} at level {n}, expected {}x{n}",
                fx.rows(),
                fx.cols(),
                n * k_dim
            )));
        }
        for k in 0..n {
            for xi in 0..n {
                let v: Vec<Complex64> = (0..k_dim).map(|t| fx[(k * k_dim + t, xi)]).collect();
                family.push(
                    v,
                    VectorLabel { sample: sample_id, level: n, row_block: k, basis_index: xi },
                );
            }
        }
    }
    Ok(family)
}

/// The solved intertwiner.
#[derive(Clone, Debug)]
pub struct IsometrySolution {
    /// Partial isometry (or unitary) from the first ambient space to the second.
    pub j: CMatrix,
    /// Dimension of the initial space (the span of the first family).
    pub rank: usize,
    /// Upper bound on the operator-norm mismatch of the two Gramians.
    pub gram_residual: f64,
    pub unitary: bool,
    /// Largest `‖J p - q‖` over the family, recorded for diagnostics.
    pub intertwine_residual: f64,
}

/// Input tolerance on Gram equality (the solver's hypothesis).
pub const GRAM_TOL: f64 = 1e-8;

/// Relative singular value cutoff separating the span from numerical noise.
const RANK_CUTOFF: f64 = 1e-10;

/// Orthonormalize near-orthonormal columns by QR, fixing phases so each
/// output column stays aligned with its input.
fn reorthonormalize(m: &CMatrix) -> CMatrix {
    let (rows, cols) = (m.rows(), m.cols());
    if cols == 0 {
        return CMatrix::zeros(rows, 0);
    }
    let (q, r) = mat::qr(m);
    let mut out = q.block(0, 0, rows, cols);
    for j in 0..cols {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..rows {
                out[(i, j)] *= phase;
            }
        }
    }
    out
}

/// Solve for a partial isometry `J` with `J p_a = q_a` for all family pairs.
///
/// Requires Gram equality within [`GRAM_TOL`]; on violation the error carries
/// the Gram mismatch. With `pad_to_unitary`, `J` is extended by matching the
/// orthonormal complements of the two spans, which needs equal ambient
/// dimensions (at finite scale equal Gramians force equal span dimensions, so
/// the complements then match automatically).
pub fn solve(p_fam: &VectorFamily, q_fam: &VectorFamily, pad_to_unitary: bool) -> Result<IsometrySolution> {
    solve_with_tol(p_fam, q_fam, pad_to_unitary, GRAM_TOL)
}

pub fn solve_with_tol(
    p_fam: &VectorFamily,
    q_fam: &VectorFamily,
    pad_to_unitary: bool,
    gram_tol: f64,
) -> Result<IsometrySolution> {
    if p_fam.len() != q_fam.len() {
        return Err(Error::Dim(format!(
            "families have {} and {} vectors; they must be index-aligned",
            p_fam.len(),
            q_fam.len()
        )));
    }
    let mp = p_fam.as_matrix();
    let mq = q_fam.as_matrix();

    // Hypothesis: equal Gramians. The Frobenius norm is a cheap upper bound
    // on the operator norm; only a borderline value needs the exact check.
    let gram_diff = mp.gram().sub(&mq.gram());
    let frob = gram_diff.frobenius_norm();
    let gram_residual = if frob <= gram_tol {
        frob
    } else {
        let exact = mat::op_norm(&gram_diff)?;
        if exact > gram_tol {
            return Err(Error::GramMismatch { residual: exact, tol: gram_tol });
        }
        exact
    };

    let dim_p = p_fam.ambient_dim;
    let dim_q = q_fam.ambient_dim;

    // Orthonormal basis of span{p} from the thin SVD.
    let svd = mat::svd(&mp);
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let rank = svd.sigma.iter().filter(|&&s| s > smax * RANK_CUTOFF && s > 0.0).count();

    let basis_p = svd.u.block(0, 0, dim_p, rank);
    // Carry the basis through the correspondence: each basis vector is
    // MP v_i / sigma_i, whose image is MQ v_i / sigma_i.
    let mut images = CMatrix::zeros(dim_q, rank);
    for i in 0..rank {
        let mut col = CMatrix::zeros(mp.cols(), 1);
        for r in 0..mp.cols() {
            col[(r, 0)] = svd.v[(r, i)] / svd.sigma[i];
        }
        let im = mq.mul(&col);
        for r in 0..dim_q {
            images[(r, i)] = im[(r, 0)];
        }
    }
    let basis_q = reorthonormalize(&images);

    let mut j = basis_q.mul(&basis_p.adjoint());
    let mut unitary = false;
    if pad_to_unitary {
        if dim_p != dim_q {
            return Err(Error::PaddingImpossible { dim_p, dim_q });
        }
        let comp_p = mat::orthonormal_complement(&basis_p);
        let comp_q = mat::orthonormal_complement(&basis_q);
        j = j.add(&comp_q.mul(&comp_p.adjoint()));
        unitary = true;
    }

    let intertwine_residual = mat::op_norm(&j.mul(&mp).sub(&mq))?;
    Ok(IsometrySolution { j, rank, gram_residual, unitary, intertwine_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{random_gaussian, random_strict_contraction, random_unitary};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_points(seed: u64, sizes: &[usize]) -> Vec<GradedPoint> {
        sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                GradedPoint::pair(
                    random_strict_contraction(seed + 2 * i as u64, n, 0.8),
                    random_strict_contraction(seed + 2 * i as u64 + 1, n, 0.8),
                )
                .unwrap()
            })
            .collect()
    }

    /// A generic graded map C^n -> C^n ⊗ K built from a fixed matrix family.
    fn graded_map(k_dim: usize, a: CMatrix, b: CMatrix) -> impl Fn(&GradedPoint) -> crate::Result<CMatrix> {
        move |x: &GradedPoint| {
            let n = x.level();
            let x1 = x.component(0);
            let x2 = x.component(1);
            // kron(x1, a) + kron(x2, b) has shape (n*k) x (n*k); keep the
            // first n columns to get a map C^n -> C^n ⊗ K.
            let full = mat::kron(x1, &a).add(&mat::kron(x2, &b));
            let mut out = CMatrix::zeros(n * k_dim, n);
            for i in 0..n * k_dim {
                for j in 0..n {
                    out[(i, j)] = full[(i, j * k_dim)];
                }
            }
            Ok(out)
        }
    }

    #[test]
    fn collect_counts_and_constant() {
        // Constant column at level 1: a single vector equal to that column.
        let col = random_gaussian(1, 1, 3, 1);
        let colc = col.clone();
        let f = move |x: &GradedPoint| -> crate::Result<CMatrix> {
            assert_eq!(x.level(), 1);
            Ok(colc.clone())
        };
        let pts = sample_points(5, &[1]);
        let fam = collect_vectors(&f, &pts, 3).unwrap();
        assert_eq!(fam.len(), 1);
        let m = fam.as_matrix();
        assert!(m.sub(&col).frobenius_norm() == 0.0);

        // A level-2 sample contributes 4 vectors.
        let g = graded_map(3, random_gaussian(2, 1, 3, 3), random_gaussian(2, 2, 3, 3));
        let pts2 = sample_points(9, &[2]);
        let fam2 = collect_vectors(&g, &pts2, 3).unwrap();
        assert_eq!(fam2.len(), 4);
    }

    #[test]
    fn collected_span_matches_rank_oracle() {
        let k = 4;
        let g = graded_map(k, random_gaussian(3, 1, k, k), random_gaussian(3, 2, k, k));
        let pts = sample_points(11, &[2, 3]);
        let fam = collect_vectors(&g, &pts, k).unwrap();

        // Independent stacking: slice every f(x) into its K-blocks by hand
        // and concatenate; the family must span the same space.
        let mut cols: Vec<Vec<Complex64>> = Vec::new();
        for x in &pts {
            let fx = g(x).unwrap();
            for blk in 0..x.level() {
                for j in 0..x.level() {
                    cols.push((0..k).map(|t| fx[(blk * k + t, j)]).collect());
                }
            }
        }
        let mut manual = CMatrix::zeros(k, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, &z) in col.iter().enumerate() {
                manual[(i, j)] = z;
            }
        }

        let rank_of = |m: &CMatrix| {
            let sv = mat::singular_values(m);
            sv.iter().filter(|&&s| s > sv[0] * 1e-10).count()
        };
        assert_eq!(fam.len(), cols.len());
        assert_eq!(rank_of(&fam.as_matrix()), rank_of(&manual));
        // This particular map mixes exactly two fixed directions.
        assert_eq!(rank_of(&fam.as_matrix()), 2);
    }

    #[test]
    fn identity_on_matching_families() {
        let g = graded_map(3, random_gaussian(7, 1, 3, 3), random_gaussian(7, 2, 3, 3));
        let pts = sample_points(21, &[1, 2]);
        let fam = collect_vectors(&g, &pts, 3).unwrap();
        let sol = solve(&fam, &fam, false).unwrap();
        let m = fam.as_matrix();
        let resid = mat::op_norm(&sol.j.mul(&m).sub(&m)).unwrap();
        assert!(resid <= 1e-10, "J should fix the family, residual {resid:.3e}");
    }

    #[test]
    fn planted_unitary_recovery() {
        for seed in 0..20u64 {
            let k = 4;
            let j0 = random_unitary(500 + seed, k);
            let g = graded_map(
                k,
                random_gaussian(seed, 1, k, k),
                random_gaussian(seed, 2, k, k),
            );
            let pts = sample_points(40 + seed, &[1, 2, 2]);
            let p_fam = collect_vectors(&g, &pts, k).unwrap();
            let q_values = |x: &GradedPoint| -> crate::Result<CMatrix> {
                let fx = g(x)?;
                Ok(mat::kron(&CMatrix::identity(x.level()), &j0).mul(&fx))
            };
            let q_fam = collect_vectors(&q_values, &pts, k).unwrap();
            let sol = solve(&p_fam, &q_fam, false).unwrap();

            let mp = p_fam.as_matrix();
            let planted = j0.mul(&mp);
            let got = sol.j.mul(&mp);
            let resid = mat::op_norm(&got.sub(&planted)).unwrap();
            assert!(resid <= 1e-9, "planted recovery residual {resid:.3e} at seed {seed}");
        }
    }

    #[test]
    fn gram_perturbation_rejected() {
        let g = graded_map(3, random_gaussian(13, 1, 3, 3), random_gaussian(13, 2, 3, 3));
        let pts = sample_points(61, &[2, 2]);
        let p_fam = collect_vectors(&g, &pts, 3).unwrap();
        let q_fam = p_fam.clone();
        // Perturb one vector by 1e-3.
        let label = q_fam.labels().next().unwrap().clone();
        let mut v = vec![c(0.0, 0.0); 3];
        let m = q_fam.as_matrix();
        for (i, item) in v.iter_mut().enumerate() {
            *item = m[(i, 0)];
        }
        v[0] += c(1e-3, 0.0);
        let mut rebuilt = VectorFamily::new(3);
        rebuilt.push(v, label);
        for (idx, l) in p_fam.labels().enumerate().skip(1) {
            rebuilt.push(m.column(idx), l.clone());
        }
        match solve(&p_fam, &rebuilt, false) {
            Err(Error::GramMismatch { residual, .. }) => {
                assert!(residual > 1e-8, "mismatch {residual:.3e} should exceed tolerance");
            }
            other => panic!("expected GramMismatch, got {:?}", other.map(|s| s.rank)),
        }
    }

    #[test]
    fn partial_isometry_is_projection() {
        let g = graded_map(5, random_gaussian(17, 1, 5, 5), random_gaussian(17, 2, 5, 5));
        let pts = sample_points(71, &[2]);
        let p_fam = collect_vectors(&g, &pts, 5).unwrap();
        let j0 = random_unitary(77, 5);
        let q_values = |x: &GradedPoint| -> crate::Result<CMatrix> {
            Ok(mat::kron(&CMatrix::identity(x.level()), &j0).mul(&g(x)?))
        };
        let q_fam = collect_vectors(&q_values, &pts, 5).unwrap();
        let sol = solve(&p_fam, &q_fam, false).unwrap();

        // J^H J equals the orthogonal projector onto span{p}, computed
        // independently from the SVD of the stacked family.
        let jj = sol.j.adjoint_mul(&sol.j);
        let svd = mat::svd(&p_fam.as_matrix());
        let r = sol.rank;
        let basis = svd.u.block(0, 0, 5, r);
        let projector = basis.mul(&basis.adjoint());
        let resid = mat::op_norm(&jj.sub(&projector)).unwrap();
        assert!(resid <= 1e-9, "J^H J vs projector residual {resid:.3e}");
        // Partial isometry: J^H J idempotent.
        assert!(mat::op_norm(&jj.mul(&jj).sub(&jj)).unwrap() <= 1e-10);
    }

    #[test]
    fn unitary_padding() {
        let k = 4;
        // Rank-deficient family: only two directions.
        let dir = random_gaussian(23, 1, k, 2);
        let f = move |x: &GradedPoint| -> crate::Result<CMatrix> {
            let n = x.level();
            let coeff = x.component(0).block(0, 0, n, n);
            let mut out = CMatrix::zeros(n * k, n);
            for b in 0..n {
                for j in 0..n {
                    for t in 0..k {
                        out[(b * k + t, j)] = coeff[(b, j)] * dir[(t, 0)] + coeff[(j, b)] * dir[(t, 1)];
                    }
                }
            }
            Ok(out)
        };
        let pts = sample_points(81, &[2, 2]);
        let p_fam = collect_vectors(&f, &pts, k).unwrap();
        let j0 = random_unitary(99, k);
        let q_values = |x: &GradedPoint| -> crate::Result<CMatrix> {
            Ok(mat::kron(&CMatrix::identity(x.level()), &j0).mul(&f(x)?))
        };
        let q_fam = collect_vectors(&q_values, &pts, k).unwrap();
        let sol = solve(&p_fam, &q_fam, true).unwrap();
        assert!(sol.unitary);
        assert!(sol.rank < k, "family was built rank-deficient");
        let defect = sol.j.gram().sub(&CMatrix::identity(k));
        assert!(mat::op_norm(&defect).unwrap() <= 1e-10, "padded J should be unitary");
        assert!(sol.intertwine_residual <= 1e-9);
    }

    #[test]
    fn padding_impossible_when_dims_differ() {
        let mut p_fam = VectorFamily::new(3);
        let mut q_fam = VectorFamily::new(4);
        let label = VectorLabel { sample: 0, level: 1, row_block: 0, basis_index: 0 };
        p_fam.push(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], label.clone());
        q_fam.push(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)], label);
        assert!(solve(&p_fam, &q_fam, false).is_ok());
        assert!(matches!(
            solve(&p_fam, &q_fam, true),
            Err(Error::PaddingImpossible { dim_p: 3, dim_q: 4 })
        ));
    }

    #[test]
    fn nesting_consistency() {
        // Solving on a sub-family then the full family gives maps that agree
        // on the sub-span.
        let k = 4;
        let g = graded_map(k, random_gaussian(31, 1, k, k), random_gaussian(31, 2, k, k));
        let pts = sample_points(91, &[1, 2, 2]);
        let j0 = random_unitary(313, k);
        let q_values = |x: &GradedPoint| -> crate::Result<CMatrix> {
            Ok(mat::kron(&CMatrix::identity(x.level()), &j0).mul(&g(x)?))
        };
        let p_full = collect_vectors(&g, &pts, k).unwrap();
        let q_full = collect_vectors(&q_values, &pts, k).unwrap();
        let p_sub = p_full.filtered(|l| l.sample == 0);
        let q_sub = q_full.filtered(|l| l.sample == 0);

        let sol_full = solve(&p_full, &q_full, false).unwrap();
        let sol_sub = solve(&p_sub, &q_sub, false).unwrap();

        let msub = p_sub.as_matrix();
        let gap = mat::op_norm(&sol_full.j.mul(&msub).sub(&sol_sub.j.mul(&msub))).unwrap();
        assert!(gap <= 1e-9, "solutions disagree on the sub-span by {gap:.3e}");
    }

    #[test]
    fn graded_intertwining_invariant() {
        // (1_n ⊗ J) f(x) == g(x) for every sample once J is solved.
        let k = 3;
        let g = graded_map(k, random_gaussian(37, 1, k, k), random_gaussian(37, 2, k, k));
        let j0 = random_unitary(41, k);
        let q_values = |x: &GradedPoint| -> crate::Result<CMatrix> {
            Ok(mat::kron(&CMatrix::identity(x.level()), &j0).mul(&g(x)?))
        };
        let pts = sample_points(101, &[1, 2, 3]);
        let p_fam = collect_vectors(&g, &pts, k).unwrap();
        let q_fam = collect_vectors(&q_values, &pts, k).unwrap();
        let sol = solve(&p_fam, &q_fam, false).unwrap();
        for x in &pts {
            let lhs = mat::kron(&CMatrix::identity(x.level()), &sol.j).mul(&g(x).unwrap());
            let rhs = q_values(x).unwrap();
            let resid = mat::op_norm(&lhs.sub(&rhs)).unwrap();
            assert!(resid <= 1e-9, "graded intertwining residual {resid:.3e}");
        }
    }
}
