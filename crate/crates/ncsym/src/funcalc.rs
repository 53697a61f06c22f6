//! Functional calculus: substitute a contraction `T` into a matrix power
//! series `g`, summing `Σ g^j ⊗ T^j` by Fejér (Cesàro) means.
//!
//! All series in this crate are finite truncations, so the Cesàro limit is a
//! finite sum; the Fejér sequence is still run faithfully, with Richardson
//! extrapolation used to extract its limit (exact once the order passes the
//! series degree) and the raw partial means recorded for diagnostics. The
//! direct finite sum is always computed alongside as a reference.

use crate::error::{Error, Result};
use crate::mat::{self, CMatrix};
use crate::ncfun::{in_biball, GradedPoint};
use crate::symmap::{self, uv, DiscAlgElem};
use serde::{Deserialize, Serialize};

/// Iteration budget and stopping tolerance for the Fejér summation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct FejerPlan {
    /// Cap on the Cesàro order.
    pub max_k: usize,
    /// Convergence tolerance on successive extrapolated means.
    pub tol: f64,
}

impl Default for FejerPlan {
    fn default() -> Self {
        FejerPlan { max_k: 4096, tol: 1e-8 }
    }
}

/// Result of the Fejér summation.
#[derive(Clone, Debug)]
pub struct ThetaOutcome {
    /// The limit of the Fejér means (the value of the calculus).
    pub value: CMatrix,
    /// Direct finite sum `Σ g^j ⊗ T^j`, kept as a reference.
    pub exact_sum: CMatrix,
    /// Cesàro order at which the stopping rule fired.
    pub achieved_k: usize,
    /// False when the budget ran out before the stopping rule fired.
    pub converged: bool,
    /// Distance from the last raw Fejér mean to the returned value; shows how
    /// far plain Cesàro summation still was at the stopping order.
    pub fejer_gap: f64,
}

const CONTRACTION_SLACK: f64 = 1e-12;

fn require_contraction(t: &CMatrix) -> Result<f64> {
    let norm = mat::op_norm(t)?;
    if norm > 1.0 + CONTRACTION_SLACK {
        return Err(Error::NotContraction { norm });
    }
    Ok(norm)
}

/// The raw Fejér mean of order `k`:
/// `h_k(T) = Σ_j (1 - j/(k+1)) g^j ⊗ T^j` over `j <= k`.
pub fn fejer_mean(g: &DiscAlgElem, t: &CMatrix, k: usize) -> Result<CMatrix> {
    require_contraction(t)?;
    let dim = g.level * t.rows();
    let mut acc = CMatrix::zeros(dim, dim);
    let mut t_pow = CMatrix::identity(t.rows());
    for j in 0..=k.min(g.len().saturating_sub(1)) {
        let weight = 1.0 - (j as f64) / (k as f64 + 1.0);
        acc = acc.add(&mat::kron(&g.coeff(j), &t_pow).scale_re(weight));
        t_pow = t_pow.mul(t);
    }
    Ok(acc)
}

/// Sum the series at `T` by Fejér means.
///
/// Raw means are generated order by order; Richardson extrapolation
/// `e_k = h_k + (k+2)(h_{k+1} - h_k)` supplies the limit (for a series of
/// degree `N` it is exact once `k >= N`), and the iteration stops when two
/// successive extrapolants agree within `plan.tol` or the budget runs out,
/// in which case the outcome is flagged rather than raised as an error.
pub fn theta(g: &DiscAlgElem, t: &CMatrix, plan: &FejerPlan) -> Result<ThetaOutcome> {
    if !t.is_square() {
        return Err(Error::Dim(format!("calculus operator must be square, got {}x{}", t.rows(), t.cols())));
    }
    require_contraction(t)?;

    let ht = t.rows();
    let dim = g.level * ht;
    let n_terms = g.len();

    // Exact finite sum, kept as the reference value.
    let mut t_pow = CMatrix::identity(ht);
    let mut partial = CMatrix::zeros(dim, dim); // s_k = Σ_{j<=k} g^j ⊗ T^j
    let mut exact_sum = CMatrix::zeros(dim, dim);
    for j in 0..n_terms {
        exact_sum = exact_sum.add(&mat::kron(&g.coeff(j), &t_pow));
        t_pow = t_pow.mul(t);
    }

    let mut cumulative = CMatrix::zeros(dim, dim); // Σ_{r<=k} s_r
    let mut t_pow = CMatrix::identity(ht);
    let mut prev_h: Option<CMatrix> = None;
    let mut prev_extrap: Option<CMatrix> = None;
    let mut achieved_k = plan.max_k;
    let mut converged = false;
    let mut value = exact_sum.clone();
    let mut last_h = CMatrix::zeros(dim, dim);

    for k in 0..=plan.max_k {
        if k < n_terms {
            partial = partial.add(&mat::kron(&g.coeff(k), &t_pow));
            t_pow = t_pow.mul(t);
        }
        cumulative = cumulative.add(&partial);
        let h_k = cumulative.scale_re(1.0 / (k as f64 + 1.0));

        if let Some(h_prev) = prev_h {
            // Extrapolant for order k-1 uses h_{k-1} and h_k.
            let extrap = h_prev.add(&h_k.sub(&h_prev).scale_re(k as f64 + 1.0));
            if let Some(e_prev) = prev_extrap {
                let delta = mat::op_norm(&extrap.sub(&e_prev))?;
                if delta <= plan.tol {
                    achieved_k = k;
                    converged = true;
                    value = extrap;
                    last_h = h_k;
                    break;
                }
            }
            prev_extrap = Some(extrap);
        }
        prev_h = Some(h_k.clone());
        last_h = h_k;
        if k == plan.max_k {
            value = prev_extrap.clone().unwrap_or_else(|| last_h.clone());
        }
    }

    let fejer_gap = mat::op_norm(&last_h.sub(&value))?;
    Ok(ThetaOutcome {
        value,
        exact_sum,
        achieved_k,
        converged,
        fejer_gap,
    })
}

/// Closed form of the calculus applied to a symmetrized biball point:
/// `u ⊗ 1 + (v ⊗ U)(1 - u ⊗ U)^{-1}(v ⊗ 1)`.
pub fn closed_form_symmetrized(x: &GradedPoint, u_op: &CMatrix) -> Result<CMatrix> {
    if !in_biball(x) {
        return Err(Error::OutsideBiball { norm: x.max_norm()? });
    }
    require_contraction(u_op)?;
    let (u, v) = uv(x);
    let h = u_op.rows();
    let eye_h = CMatrix::identity(h);
    let dim = x.level() * h;
    let pencil = CMatrix::identity(dim).sub(&mat::kron(&u, u_op));
    let inv = mat::inverse(&pencil).map_err(|e| match e {
        Error::NearSingular { sigma_min, .. } => Error::SingularPencil { name: "1 - u ⊗ U", sigma_min },
        other => other,
    })?;
    Ok(mat::kron(&u, &eye_h).add(&mat::kron(&v, u_op).mul(&inv).mul(&mat::kron(&v, &eye_h))))
}

/// Norm check for the calculus output.
#[derive(Clone, Debug, Serialize)]
pub struct NormCheck {
    pub norm: f64,
    /// Whether the norm is strictly below 1 after subtracting the slack.
    pub strict: bool,
    /// Numerical slack used for strictness: the series tail bound plus 1e-10.
    pub slack: f64,
}

/// Compute `‖g(T)‖` and decide strict unit-ball membership. Requires the
/// series itself to lie strictly inside the unit ball of the sup norm.
pub fn vn_norm_check(g: &DiscAlgElem, t: &CMatrix, plan: &FejerPlan) -> Result<NormCheck> {
    let sup = symmap::sup_norm(g, symmap::SUP_NORM_GRID)?;
    if sup >= 1.0 {
        return Err(Error::SupNormTooLarge { norm: sup });
    }
    let out = theta(g, t, plan)?;
    let norm = mat::op_norm(&out.value)?;
    let slack = g.tail_bound + 1e-10;
    Ok(NormCheck { norm, strict: norm < 1.0 - slack, slack })
}

/// Residual of the similarity covariance of the calculus:
/// `‖theta(s^{-1} g s) - (s^{-1} ⊗ 1) theta(g) (s ⊗ 1)‖`.
pub fn theta_similarity_check(
    g: &DiscAlgElem,
    s: &CMatrix,
    t: &CMatrix,
    plan: &FejerPlan,
) -> Result<f64> {
    let conj = g.conjugate(s)?;
    let lhs = theta(&conj, t, plan)?.value;
    let sinv = mat::inverse(s)?;
    let eye_h = CMatrix::identity(t.rows());
    let rhs = mat::kron(&sinv, &eye_h)
        .mul(&theta(g, t, plan)?.value)
        .mul(&mat::kron(s, &eye_h));
    mat::op_norm(&lhs.sub(&rhs))
}

/// Permutation identifying `(C^m ⊗ H) ⊕ (C^n ⊗ H)` with `C^(m+n) ⊗ H`.
///
/// Under the crate's slow-first Kronecker convention the block index
/// `m*h + i*h + t` of the second summand already equals the combined index
/// `(m + i)*h + t`, so the identification is the identity permutation; the
/// matrix is supplied explicitly so callers can keep the reshuffle visible in
/// identities.
pub fn block_shuffle(m: usize, n: usize, h: usize) -> CMatrix {
    let dim = (m + n) * h;
    let mut p = CMatrix::zeros(dim, dim);
    for i in 0..m + n {
        for t in 0..h {
            let combined = i * h + t;
            let blockwise = if i < m { i * h + t } else { m * h + (i - m) * h + t };
            p[(combined, blockwise)] = num_complex::Complex64::new(1.0, 0.0);
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{random_gaussian, random_strict_contraction, random_unitary, singular_values};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn biball_point(seed: u64, n: usize, r: f64) -> GradedPoint {
        GradedPoint::pair(
            random_strict_contraction(seed, n, r),
            random_strict_contraction(seed + 1, n, r),
        )
        .unwrap()
    }

    #[test]
    fn constant_series_is_exact() {
        let g0 = random_gaussian(1, 1, 2, 2);
        let g = DiscAlgElem::constant(g0.clone()).unwrap();
        let t = random_unitary(2, 3);
        let out = theta(&g, &t, &FejerPlan::default()).unwrap();
        let expect = mat::kron(&g0, &CMatrix::identity(3));
        assert!(out.value.sub(&expect).frobenius_norm() <= 1e-14);
        assert!(out.converged);
        assert!(out.achieved_k <= 4);
    }

    #[test]
    fn scalar_operator_scalar_series() {
        // T = lambda * I and scalar coefficients: theta = (Σ g_j lambda^j) I.
        let coeffs = [c(0.3, 0.1), c(-0.2, 0.0), c(0.05, -0.15), c(0.1, 0.0)];
        let g = DiscAlgElem::scalar_series(&coeffs);
        let lambda = c(0.4, -0.3);
        let t = CMatrix::identity(4).scale(lambda);
        let out = theta(&g, &t, &FejerPlan::default()).unwrap();
        let mut series_val = c(0.0, 0.0);
        let mut pw = c(1.0, 0.0);
        for &a in &coeffs {
            series_val += a * pw;
            pw *= lambda;
        }
        let expect = CMatrix::identity(4).scale(series_val);
        assert!(out.value.sub(&expect).frobenius_norm() <= 1e-12);
        assert!(out.converged);
    }

    #[test]
    fn matches_closed_form_on_symmetrized_points() {
        let plan = FejerPlan::default();
        for seed in 0..5u64 {
            let x = biball_point(10 + seed, 2, 0.8);
            let s = symmap::symmetrize_default(&x).unwrap();
            let u = random_unitary(30 + seed, 4);
            let out = theta(&s.series, &u, &plan).unwrap();
            let closed = closed_form_symmetrized(&x, &u).unwrap();
            let gap = mat::op_norm(&out.value.sub(&closed)).unwrap();
            assert!(
                gap <= plan.tol + s.series.tail_bound,
                "gap {gap:.3e} vs tol {:.1e} + tail {:.1e}",
                plan.tol,
                s.series.tail_bound
            );
            assert!(out.converged, "should converge well before max_k");
            assert!(out.achieved_k <= 4096);
            // The extrapolated limit tracks the direct finite sum at the
            // stopping tolerance (the geometric tail of extrapolant
            // differences is bounded by tol / (1 - ‖u‖)).
            assert!(mat::op_norm(&out.value.sub(&out.exact_sum)).unwrap() <= 100.0 * plan.tol);
        }
    }

    #[test]
    fn closed_form_examples() {
        let a = random_strict_contraction(3, 2, 0.6);
        let x = GradedPoint::pair(a.clone(), a.clone()).unwrap();
        let u = random_unitary(4, 3);
        // v = 0: the closed form collapses to a ⊗ I.
        let out = closed_form_symmetrized(&x, &u).unwrap();
        assert!(out.sub(&mat::kron(&a, &CMatrix::identity(3))).frobenius_norm() <= 1e-13);

        // U = 0: only the constant term u ⊗ I survives.
        let y = biball_point(5, 2, 0.8);
        let (uu, _) = uv(&y);
        let z = CMatrix::zeros(3, 3);
        let out = closed_form_symmetrized(&y, &z).unwrap();
        assert!(out.sub(&mat::kron(&uu, &CMatrix::identity(3))).frobenius_norm() <= 1e-14);
    }

    #[test]
    fn rejects_non_contraction() {
        let g = DiscAlgElem::scalar_series(&[c(0.5, 0.0)]);
        let t = CMatrix::identity(2).scale_re(1.5);
        assert!(matches!(theta(&g, &t, &FejerPlan::default()), Err(Error::NotContraction { .. })));
    }

    #[test]
    fn non_convergence_is_flagged_not_raised() {
        let x = biball_point(40, 2, 0.8);
        let s = symmap::symmetrize(&x, 60).unwrap();
        let u = random_unitary(41, 3);
        let plan = FejerPlan { max_k: 3, tol: 1e-14 };
        let out = theta(&s.series, &u, &plan).unwrap();
        assert!(!out.converged);
        assert_eq!(out.achieved_k, 3);
    }

    #[test]
    fn fejer_mean_decay_bound() {
        // For k beyond the degree, ‖h_k - exact‖ <= (Σ_j j ‖g_j‖) / (k+1).
        let x = biball_point(50, 2, 0.7);
        let s = symmap::symmetrize(&x, 12).unwrap();
        let u = random_unitary(51, 3);
        let exact = theta(&s.series, &u, &FejerPlan::default()).unwrap().exact_sum;
        let coeff_weight: f64 = (0..s.series.len())
            .map(|j| j as f64 * mat::op_norm(&s.series.coeff(j)).unwrap())
            .sum();
        for k in [12usize, 24, 48, 96, 192] {
            let h = fejer_mean(&s.series, &u, k).unwrap();
            let gap = mat::op_norm(&h.sub(&exact)).unwrap();
            let bound = coeff_weight / (k as f64 + 1.0);
            assert!(gap <= bound + 1e-12, "k={k}: gap {gap:.3e} vs bound {bound:.3e}");
        }
    }

    #[test]
    fn vn_check_scalar_half() {
        // g(z) = 0.5 z against a unitary: norm exactly 0.5, strictly inside.
        let g = DiscAlgElem::scalar_series(&[c(0.0, 0.0), c(0.5, 0.0)]);
        let t = random_unitary(6, 4);
        let check = vn_norm_check(&g, &t, &FejerPlan::default()).unwrap();
        assert!((check.norm - 0.5).abs() <= 1e-12);
        assert!(check.strict);
    }

    #[test]
    fn vn_check_symmetrized_point() {
        let x = biball_point(60, 2, 0.8);
        let s = symmap::symmetrize_default(&x).unwrap();
        let t = random_unitary(61, 8);
        let check = vn_norm_check(&s.series, &t, &FejerPlan::default()).unwrap();
        let bound = x.max_norm().unwrap();
        assert!(check.norm <= bound + 1e-6, "norm {} vs ‖x‖ {}", check.norm, bound);
        assert!(check.strict);
    }

    #[test]
    fn vn_check_rejects_large_series() {
        let g = DiscAlgElem::scalar_series(&[c(0.0, 0.0), c(1.0, 0.0)]); // sup-norm 1
        let t = random_unitary(7, 2);
        assert!(matches!(
            vn_norm_check(&g, &t, &FejerPlan::default()),
            Err(Error::SupNormTooLarge { .. })
        ));
    }

    #[test]
    fn von_neumann_inequality_holds() {
        for seed in 0..5u64 {
            let x = biball_point(70 + seed, 2, 0.75);
            let s = symmap::symmetrize_default(&x).unwrap();
            let t = random_strict_contraction(90 + seed, 5, 0.999);
            let plan = FejerPlan::default();
            let check = vn_norm_check(&s.series, &t, &plan).unwrap();
            let sup = symmap::sup_norm(&s.series, symmap::SUP_NORM_GRID).unwrap();
            assert!(check.norm <= sup + plan.tol, "‖g(T)‖ {} vs sup {}", check.norm, sup);
        }
    }

    #[test]
    fn similarity_covariance() {
        let plan = FejerPlan::default();
        let x = biball_point(80, 3, 0.5);
        let g = symmap::symmetrize(&x, 10).unwrap().series;
        let u = random_unitary(81, 3);

        // s = I gives residual zero.
        assert!(theta_similarity_check(&g, &CMatrix::identity(3), &u, &plan).unwrap() <= 1e-15);

        // Seeded well-conditioned s.
        let s = CMatrix::identity(3).add(&random_gaussian(82, 1, 3, 3).scale_re(0.15));
        let sv = singular_values(&s);
        assert!(sv[0] / sv[2] <= 4.0);
        let resid = theta_similarity_check(&g, &s, &u, &plan).unwrap();
        assert!(resid <= 1e-9, "residual {resid:.3e}");

        // Diagonal s and diagonal coefficients commute blockwise.
        let gd = DiscAlgElem::new(
            2,
            vec![CMatrix::diag_re(&[0.1, 0.2]), CMatrix::diag_re(&[0.3, -0.1])],
            0.0,
        )
        .unwrap();
        let sd = CMatrix::diag_re(&[2.0, 0.5]);
        let ud = random_unitary(83, 2);
        assert!(theta_similarity_check(&gd, &sd, &ud, &plan).unwrap() <= 1e-12);
    }

    #[test]
    fn respects_direct_sums_with_shuffle() {
        let plan = FejerPlan::default();
        let xa = biball_point(90, 2, 0.7);
        let xb = biball_point(91, 3, 0.7);
        let ga = symmap::symmetrize(&xa, 8).unwrap().series;
        let gb = symmap::symmetrize(&xb, 8).unwrap().series;
        let t = random_unitary(92, 2);

        let combined = theta(&ga.direct_sum(&gb), &t, &plan).unwrap().value;
        let blockwise = mat::direct_sum(
            &theta(&ga, &t, &plan).unwrap().value,
            &theta(&gb, &t, &plan).unwrap().value,
        );
        let p = block_shuffle(2, 3, 2);
        let rhs = p.mul(&blockwise).mul(&p.adjoint());
        assert!(
            mat::op_norm(&combined.sub(&rhs)).unwrap() <= 1e-10,
            "direct-sum reshuffle mismatch"
        );
        // Under this crate's convention the shuffle is the identity.
        assert!(p.sub(&CMatrix::identity(10)).frobenius_norm() == 0.0);
    }
}
