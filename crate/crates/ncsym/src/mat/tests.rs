use super::*;
use crate::error::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
    assert!(
        (a - b).abs() <= tol,
        "{what}: {a} vs {b} (diff {:.3e}, tol {tol:.1e})",
        (a - b).abs()
    );
}

/// Independent oracle: power iteration on A^H A estimates the top singular
/// value without touching the Jacobi path.
fn power_iteration_top_sigma(a: &CMatrix, iters: usize) -> f64 {
    let n = a.cols();
    let mut b = CMatrix::from_fn(n, 1, |i, _| c(1.0 / (i as f64 + 1.5), 0.3 * i as f64 + 0.1));
    let mut lambda = 0.0;
    for _ in 0..iters {
        let w = a.adjoint_mul(&a.mul(&b));
        let norm = w.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm;
        b = w.scale_re(1.0 / norm);
    }
    lambda.sqrt()
}

#[test]
fn op_norm_identity() {
    assert_close(op_norm(&CMatrix::identity(3)).unwrap(), 1.0, 1e-14, "op_norm(I3)");
}

#[test]
fn op_norm_diagonal() {
    let d = CMatrix::diag(&[c(0.5, 0.0), c(-0.25, 0.0)]);
    assert_close(op_norm(&d).unwrap(), 0.5, 1e-14, "op_norm(diag)");
}

#[test]
fn op_norm_matches_power_iteration() {
    let a = random_gaussian(77, 9, 4, 4);
    let oracle = power_iteration_top_sigma(&a, 800);
    assert_close(op_norm(&a).unwrap(), oracle, 1e-10, "op_norm vs power iteration");
}

#[test]
fn op_norm_rejects_non_finite() {
    let mut a = CMatrix::identity(2);
    a[(0, 1)] = c(f64::NAN, 0.0);
    match op_norm(&a) {
        Err(Error::NonFinite { row: 0, col: 1 }) => {}
        other => panic!("expected NonFinite, got {other:?}"),
    }
}

#[test]
fn direct_sum_examples() {
    let a = CMatrix::scalar(c(1.0, 0.0));
    let b = CMatrix::scalar(c(2.0, 0.0));
    let s = direct_sum(&a, &b);
    assert_eq!(s, CMatrix::diag(&[c(1.0, 0.0), c(2.0, 0.0)]));

    // Empty summand is the neutral element.
    let e = CMatrix::zeros(0, 0);
    let a4 = random_gaussian(3, 1, 4, 4);
    assert_eq!(direct_sum(&a4, &e), a4);
    assert_eq!(direct_sum(&e, &a4), a4);
}

#[test]
fn direct_sum_norm_is_max() {
    for seed in 0..5u64 {
        let a = random_gaussian(seed, 11, 3, 3);
        let b = random_gaussian(seed, 12, 5, 5);
        let lhs = op_norm(&direct_sum(&a, &b)).unwrap();
        let rhs = op_norm(&a).unwrap().max(op_norm(&b).unwrap());
        assert_close(lhs, rhs, 1e-12 * (1.0 + rhs), "norm of direct sum");
    }
}

#[test]
fn kron_examples() {
    assert_eq!(kron(&CMatrix::identity(2), &CMatrix::identity(3)), CMatrix::identity(6));
    let d = kron(&CMatrix::diag_re(&[2.0, 3.0]), &CMatrix::identity(2));
    assert_eq!(d, CMatrix::diag_re(&[2.0, 2.0, 3.0, 3.0]));
}

#[test]
fn kron_mixed_product() {
    let a = random_gaussian(21, 1, 2, 2);
    let b = random_gaussian(21, 2, 2, 2);
    let x = random_gaussian(21, 3, 2, 2);
    let y = random_gaussian(21, 4, 2, 2);
    let lhs = kron(&a, &b).mul(&kron(&x, &y));
    let rhs = kron(&a.mul(&x), &b.mul(&y));
    assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-12 * rhs.frobenius_norm().max(1.0));
}

#[test]
fn inverse_examples() {
    let i3 = CMatrix::identity(3);
    assert!(inverse(&i3).unwrap().sub(&i3).frobenius_norm() <= 1e-14);

    let d = CMatrix::diag_re(&[2.0, 4.0]);
    let dinv = inverse(&d).unwrap();
    assert!(dinv.sub(&CMatrix::diag_re(&[0.5, 0.25])).frobenius_norm() <= 1e-14);
}

#[test]
fn inverse_residual_random() {
    let a = random_gaussian(5, 6, 5, 5).add(&CMatrix::identity(5).scale_re(4.0));
    let ainv = inverse(&a).unwrap();
    let resid = op_norm(&a.mul(&ainv).sub(&CMatrix::identity(5))).unwrap();
    assert!(resid <= 1e-10, "inverse residual {resid:.3e}");
}

#[test]
fn inverse_near_singular_reports_sigma() {
    let a = CMatrix::diag_re(&[1.0, 1e-15]);
    match inverse(&a) {
        Err(Error::NearSingular { sigma_min, .. }) => {
            assert_close(sigma_min, 1e-15, 1e-20, "reported sigma_min");
        }
        other => panic!("expected NearSingular, got {other:?}"),
    }
}

#[test]
fn random_unitary_is_unitary() {
    for n in [1, 4, 8] {
        let u = random_unitary(42, n);
        let resid = op_norm(&u.gram().sub(&CMatrix::identity(n))).unwrap();
        assert!(resid <= 1e-12, "U^H U - I residual {resid:.3e} at n={n}");
    }
}

#[test]
fn random_unitary_scalar_is_unimodular() {
    let u = random_unitary(9, 1);
    assert_close(u[(0, 0)].norm(), 1.0, 1e-14, "modulus of 1x1 unitary");
}

#[test]
fn random_generators_deterministic() {
    assert_eq!(random_unitary(1234, 5), random_unitary(1234, 5));
    assert_eq!(
        random_strict_contraction(1234, 5, 0.7),
        random_strict_contraction(1234, 5, 0.7)
    );
    assert_ne!(random_unitary(1234, 5), random_unitary(1235, 5));
}

#[test]
fn random_contraction_norm_bound() {
    for seed in 0..10u64 {
        let a = random_strict_contraction(seed, 4, 0.5);
        assert!(op_norm(&a).unwrap() <= 0.5, "contraction norm exceeded");
    }
    let s = random_strict_contraction(3, 1, 0.9);
    assert!(s[(0, 0)].norm() <= 0.9);
}

#[test]
fn unitary_invariance_of_op_norm() {
    let a = random_gaussian(8, 3, 6, 6);
    let u = random_unitary(8, 6);
    let conj = u.adjoint().mul(&a).mul(&u);
    assert_close(
        op_norm(&conj).unwrap(),
        op_norm(&a).unwrap(),
        1e-10,
        "unitary invariance",
    );
}

#[test]
fn svd_reconstructs() {
    let a = random_gaussian(15, 2, 6, 4);
    let s = decomp::svd(&a);
    let mut us = s.u.clone();
    for j in 0..s.sigma.len() {
        for i in 0..us.rows() {
            us[(i, j)] *= s.sigma[j];
        }
    }
    let re = us.mul(&s.v.adjoint());
    assert!(re.sub(&a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
    // Factors orthonormal.
    assert!(s.u.gram().sub(&CMatrix::identity(4)).frobenius_norm() <= 1e-12);
    assert!(s.v.gram().sub(&CMatrix::identity(4)).frobenius_norm() <= 1e-12);
}

#[test]
fn svd_handles_rank_deficiency() {
    let a = random_gaussian(31, 2, 5, 2);
    let wide = a.mul(&a.adjoint()); // rank 2 in a 5x5
    let sv = decomp::singular_values(&wide);
    assert!(sv[2] <= 1e-12 * sv[0]);
}

#[test]
fn qr_factors() {
    let a = random_gaussian(12, 4, 6, 3);
    let (q, r) = decomp::qr(&a);
    assert!(q.gram().sub(&CMatrix::identity(6)).frobenius_norm() <= 1e-12);
    assert!(q.mul(&r).sub(&a).frobenius_norm() <= 1e-12 * a.frobenius_norm());
    for j in 0..3 {
        for i in j + 1..6 {
            assert!(r[(i, j)].norm() <= 1e-12, "R not triangular at ({i},{j})");
        }
    }
}

#[test]
fn orthonormal_complement_spans() {
    let a = random_gaussian(19, 5, 6, 2);
    let (q, _) = decomp::qr(&a);
    let basis = q.block(0, 0, 6, 2);
    let comp = decomp::orthonormal_complement(&basis);
    assert_eq!((comp.rows(), comp.cols()), (6, 4));
    assert!(comp.gram().sub(&CMatrix::identity(4)).frobenius_norm() <= 1e-12);
    assert!(basis.adjoint_mul(&comp).frobenius_norm() <= 1e-12);
}

#[test]
fn det_matches_diag_and_product_rule() {
    let d = det(&CMatrix::diag(&[c(2.0, 0.0), c(0.0, 3.0)]));
    assert!((d - c(0.0, 6.0)).norm() <= 1e-14);
    let a = random_gaussian(4, 7, 4, 4);
    let b = random_gaussian(4, 8, 4, 4);
    let lhs = det(&a.mul(&b));
    let rhs = det(&a) * det(&b);
    assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
}

#[test]
fn lstsq_exact_and_residual() {
    let a = random_gaussian(25, 1, 6, 3);
    let x = random_gaussian(25, 2, 3, 1);
    let b = a.mul(&x);
    let sol = decomp::lstsq(&a, &b, 1e-12);
    assert!(sol.residual <= 1e-10);
    assert!(sol.x.sub(&x).frobenius_norm() <= 1e-9);
    assert_eq!(sol.rank, 3);
}

#[test]
fn matrix_json_schema() {
    let m = CMatrix::new(1, 2, vec![c(1.0, -2.0), c(0.5, 0.0)]);
    let s = serde_json::to_string(&m).unwrap();
    assert_eq!(s, r#"{"rows":1,"cols":2,"data":[[1.0,-2.0],[0.5,0.0]]}"#);
    let back: CMatrix = serde_json::from_str(&s).unwrap();
    assert_eq!(back, m);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prop_direct_sum_norm(seed in 0u64..5000, na in 1usize..5, nb in 1usize..5) {
        let a = random_gaussian(seed, 101, na, na);
        let b = random_gaussian(seed, 102, nb, nb);
        let lhs = op_norm(&direct_sum(&a, &b)).unwrap();
        let rhs = op_norm(&a).unwrap().max(op_norm(&b).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn prop_kron_mixed_product(seed in 0u64..5000) {
        let a = random_gaussian(seed, 111, 2, 2);
        let b = random_gaussian(seed, 112, 2, 2);
        let xm = random_gaussian(seed, 113, 2, 2);
        let y = random_gaussian(seed, 114, 2, 2);
        let lhs = kron(&a, &b).mul(&kron(&xm, &y));
        let rhs = kron(&a.mul(&xm), &b.mul(&y));
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-12 * (1.0 + rhs.frobenius_norm()));
    }

    #[test]
    fn prop_inverse_two_sided(seed in 0u64..5000, n in 1usize..6) {
        let a = random_gaussian(seed, 121, n, n).add(&CMatrix::identity(n).scale_re(3.0));
        let ainv = inverse(&a).unwrap();
        let i = CMatrix::identity(n);
        prop_assert!(op_norm(&a.mul(&ainv).sub(&i)).unwrap() <= 1e-10);
        prop_assert!(op_norm(&ainv.mul(&a).sub(&i)).unwrap() <= 1e-10);
    }
}
