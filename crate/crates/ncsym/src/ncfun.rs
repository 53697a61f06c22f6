//! Graded points, the biball, and a sampling-based verifier that tests any
//! graded-function oracle against the direct-sum, similarity and symmetry
//! axioms.
//!
//! The axioms hold exactly for the function classes implemented in this
//! crate, so residuals at machine precision are decisive; verification is by
//! sampling, not proof.

use crate::error::{Error, Result};
use crate::mat::{self, CMatrix};
use serde::Serialize;

/// A level `n` together with a `d`-tuple of `n x n` matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPoint {
    components: Vec<CMatrix>,
}

impl GradedPoint {
    /// Build from components; all must be square of the same positive size.
    pub fn new(components: Vec<CMatrix>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Invalid("graded point needs at least one component".into()));
        }
        let n = components[0].rows();
        if n == 0 {
            return Err(Error::Invalid("graded point level must be at least 1".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if c.rows() != n || c.cols() != n {
                return Err(Error::Dim(format!(
                    "component {i} is {}x{}, expected {n}x{n}",
                    c.rows(),
                    c.cols()
                )));
            }
        }
        Ok(GradedPoint { components })
    }

    /// Two-component point.
    pub fn pair(x1: CMatrix, x2: CMatrix) -> Result<Self> {
        GradedPoint::new(vec![x1, x2])
    }

    /// Scalar-level two-component point.
    pub fn scalar_pair(a: num_complex::Complex64, b: num_complex::Complex64) -> Self {
        GradedPoint::pair(CMatrix::scalar(a), CMatrix::scalar(b)).unwrap()
    }

    pub fn level(&self) -> usize {
        self.components[0].rows()
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &CMatrix {
        &self.components[i]
    }

    pub fn components(&self) -> &[CMatrix] {
        &self.components
    }

    /// Componentwise direct sum.
    pub fn direct_sum(&self, other: &GradedPoint) -> Result<GradedPoint> {
        if self.arity() != other.arity() {
            return Err(Error::Arity { poly: self.arity(), point: other.arity() });
        }
        GradedPoint::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| mat::direct_sum(a, b))
                .collect(),
        )
    }

    /// Componentwise similarity `s^{-1} x s`.
    pub fn conjugate(&self, s: &CMatrix) -> Result<GradedPoint> {
        let sinv = mat::inverse(s)?;
        GradedPoint::new(
            self.components
                .iter()
                .map(|c| sinv.mul(c).mul(s))
                .collect(),
        )
    }

    /// Exchange the two components (arity 2 only).
    pub fn swap(&self) -> Result<GradedPoint> {
        if self.arity() != 2 {
            return Err(Error::NotTwoLetters(self.arity()));
        }
        GradedPoint::new(vec![self.components[1].clone(), self.components[0].clone()])
    }

    /// Largest component operator norm.
    pub fn max_norm(&self) -> Result<f64> {
        let mut m = 0.0f64;
        for c in &self.components {
            m = m.max(mat::op_norm(c)?);
        }
        Ok(m)
    }
}

/// Membership in the open biball: both components of operator norm < 1.
pub fn in_biball(x: &GradedPoint) -> bool {
    x.arity() == 2 && x.max_norm().map(|n| n < 1.0).unwrap_or(false)
}

/// One verified property instance.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub sample: String,
    pub residual: f64,
    pub pass: bool,
}

/// Outcome of a property check over a sample family.
#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub checks: Vec<CheckRecord>,
    pub max_residual: f64,
}

impl PropertyReport {
    fn from_checks(checks: Vec<CheckRecord>) -> Self {
        let max_residual = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
        PropertyReport { checks, max_residual }
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn oracle_output<F>(f: &F, x: &GradedPoint) -> Result<CMatrix>
where
    F: Fn(&GradedPoint) -> Result<CMatrix>,
{
    let out = f(x)?;
    let n = x.level();
    if out.rows() != n || out.cols() != n {
        return Err(Error::Contract(format!(
            "graded oracle returned {}x{} at level {n}",
            out.rows(),
            out.cols()
        )));
    }
    Ok(out)
}

/// Check `f(M ⊕ N) = f(M) ⊕ f(N)` over all ordered sample pairs.
pub fn check_direct_sums<F>(f: &F, samples: &[GradedPoint], tol: f64) -> Result<PropertyReport>
where
    F: Fn(&GradedPoint) -> Result<CMatrix>,
{
    let mut checks = Vec::new();
    for (i, m) in samples.iter().enumerate() {
        for (j, n) in samples.iter().enumerate() {
            let sum = m.direct_sum(n)?;
            let lhs = oracle_output(f, &sum)?;
            let rhs = mat::direct_sum(&oracle_output(f, m)?, &oracle_output(f, n)?);
            let residual = mat::op_norm(&lhs.sub(&rhs))?;
            checks.push(CheckRecord {
                name: "direct_sum".into(),
                sample: format!("({i},{j})"),
                residual,
                pass: residual <= tol,
            });
        }
    }
    Ok(PropertyReport::from_checks(checks))
}

const SIMILARITY_EPS: f64 = 0.25;
const SIMILARITY_MAX_COND: f64 = 4.0;
const SIMILARITY_RETRIES: usize = 32;

/// Draw a similarity matrix `I + eps * G` with condition number at most 4 such
/// that the conjugated sample stays in the oracle's domain, shrinking `eps`
/// on retry.
fn admissible_similarity<D>(
    x: &GradedPoint,
    domain: &D,
    seed: u64,
) -> Result<(CMatrix, GradedPoint)>
where
    D: Fn(&GradedPoint) -> bool,
{
    let n = x.level();
    let mut eps = SIMILARITY_EPS;
    for retry in 0..SIMILARITY_RETRIES {
        let g = mat::random_gaussian(seed, 1000 + retry as u64, n, n);
        let s = CMatrix::identity(n).add(&g.scale_re(eps));
        let sv = mat::singular_values(&s);
        let cond = sv[0] / sv[sv.len() - 1].max(1e-300);
        if cond <= SIMILARITY_MAX_COND {
            if let Ok(conj) = x.conjugate(&s) {
                if domain(&conj) {
                    return Ok((s, conj));
                }
            }
        }
        eps *= 0.5;
    }
    Err(Error::DomainTooTight { retries: SIMILARITY_RETRIES })
}

/// Check `f(s^{-1} M s) = s^{-1} f(M) s` with seeded admissible similarities.
pub fn check_similarity<F, D>(
    f: &F,
    domain: &D,
    samples: &[GradedPoint],
    seed: u64,
    tol: f64,
) -> Result<PropertyReport>
where
    F: Fn(&GradedPoint) -> Result<CMatrix>,
    D: Fn(&GradedPoint) -> bool,
{
    let mut checks = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        let (s, conj) = admissible_similarity(x, domain, seed.wrapping_add(i as u64))?;
        let lhs = oracle_output(f, &conj)?;
        let sinv = mat::inverse(&s)?;
        let rhs = sinv.mul(&oracle_output(f, x)?).mul(&s);
        let residual = mat::op_norm(&lhs.sub(&rhs))?;
        checks.push(CheckRecord {
            name: "similarity".into(),
            sample: format!("{i}"),
            residual,
            pass: residual <= tol,
        });
    }
    Ok(PropertyReport::from_checks(checks))
}

/// Check `f(x1, x2) = f(x2, x1)` over the samples (arity 2).
pub fn check_symmetry<F>(f: &F, samples: &[GradedPoint], tol: f64) -> Result<PropertyReport>
where
    F: Fn(&GradedPoint) -> Result<CMatrix>,
{
    let mut checks = Vec::new();
    for (i, x) in samples.iter().enumerate() {
        let lhs = oracle_output(f, x)?;
        let rhs = oracle_output(f, &x.swap()?)?;
        let residual = mat::op_norm(&lhs.sub(&rhs))?;
        checks.push(CheckRecord {
            name: "symmetry".into(),
            sample: format!("{i}"),
            residual,
            pass: residual <= tol,
        });
    }
    Ok(PropertyReport::from_checks(checks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::freepoly::{parse_poly, FreePoly};
    use crate::mat::{random_strict_contraction, random_unitary};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn biball_samples(seed: u64, sizes: &[usize]) -> Vec<GradedPoint> {
        sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                GradedPoint::pair(
                    random_strict_contraction(seed + 2 * i as u64, n, 0.7),
                    random_strict_contraction(seed + 2 * i as u64 + 1, n, 0.7),
                )
                .unwrap()
            })
            .collect()
    }

    fn poly_oracle(p: FreePoly) -> impl Fn(&GradedPoint) -> crate::Result<CMatrix> {
        move |x| p.eval(x)
    }

    #[test]
    fn biball_membership() {
        let zero = GradedPoint::pair(CMatrix::zeros(3, 3), CMatrix::zeros(3, 3)).unwrap();
        assert!(in_biball(&zero));

        let boundary = GradedPoint::pair(CMatrix::identity(2), CMatrix::zeros(2, 2)).unwrap();
        assert!(!in_biball(&boundary), "norm exactly 1 is outside the open ball");

        let x = GradedPoint::pair(
            random_strict_contraction(4, 3, 0.8),
            random_strict_contraction(5, 3, 0.8),
        )
        .unwrap();
        assert!(in_biball(&x));
    }

    #[test]
    fn direct_sums_pass_for_polynomials() {
        let p = parse_poly("z*w*z + w*z*w + 0.5*z").unwrap();
        let samples = biball_samples(10, &[1, 2, 2]);
        let report = check_direct_sums(&poly_oracle(p), &samples, 1e-12).unwrap();
        assert!(report.all_pass(), "max residual {:.3e}", report.max_residual);
    }

    #[test]
    fn direct_sums_fail_for_trace() {
        // trace(M^1) * I is graded but not additive across blocks.
        let f = |x: &GradedPoint| -> crate::Result<CMatrix> {
            let t = x.component(0).trace();
            Ok(CMatrix::identity(x.level()).scale(t))
        };
        let a = GradedPoint::scalar_pair(c(0.3, 0.0), c(0.1, 0.0));
        let b = GradedPoint::scalar_pair(c(-0.2, 0.0), c(0.4, 0.0));
        let report = check_direct_sums(&f, &[a, b], 1e-9).unwrap();
        assert!(!report.all_pass());
        assert!(report.max_residual > 0.1);
    }

    #[test]
    fn empty_sample_list_passes_vacuously() {
        let p = parse_poly("z").unwrap();
        let report = check_direct_sums(&poly_oracle(p), &[], 1e-12).unwrap();
        assert!(report.all_pass());
        assert_eq!(report.max_residual, 0.0);
    }

    #[test]
    fn similarity_passes_for_polynomials() {
        let p = parse_poly("z*w + w*z + z*z").unwrap();
        let samples = biball_samples(21, &[2, 3]);
        let report = check_similarity(&poly_oracle(p), &|_| true, &samples, 7, 1e-9).unwrap();
        assert!(report.all_pass(), "max residual {:.3e}", report.max_residual);
    }

    #[test]
    fn similarity_fails_for_transpose() {
        let f = |x: &GradedPoint| -> crate::Result<CMatrix> { Ok(x.component(0).transpose()) };
        let samples = biball_samples(33, &[3]);
        let report = check_similarity(&f, &|_| true, &samples, 11, 1e-9).unwrap();
        assert!(!report.all_pass(), "transpose should break similarity");
    }

    #[test]
    fn similarity_identity_gives_zero_residual() {
        let p = parse_poly("z*w").unwrap();
        let x = biball_samples(40, &[2]).pop().unwrap();
        let f = poly_oracle(p);
        let lhs = f(&x.conjugate(&CMatrix::identity(2)).unwrap()).unwrap();
        let rhs = f(&x).unwrap();
        assert_eq!(lhs.sub(&rhs).frobenius_norm(), 0.0);
    }

    #[test]
    fn symmetry_checks() {
        let sym = parse_poly("z*w*z + w*z*w").unwrap();
        let asym = parse_poly("z*w").unwrap();
        let samples = biball_samples(55, &[2, 3]);

        let report = check_symmetry(&poly_oracle(sym), &samples, 1e-12).unwrap();
        assert!(report.all_pass());

        let report = check_symmetry(&poly_oracle(asym), &samples, 1e-9).unwrap();
        assert!(!report.all_pass(), "zw is not symmetric on generic samples");

        // Diagonal sample (x, x) has zero symmetry residual for any oracle.
        let x = random_strict_contraction(9, 2, 0.5);
        let diag = GradedPoint::pair(x.clone(), x).unwrap();
        let report = check_symmetry(&poly_oracle(parse_poly("z*w").unwrap()), &[diag], 1e-14).unwrap();
        assert!(report.all_pass());
    }

    #[test]
    fn product_of_passing_oracles_passes() {
        // Pointwise products of graded functions satisfy the same axioms.
        let p = parse_poly("z*w + w*z").unwrap();
        let q = parse_poly("z + w").unwrap();
        let fp = poly_oracle(p);
        let fq = poly_oracle(q);
        let prod = move |x: &GradedPoint| -> crate::Result<CMatrix> { Ok(fq(x)?.mul(&fp(x)?)) };
        let samples = biball_samples(60, &[2, 2, 3]);
        let tol = 1e-9;
        assert!(check_direct_sums(&prod, &samples, 2.0 * tol).unwrap().all_pass());
        assert!(check_similarity(&prod, &|_| true, &samples, 3, 2.0 * tol)
            .unwrap()
            .all_pass());
    }

    #[test]
    fn oracle_contract_violation_detected() {
        let f = |_: &GradedPoint| -> crate::Result<CMatrix> { Ok(CMatrix::identity(5)) };
        let samples = biball_samples(70, &[2]);
        match check_direct_sums(&f, &samples, 1e-9) {
            Err(crate::Error::Contract(_)) => {}
            other => panic!("expected contract violation, got {other:?}"),
        }
    }

    #[test]
    fn report_serializes() {
        let p = parse_poly("z").unwrap();
        let samples = biball_samples(80, &[1]);
        let report = check_symmetry(&poly_oracle(p), &samples, 1e-9).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("\"checks\""));
        assert!(json.contains("\"max_residual\""));
    }

    #[test]
    fn unitary_conjugation_stays_in_biball() {
        let x = biball_samples(91, &[3]).pop().unwrap();
        let u = random_unitary(12, 3);
        let conj = x.conjugate(&u).unwrap();
        assert!(in_biball(&conj));
    }
}
