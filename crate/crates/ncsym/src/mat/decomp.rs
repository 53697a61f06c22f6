//! Decompositions: one-sided Jacobi SVD, Householder QR, LU determinant,
//! least squares, orthonormal complements.
//!
//! One-sided Jacobi is used for the SVD because it delivers high relative
//! accuracy on the small dense matrices this crate works with, with fully
//! deterministic output.

use super::CMatrix;
use num_complex::Complex64;

/// Singular value decomposition `A = U diag(sigma) V^H`.
///
/// `u` is `m x r`, `v` is `n x r` with `r = min(m, n)`; `sigma` is sorted
/// descending. Columns whose singular value is exactly zero are zero columns
/// of `u`; callers that need an orthonormal basis must apply a rank cutoff.
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

const JACOBI_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 64;

/// One-sided Jacobi on the columns of `b` (m x n, any shape). Orthogonalizes
/// the columns in place while accumulating the right factor `v` (n x n).
fn jacobi_orthogonalize(b: &mut CMatrix, v: &mut CMatrix) {
    let n = b.cols();
    if n < 2 {
        return;
    }
    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut aa = 0.0;
                let mut bb = 0.0;
                let mut c = Complex64::new(0.0, 0.0);
                for k in 0..b.rows() {
                    let bi = b[(k, i)];
                    let bj = b[(k, j)];
                    aa += bi.norm_sqr();
                    bb += bj.norm_sqr();
                    c += bi.conj() * bj;
                }
                let cn = c.norm();
                if aa == 0.0 || bb == 0.0 || cn <= JACOBI_TOL * (aa * bb).sqrt() {
                    continue;
                }
                rotated = true;
                // Dephase so the 2x2 Gram block is real symmetric, then apply
                // the small-angle real rotation that zeroes it.
                let phase = c / cn; // c = phase * |c|
                let zeta = (aa - bb) / (2.0 * cn);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    -zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = t * cs;
                let pc = phase.conj();
                for k in 0..b.rows() {
                    let bi = b[(k, i)];
                    let bj = pc * b[(k, j)];
                    b[(k, i)] = bi * cs - bj * sn;
                    b[(k, j)] = bi * sn + bj * cs;
                }
                for k in 0..v.rows() {
                    let vi = v[(k, i)];
                    let vj = pc * v[(k, j)];
                    v[(k, i)] = vi * cs - vj * sn;
                    v[(k, j)] = vi * sn + vj * cs;
                }
            }
        }
        if !rotated {
            break;
        }
    }
}

/// Full SVD with `r = min(m, n)` retained columns.
pub fn svd(a: &CMatrix) -> Svd {
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let s = svd_tall(&a.adjoint());
        Svd {
            u: s.v,
            sigma: s.sigma,
            v: s.u,
        }
    }
}

fn svd_tall(a: &CMatrix) -> Svd {
    let (m, n) = (a.rows(), a.cols());
    let mut b = a.clone();
    let mut v = CMatrix::identity(n);
    jacobi_orthogonalize(&mut b, &mut v);

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n)
        .map(|j| (0..m).map(|i| b[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).unwrap());

    let mut u = CMatrix::zeros(m, n);
    let mut vs = CMatrix::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    for (new_j, &old_j) in order.iter().enumerate() {
        let s = norms[old_j];
        sigma.push(s);
        if s > 0.0 {
            for i in 0..m {
                u[(i, new_j)] = b[(i, old_j)] / s;
            }
        }
        for i in 0..n {
            vs[(i, new_j)] = v[(i, old_j)];
        }
    }
    Svd { u, sigma, v: vs }
}

/// Singular values only, sorted descending.
pub fn singular_values(a: &CMatrix) -> Vec<f64> {
    if a.is_empty() {
        return vec![];
    }
    svd(a).sigma
}

/// Householder QR: returns `(q, r)` with `q` m x m unitary and `r` m x n
/// upper triangular, `a = q * r`.
pub fn qr(a: &CMatrix) -> (CMatrix, CMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut r = a.clone();
    let mut q = CMatrix::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        // Householder vector for column k below the diagonal.
        let mut norm_sq = 0.0;
        for i in k..m {
            norm_sq += r[(i, k)].norm_sqr();
        }
        if norm_sq == 0.0 {
            continue;
        }
        let norm = norm_sq.sqrt();
        let x0 = r[(k, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase*|x| e_k avoids cancellation.
        let mut v: Vec<Complex64> = (k..m).map(|i| r[(i, k)]).collect();
        v[0] += phase * norm;
        let vnorm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm_sq == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm_sq;
        // r <- (I - tau v v^H) r on rows k..m
        for j in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..m - k {
                dot += v[i].conj() * r[(k + i, j)];
            }
            dot *= tau;
            for i in 0..m - k {
                let delta = dot * v[i];
                r[(k + i, j)] -= delta;
            }
        }
        // q <- q (I - tau v v^H)
        for row in 0..m {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in 0..m - k {
                dot += q[(row, k + i)] * v[i];
            }
            dot *= tau;
            for i in 0..m - k {
                let delta = dot * v[i].conj();
                q[(row, k + i)] -= delta;
            }
        }
    }
    (q, r)
}

/// Orthonormal basis of the orthogonal complement of the column span of `q0`,
/// where `q0` has (near-)orthonormal columns. Returns an `m x (m - r)` matrix.
pub fn orthonormal_complement(q0: &CMatrix) -> CMatrix {
    let (m, r) = (q0.rows(), q0.cols());
    if r >= m {
        return CMatrix::zeros(m, 0);
    }
    let (q, _) = qr(q0);
    q.block(0, r, m, m - r)
}

/// Determinant via LU with partial pivoting.
pub fn det_lu(a: &CMatrix) -> Complex64 {
    let n = a.rows();
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let mut lu = a.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let mut pivot = k;
        let mut best = lu[(k, k)].norm();
        for i in k + 1..n {
            let v = lu[(i, k)].norm();
            if v > best {
                best = v;
                pivot = i;
            }
        }
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            det = -det;
        }
        let d = lu[(k, k)];
        det *= d;
        for i in k + 1..n {
            let f = lu[(i, k)] / d;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let delta = f * lu[(k, j)];
                lu[(i, j)] -= delta;
            }
        }
    }
    det
}

/// Minimal-norm least squares solution of `A x = b` via the SVD with a
/// relative rank cutoff. Returns the solution and the residual `‖Ax - b‖`.
pub struct LstsqSolution {
    pub x: CMatrix,
    pub residual: f64,
    pub rank: usize,
}

pub fn lstsq(a: &CMatrix, b: &CMatrix, rel_cutoff: f64) -> LstsqSolution {
    assert_eq!(a.rows(), b.rows(), "lstsq: row mismatch");
    let s = svd(a);
    let smax = s.sigma.first().copied().unwrap_or(0.0);
    let cutoff = smax * rel_cutoff;
    let utb = s.u.adjoint_mul(b);
    let mut y = CMatrix::zeros(s.sigma.len(), b.cols());
    let mut rank = 0;
    for (i, &sig) in s.sigma.iter().enumerate() {
        if sig > cutoff && sig > 0.0 {
            rank += 1;
            for j in 0..b.cols() {
                y[(i, j)] = utb[(i, j)] / sig;
            }
        }
    }
    let x = s.v.mul(&y);
    let residual = a.mul(&x).sub(b).frobenius_norm();
    LstsqSolution { x, residual, rank }
}
