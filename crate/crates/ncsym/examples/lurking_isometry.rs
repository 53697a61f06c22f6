//! The lurking-isometry solver.
//!
//! Two vector families with equal Gramians are related by a partial isometry;
//! the solver recovers it from stacked samples. Here the second family is a
//! hidden unitary applied to the first, and the solver reconstructs that
//! unitary on the span — while a Gram perturbation is detected and rejected.
//!
//! Run: `cargo run --example lurking_isometry`

use ncsym::lurking::{collect_vectors, solve, VectorFamily, VectorLabel};
use ncsym::mat::{self, random_gaussian, random_strict_contraction, random_unitary, CMatrix};
use ncsym::ncfun::GradedPoint;
use num_complex::Complex64;

fn main() {
    let k = 4;
    let hidden = random_unitary(31, k);
    let a = random_gaussian(32, 1, k, k);
    let b = random_gaussian(32, 2, k, k);

    // A graded map C^n -> C^n ⊗ C^k and its image under the hidden unitary.
    let f = |x: &GradedPoint| -> ncsym::Result<CMatrix> {
        let n = x.level();
        let full = mat::kron(x.component(0), &a).add(&mat::kron(x.component(1), &b));
        let mut out = CMatrix::zeros(n * k, n);
        for i in 0..n * k {
            for j in 0..n {
                out[(i, j)] = full[(i, j * k)];
            }
        }
        Ok(out)
    };
    let g = |x: &GradedPoint| -> ncsym::Result<CMatrix> {
        Ok(mat::kron(&CMatrix::identity(x.level()), &hidden).mul(&f(x)?))
    };

    let points: Vec<GradedPoint> = (0..5)
        .map(|i| {
            GradedPoint::pair(
                random_strict_contraction(50 + 2 * i, 2, 0.8),
                random_strict_contraction(51 + 2 * i, 2, 0.8),
            )
            .unwrap()
        })
        .collect();

    let p_fam = collect_vectors(&f, &points, k).unwrap();
    let q_fam = collect_vectors(&g, &points, k).unwrap();
    println!("collected {} vector pairs in dimension {k}", p_fam.len());

    let sol = solve(&p_fam, &q_fam, true).unwrap();
    let mp = p_fam.as_matrix();
    let recovery = mat::op_norm(&sol.j.mul(&mp).sub(&hidden.mul(&mp))).unwrap();
    println!(
        "solved: rank {}, unitary: {}, gram residual {:.2e}, recovery gap on span {:.2e}",
        sol.rank, sol.unitary, sol.gram_residual, recovery
    );

    // A Gram mismatch beyond tolerance is a hypothesis violation.
    let mut p1 = VectorFamily::new(2);
    let mut q1 = VectorFamily::new(2);
    let label = VectorLabel { sample: 0, level: 1, row_block: 0, basis_index: 0 };
    p1.push(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], label.clone());
    q1.push(vec![Complex64::new(1.001, 0.0), Complex64::new(0.0, 0.0)], label);
    match solve(&p1, &q1, false) {
        Err(e) => println!("perturbed family rejected: {e}"),
        Ok(_) => println!("unexpected acceptance"),
    }
}
