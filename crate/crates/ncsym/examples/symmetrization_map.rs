//! The symmetrization map on the biball.
//!
//! A pair of contractions `(x1, x2)` maps to the series
//! `(u, v^2, vuv, vu^2v, ...)` with `u = (x1+x2)/2`, `v = (x1-x2)/2`. The
//! example prints the leading coefficients, checks the series against its
//! rational generating function, and verifies the norm identity of the
//! paired block `[u v; v u]`.
//!
//! Run: `cargo run --example symmetrization_map`

use ncsym::mat::{self, random_strict_contraction};
use ncsym::ncfun::GradedPoint;
use ncsym::symmap::{generating_value, pair_block, sup_norm, symmetrize_default, SUP_NORM_GRID};
use num_complex::Complex64;

fn main() {
    let n = 3;
    let x = GradedPoint::pair(
        random_strict_contraction(42, n, 0.8),
        random_strict_contraction(43, n, 0.8),
    )
    .unwrap();

    let s = symmetrize_default(&x).unwrap();
    println!(
        "symmetrized a level-{n} pair: {} series coefficients, tail bound {:.2e}",
        s.series.len(),
        s.series.tail_bound
    );
    for j in 0..4 {
        println!("  ‖coeff {j}‖ = {:.6}", mat::op_norm(&s.series.coeff(j)).unwrap());
    }

    // Series vs closed form at a boundary point.
    let z = Complex64::new(0.6, 0.8);
    let series_val = s.series.eval_at(z);
    let closed = generating_value(&x, z).unwrap();
    println!(
        "series vs generating function at z = {z}: gap {:.2e}",
        mat::op_norm(&series_val.sub(&closed)).unwrap()
    );

    // Norm identity of the paired block.
    let q_norm = mat::op_norm(&pair_block(&x)).unwrap();
    let max_norm = x.max_norm().unwrap();
    println!("‖[u v; v u]‖ = {q_norm:.12}");
    println!("max(‖x1‖,‖x2‖) = {max_norm:.12}  (gap {:.2e})", (q_norm - max_norm).abs());

    // The image stays strictly inside the unit ball of the sup norm.
    let sup = sup_norm(&s.series, SUP_NORM_GRID).unwrap();
    println!("sup-norm estimate of the image: {sup:.6} < 1");
}
