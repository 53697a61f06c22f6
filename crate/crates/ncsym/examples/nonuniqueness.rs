//! A determinant functional that vanishes on every symmetrized point yet is
//! not identically zero — so the factorization through the symmetrization
//! map is not unique without the direct-sum axiom, which this functional
//! visibly breaks.
//!
//! Run: `cargo run --example nonuniqueness`

use ncsym::mat::{self, random_strict_contraction};
use ncsym::ncfun::GradedPoint;
use ncsym::realize::nonuniqueness_phi0;
use ncsym::symmap::{symmetrize_default, DiscAlgElem};
use num_complex::Complex64;

fn main() {
    let z0 = Complex64::new(0.3, 0.0);

    // Vanishes on symmetrized biball points of any level.
    for (seed, n) in [(1u64, 1usize), (2, 2), (3, 3)] {
        let x = GradedPoint::pair(
            random_strict_contraction(10 * seed, n, 0.8),
            random_strict_contraction(10 * seed + 1, n, 0.8),
        )
        .unwrap();
        let s = symmetrize_default(&x).unwrap();
        let val = nonuniqueness_phi0(&s.series, z0).unwrap();
        println!("level {n}: ‖functional on symmetrized point‖ = {:.2e}", mat::op_norm(&val).unwrap());
    }

    // Non-zero elsewhere: g(z) = z^2/2 gives exactly z0^2/2.
    let g = DiscAlgElem::scalar_series(&[
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.5, 0.0),
    ]);
    let val = nonuniqueness_phi0(&g, z0).unwrap();
    println!("on g(z) = z^2/2 at z0 = 0.3: {:.6} (exactly 0.045)", val[(0, 0)].re);

    // And it does not respect direct sums.
    let ga = DiscAlgElem::scalar_series(&[
        Complex64::new(0.2, 0.0),
        Complex64::new(0.3, 0.1),
        Complex64::new(0.1, 0.0),
    ]);
    let gb = DiscAlgElem::scalar_series(&[
        Complex64::new(-0.1, 0.0),
        Complex64::new(0.25, 0.0),
        Complex64::new(0.4, -0.1),
    ]);
    let on_sum = nonuniqueness_phi0(&ga.direct_sum(&gb), z0).unwrap();
    let blockwise = mat::direct_sum(
        &nonuniqueness_phi0(&ga, z0).unwrap(),
        &nonuniqueness_phi0(&gb, z0).unwrap(),
    );
    println!(
        "direct-sum violation: ‖functional(g ⊕ h) - functional(g) ⊕ functional(h)‖ = {:.4}",
        mat::op_norm(&on_sum.sub(&blockwise)).unwrap()
    );
}
