//! Fejér-mean functional calculus.
//!
//! Substituting a contraction `U` into a matrix power series by Cesàro
//! summation of the partial sums: the example compares the summed value with
//! the closed form available for symmetrized points and runs the strict norm
//! check (a von Neumann-type bound keeps `‖g(U)‖` below the sup norm of `g`).
//!
//! Run: `cargo run --example functional_calculus`

use ncsym::funcalc::{closed_form_symmetrized, theta, vn_norm_check, FejerPlan};
use ncsym::mat::{self, random_strict_contraction, random_unitary};
use ncsym::ncfun::GradedPoint;
use ncsym::symmap::symmetrize_default;

fn main() {
    let x = GradedPoint::pair(
        random_strict_contraction(21, 2, 0.8),
        random_strict_contraction(22, 2, 0.8),
    )
    .unwrap();
    let s = symmetrize_default(&x).unwrap();
    let u = random_unitary(23, 6);
    let plan = FejerPlan::default();

    let out = theta(&s.series, &u, &plan).unwrap();
    println!(
        "Fejér summation of a {}-term series: converged at order {} (budget {})",
        s.series.len(),
        out.achieved_k,
        plan.max_k
    );
    println!("  raw Fejér mean still {:.2e} from the limit at that order", out.fejer_gap);

    let closed = closed_form_symmetrized(&x, &u).unwrap();
    println!(
        "  summed value vs closed form u⊗1 + (v⊗U)(1-u⊗U)^(-1)(v⊗1): gap {:.2e}",
        mat::op_norm(&out.value.sub(&closed)).unwrap()
    );

    let check = vn_norm_check(&s.series, &u, &plan).unwrap();
    println!(
        "  ‖g(U)‖ = {:.6}, strictly inside the unit ball: {} (slack {:.1e})",
        check.norm, check.strict, check.slack
    );
}
