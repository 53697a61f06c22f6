//! Linear fractional transformations and the Redheffer star product.
//!
//! For a contractive 2x2 block matrix `p` and a contraction `X`, the lower
//! map `p22 + p21 X (1 - p11 X)^{-1} p12` is again a contraction, its defect
//! `1 - F^H F` decomposes into two positive terms, and the star product of
//! two colligations composes their upper maps.
//!
//! Run: `cargo run --example linear_fractional`

use ncsym::linfrac::{f_lower, f_upper, realization_residual, redheffer, BlockDims, Colligation};
use ncsym::mat::{self, random_strict_contraction};

fn contraction_colligation(seed: u64, a: usize, b: usize) -> Colligation {
    let m = random_strict_contraction(seed, a + b, 0.95);
    Colligation::new(
        BlockDims { h1: a, k1: a, h2: b, k2: b },
        m.block(0, 0, a, a),
        m.block(0, a, a, b),
        m.block(a, 0, b, a),
        m.block(a, a, b, b),
    )
    .unwrap()
}

fn main() {
    let p = contraction_colligation(6, 3, 2);
    let x = random_strict_contraction(9, 3, 0.9);

    let f = f_lower(&p, &x).unwrap();
    println!("‖p‖ = {:.6}, ‖F_lower(p, X)‖ = {:.6}", p.norm().unwrap(), mat::op_norm(&f).unwrap());
    println!("defect identity residual: {:.2e}", realization_residual(&p, &x).unwrap());

    // Star product: the upper map of b ⋆ a is the composition.
    let b = contraction_colligation(11, 2, 3);
    let a = contraction_colligation(12, 3, 2);
    let ba = redheffer(&b, &a).unwrap();
    let arg = random_strict_contraction(13, 2, 0.9);
    let composed = f_upper(&b, &f_upper(&a, &arg).unwrap()).unwrap();
    let direct = f_upper(&ba, &arg).unwrap();
    println!(
        "star-product composition gap: {:.2e}",
        mat::op_norm(&direct.sub(&composed)).unwrap()
    );
}
