//! Bounded-degree expressibility in a generator set.
//!
//! `zw + wz` and `(z+w)^2` are combinations of `z+w` and `zw+wz`, but the
//! symmetric polynomial `zwz + wzw` is not — the least-squares residual of
//! the best attempt is 1/sqrt(2), far from zero.
//!
//! Run: `cargo run --example wolf_inexpressibility`

use ncsym::freepoly::{expressibility, parse_poly, Expressibility};

fn main() {
    let generators = vec![parse_poly("z + w").unwrap(), parse_poly("z*w + w*z").unwrap()];

    for (text, bound) in [("z*w + w*z", 2), ("z*z + z*w + w*z + w*w", 2), ("z*w*z + w*z*w", 3)] {
        let target = parse_poly(text).unwrap();
        match expressibility(&target, &generators, bound).unwrap() {
            Expressibility::Expressible(dec) => {
                println!("{text}  =  combination of generator products (residual {:.2e}):", dec.residual);
                for (seq, coeff) in &dec.products {
                    let product = if seq.is_empty() {
                        "1".to_string()
                    } else {
                        seq.iter().map(|i| format!("g{}", i + 1)).collect::<Vec<_>>().join("*")
                    };
                    println!("    ({:+.3}{:+.3}i) * {product}", coeff.re, coeff.im);
                }
            }
            Expressibility::Infeasible { residual } => {
                println!("{text}  is NOT expressible up to degree {bound}: residual {residual:.6}");
            }
        }
    }
}
