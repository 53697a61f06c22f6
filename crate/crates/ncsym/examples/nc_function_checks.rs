//! Sampling-based verification of the graded-function axioms.
//!
//! A graded map respecting direct sums and similarities is determined by its
//! behaviour on matrix tuples of every size; the verifier samples those
//! axioms and reports residuals. Polynomial evaluation passes all three
//! checks when the polynomial is symmetric; `zw` fails the symmetry check.
//!
//! Run: `cargo run --example nc_function_checks`

use ncsym::freepoly::parse_poly;
use ncsym::mat::random_strict_contraction;
use ncsym::ncfun::{check_direct_sums, check_similarity, check_symmetry, GradedPoint};

fn main() {
    let samples: Vec<GradedPoint> = (0..4)
        .map(|i| {
            let n = 1 + (i % 3);
            GradedPoint::pair(
                random_strict_contraction(100 + 2 * i as u64, n, 0.7),
                random_strict_contraction(101 + 2 * i as u64, n, 0.7),
            )
            .unwrap()
        })
        .collect();

    for text in ["z*w*z + w*z*w", "z*w"] {
        let p = parse_poly(text).unwrap();
        let f = |x: &GradedPoint| p.eval(x);
        let ds = check_direct_sums(&f, &samples, 1e-12).unwrap();
        let sim = check_similarity(&f, &|_| true, &samples, 7, 1e-9).unwrap();
        let sym = check_symmetry(&f, &samples, 1e-12).unwrap();
        println!("{text}:");
        println!(
            "  direct sums: {} (max residual {:.2e})",
            if ds.all_pass() { "pass" } else { "FAIL" },
            ds.max_residual
        );
        println!(
            "  similarity:  {} (max residual {:.2e})",
            if sim.all_pass() { "pass" } else { "FAIL" },
            sim.max_residual
        );
        println!(
            "  symmetry:    {} (max residual {:.2e})",
            if sym.all_pass() { "pass" } else { "FAIL" },
            sym.max_residual
        );
    }
}
