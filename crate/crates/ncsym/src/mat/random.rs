//! Seeded random generators.
//!
//! All randomness flows from 64-bit seeds through ChaCha8 streams: the seed
//! keys the generator and a stream id separates independent uses, so any
//! report is reproducible from one number.

use super::{decomp, CMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// ChaCha8 generator keyed by `seed` on stream `stream`.
pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Matrix of independent standard complex Gaussians.
pub fn random_gaussian(seed: u64, stream: u64, rows: usize, cols: usize) -> CMatrix {
    let mut rng = seeded_rng(seed, stream);
    CMatrix::from_fn(rows, cols, |_, _| gaussian(&mut rng))
}

/// Haar-style random unitary: QR of a seeded complex Gaussian matrix with the
/// R diagonal phases absorbed. Deterministic for a fixed seed;
/// `‖U^H U - I‖ ≤ 1e-12`.
pub fn random_unitary(seed: u64, n: usize) -> CMatrix {
    assert!(n >= 1, "random_unitary: n must be at least 1");
    let g = random_gaussian(seed, STREAM_UNITARY, n, n);
    let (q, r) = decomp::qr(&g);
    // Fix column phases so the factorization has positive R diagonal.
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Seeded strict contraction: a complex Gaussian rescaled to operator norm
/// `r * rho` with a seeded `rho` in (0, 1], so the result has norm at most `r`.
pub fn random_strict_contraction(seed: u64, n: usize, r: f64) -> CMatrix {
    assert!(n >= 1, "random_strict_contraction: n must be at least 1");
    assert!(0.0 < r && r < 1.0, "random_strict_contraction: r must be in (0,1)");
    let mut rng = seeded_rng(seed, STREAM_CONTRACTION);
    // rho in (0, 1], pulled slightly inside 1 so rescaling rounding cannot
    // push the norm past r.
    let rho = (1.0 - rng.gen::<f64>()).min(1.0 - 1e-12);
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(&mut rng));
    let norm = decomp::singular_values(&g)[0];
    if norm == 0.0 {
        return CMatrix::zeros(n, n);
    }
    g.scale_re(r * rho / norm)
}

pub(crate) const STREAM_UNITARY: u64 = 1;
pub(crate) const STREAM_CONTRACTION: u64 = 2;
