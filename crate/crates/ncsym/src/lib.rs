//! Symmetric functions of two noncommuting variables, at finite matrix scale.
//!
//! Every symmetric polynomial in two *commuting* variables is a polynomial in
//! `z + w` and `zw`. For noncommuting variables no finite generating set
//! exists, and this crate builds the machinery that replaces it: a
//! symmetrization map sending a pair of matrices into an infinite coefficient
//! sequence (kept here as a tail-bounded truncation), and a transfer-function
//! realization expressing any bounded symmetric graded function as a linear
//! fractional map of a functional calculus applied to that sequence — with
//! every identity verified numerically.
//!
//! Modules:
//!
//! - [`mat`] — dense complex matrix kernel: arithmetic, Kronecker products,
//!   SVD-based norms and inverses, seeded random generators;
//! - [`freepoly`] — free noncommutative polynomials: evaluation on matrix
//!   tuples, the letter exchange, bounded-degree expressibility testing;
//! - [`ncfun`] — graded points, the biball, and a sampling verifier for the
//!   direct-sum / similarity / symmetry axioms of graded functions;
//! - [`symmap`] — the symmetrization map, its generating function, the
//!   paired-block norm identity, and sup-norm estimates;
//! - [`linfrac`] — upper/lower linear fractional transformations, graded
//!   versions, the defect identity, and the Redheffer star product;
//! - [`funcalc`] — Fejér-mean functional calculus with a strict von
//!   Neumann-type norm check;
//! - [`lurking`] — the lurking-isometry solver for equal-Gramian families;
//! - [`realize`] — the end-to-end realization pipeline with its stage
//!   ledger, instance generator, and the non-uniqueness witness;
//! - [`suite`] — the acceptance battery shared by the test suite and the CLI;
//! - [`cli`] — testable implementations of the `ncsym` subcommands.
//!
//! ## Examples
//!
//! One runnable example per capability lives in `examples/`:
//!
//! ```text
//! cargo run --example wolf_inexpressibility  # bounded-degree expressibility
//! cargo run --example symmetrization_map     # the map, its series and norms
//! cargo run --example nc_function_checks     # graded-function axiom verifier
//! cargo run --example linear_fractional      # LFTs, defect identity, star product
//! cargo run --example functional_calculus    # Fejér summation vs closed form
//! cargo run --example lurking_isometry       # hidden-unitary recovery
//! cargo run --example realization_pipeline   # end-to-end factorization
//! cargo run --example nonuniqueness          # the determinant functional
//! ```
//!
//! The `ncsym` binary exposes the same machinery as `express`, `pipeline`
//! and `suite` subcommands; the acceptance battery runs with
//! `cargo test --test acceptance -- --nocapture`.

pub mod cli;
pub mod error;
pub mod freepoly;
pub mod funcalc;
pub mod linfrac;
pub mod lurking;
pub mod mat;
pub mod ncfun;
pub mod realize;
pub mod suite;
pub mod symmap;

pub use error::{Error, Result};
