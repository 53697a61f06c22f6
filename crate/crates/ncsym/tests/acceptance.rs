//! Acceptance battery: every headline identity at its pinned tolerance,
//! one pass/fail line per criterion.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use ncsym::suite::{self, CriterionResult};

const SEED: u64 = 1;

fn report(result: CriterionResult) {
    println!(
        "acceptance {:>2} ({}): {} — {} [{} ms]",
        result.id,
        result.name,
        if result.passed { "PASS" } else { "FAIL" },
        result.detail,
        result.elapsed_ms
    );
    assert!(result.passed, "criterion {} ({}) failed: {}", result.id, result.name, result.detail);
}

#[test]
fn criterion_01_wolf_inexpressibility() {
    report(suite::criterion_1_inexpressibility(SEED));
}

#[test]
fn criterion_02_pair_block_norm() {
    report(suite::criterion_2_pair_block_norm(SEED));
}

#[test]
fn criterion_03_symmetrize_nc_properties() {
    report(suite::criterion_3_symmetrize_properties(SEED));
}

#[test]
fn criterion_04_lft_defect_and_norm_bound() {
    report(suite::criterion_4_lft_identities(SEED));
}

#[test]
fn criterion_05_redheffer_composition() {
    report(suite::criterion_5_redheffer(SEED));
}

#[test]
fn criterion_06_harmonic_mean_identity() {
    report(suite::criterion_6_harmonic_identity(SEED));
}

#[test]
fn criterion_07_fejer_functional_calculus() {
    report(suite::criterion_7_fejer_calculus(SEED));
}

#[test]
fn criterion_08_lurking_solver() {
    report(suite::criterion_8_lurking(SEED));
}

#[test]
fn criterion_09_end_to_end_realization() {
    report(suite::criterion_9_end_to_end(SEED));
}

#[test]
fn criterion_10_cayley_identity() {
    report(suite::criterion_10_cayley(SEED));
}

#[test]
fn criterion_11_nonuniqueness_functional() {
    report(suite::criterion_11_nonuniqueness(SEED));
}

#[test]
fn criterion_12_determinism() {
    report(suite::criterion_12_determinism(SEED));
    // The suite command itself is also byte-stable across runs.
    let cfg = ncsym::cli::RunConfig {
        checks: Some(vec![1, 2, 5]),
        ..Default::default()
    };
    let (code_a, out_a) = ncsym::cli::cmd_suite(&cfg);
    let (code_b, out_b) = ncsym::cli::cmd_suite(&cfg);
    assert_eq!(code_a, 0);
    assert_eq!(code_b, 0);
    assert_eq!(out_a, out_b, "suite reports must be byte-identical for a fixed seed");
}
