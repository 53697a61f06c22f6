//! Command implementations behind the `ncsym` binary: each returns an exit
//! code and the JSON report it printed, so they are directly testable.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 infeasible answer,
//! 4 numerical stage failure.

use crate::error::Error;
use crate::freepoly::{self, Expressibility};
use crate::realize::{self, GradedMap, PipelineConfig, SampleDesign};
use crate::suite;
use serde::Serialize;
use serde_json::json;
use std::collections::BTreeMap;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_STAGE_FAILURE: i32 = 4;

/// Seed and tolerance bundle shared by the numerical subcommands. All
/// randomness flows from `seed`: instance `i` of any sweep derives its
/// generator seeds from `seed` by fixed affine maps, and independent uses
/// within one instance use separate ChaCha streams.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
    pub levels: Vec<usize>,
    pub k_half_dim: usize,
    /// Criterion selection for the suite; `None` means all.
    pub checks: Option<Vec<usize>>,
    /// Rows in the suite's per-seed pipeline sweep table.
    pub sweep: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 1,
            tolerances: BTreeMap::new(),
            levels: vec![1, 2, 3],
            k_half_dim: 2,
            checks: None,
            sweep: 0,
        }
    }
}

fn error_json(code: i32, err: &Error) -> (i32, String) {
    let body = match err {
        Error::Parse { line, col, msg } => json!({
            "error": "parse",
            "line": line,
            "col": col,
            "message": msg,
        }),
        other => json!({
            "error": "invalid",
            "message": other.to_string(),
        }),
    };
    (code, serde_json::to_string_pretty(&body).unwrap())
}

/// Decide expressibility of a polynomial in a generator set up to a degree
/// bound. Exit 0 with the decomposition, 3 with the infeasibility residual,
/// 2 on parse errors.
pub fn cmd_express(target_text: &str, generator_texts: &[String], degree_bound: usize) -> (i32, String) {
    let target = match freepoly::parse_poly(target_text) {
        Ok(p) => p,
        Err(e) => return error_json(EXIT_USAGE, &e),
    };
    let mut generators = Vec::new();
    for text in generator_texts {
        match freepoly::parse_poly(text) {
            Ok(p) => generators.push(p),
            Err(e) => return error_json(EXIT_USAGE, &e),
        }
    }
    // Align letter counts: parsing infers each polynomial's arity separately.
    let d = generators
        .iter()
        .map(|g| g.letters())
        .chain(std::iter::once(target.letters()))
        .max()
        .unwrap_or(2);
    let lift = |p: &freepoly::FreePoly| {
        freepoly::FreePoly::from_terms(d, p.terms().map(|(w, &c)| (w.clone(), c)))
    };
    let target = lift(&target);
    let generators: Vec<_> = generators.iter().map(lift).collect();

    match freepoly::expressibility(&target, &generators, degree_bound) {
        Ok(Expressibility::Expressible(dec)) => {
            #[derive(Serialize)]
            struct Term {
                product: Vec<usize>,
                coeff: [f64; 2],
            }
            let terms: Vec<Term> = dec
                .products
                .iter()
                .map(|(seq, c)| Term { product: seq.clone(), coeff: [c.re, c.im] })
                .collect();
            let body = json!({
                "expressible": true,
                "residual": dec.residual,
                "decomposition": terms,
                "target": target.to_string(),
            });
            (EXIT_OK, serde_json::to_string_pretty(&body).unwrap())
        }
        Ok(Expressibility::Infeasible { residual }) => {
            let body = json!({
                "expressible": false,
                "residual": residual,
                "target": target.to_string(),
            });
            (EXIT_INFEASIBLE, serde_json::to_string_pretty(&body).unwrap())
        }
        Err(e) => error_json(EXIT_USAGE, &e),
    }
}

/// Generate a seeded instance, run the realization pipeline, and report the
/// stage ledger. Exit 0 when every stage is within tolerance, 4 otherwise
/// (the JSON carries the failing stage tag).
pub fn cmd_pipeline(cfg: &RunConfig) -> (i32, String) {
    let (phi, model) = match realize::gen_symmetric_colligation(
        cfg.seed,
        cfg.k_half_dim,
        &cfg.levels,
        &SampleDesign::default(),
    ) {
        Ok(pair) => pair,
        Err(e) => return error_json(EXIT_USAGE, &e),
    };
    let pipeline_cfg = PipelineConfig {
        tolerances: cfg.tolerances.clone(),
        ..Default::default()
    };
    let outcome = match realize::run_pipeline(&phi as &dyn GradedMap, &model, &pipeline_cfg) {
        Ok(o) => o,
        Err(e) => {
            let stage = match &e {
                Error::Stage { stage, .. } => *stage,
                _ => "setup",
            };
            let body = json!({
                "error": "stage",
                "stage": stage,
                "message": e.to_string(),
                "seed": cfg.seed,
            });
            return (EXIT_STAGE_FAILURE, serde_json::to_string_pretty(&body).unwrap());
        }
    };
    let failing = outcome.report.failing_stage().map(str::to_string);
    let body = json!({
        "seed": cfg.seed,
        "k_half_dim": cfg.k_half_dim,
        "levels": cfg.levels,
        "report": outcome.report,
        "failed_stage": failing,
    });
    let code = if outcome.report.all_pass() { EXIT_OK } else { EXIT_STAGE_FAILURE };
    (code, serde_json::to_string_pretty(&body).unwrap())
}

/// Run the acceptance battery (optionally a selection) plus an optional
/// per-seed pipeline sweep table. Exit 0 iff every selected criterion passes;
/// an empty selection is a usage error (exit 2).
pub fn cmd_suite(cfg: &RunConfig) -> (i32, String) {
    let ids = match &cfg.checks {
        None => suite::all_ids(),
        Some(list) if list.is_empty() => {
            let body = json!({
                "error": "usage",
                "message": "empty battery selection: pass at least one criterion id (1-12)",
            });
            return (EXIT_USAGE, serde_json::to_string_pretty(&body).unwrap());
        }
        Some(list) => {
            if list.iter().any(|id| !(1..=12).contains(id)) {
                let body = json!({
                    "error": "usage",
                    "message": "criterion ids must be between 1 and 12",
                });
                return (EXIT_USAGE, serde_json::to_string_pretty(&body).unwrap());
            }
            list.clone()
        }
    };

    let results = suite::run_criteria(cfg.seed, &ids);
    let all_passed = results.iter().all(|r| r.passed);
    let sweep = if cfg.sweep > 0 {
        Some(suite::end_to_end_sweep(cfg.seed, cfg.sweep))
    } else {
        None
    };
    let body = json!({
        "seed": cfg.seed,
        "criteria": results,
        "all_passed": all_passed,
        "sweep": sweep,
    });
    let code = if all_passed { EXIT_OK } else { EXIT_STAGE_FAILURE };
    (code, serde_json::to_string_pretty(&body).unwrap())
}
