//! End-to-end orchestration with a per-stage residual ledger.

use super::{
    assemble_realization, averaged_relation_residual, cayley_residual, model_residual,
    nu_symmetry_residual, resolvent_relation_residual, solve_colligation, solve_unitary,
    split_relation_residual, verify_factorization, GradedMap, NcModel, Realization,
};
use crate::error::Result;
use crate::funcalc::FejerPlan;
use crate::linfrac::Colligation;
use crate::mat::CMatrix;
use serde::Serialize;
use std::collections::BTreeMap;

/// Tolerances and knobs for one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Per-stage overrides; unset stages use [`PipelineConfig::default_tol`].
    pub tolerances: BTreeMap<String, f64>,
    pub fejer: FejerPlan,
    /// Run on the zero-padded model (doubled model space).
    pub pad_model: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            tolerances: BTreeMap::new(),
            fejer: FejerPlan::default(),
            pad_model: false,
        }
    }
}

impl PipelineConfig {
    /// Default tolerance for a stage: 1e-8 everywhere except the held-out
    /// verification at 1e-6.
    pub fn default_tol(stage: &str) -> f64 {
        match stage {
            "holdout" => 1e-6,
            _ => 1e-8,
        }
    }

    pub fn tol(&self, stage: &str) -> f64 {
        self.tolerances
            .get(stage)
            .copied()
            .unwrap_or_else(|| Self::default_tol(stage))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageResidual {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub fit: f64,
    pub holdout: f64,
    pub fit_pass: bool,
    pub holdout_pass: bool,
}

/// JSON-serializable run record: the stage ledger, the realized pair, and
/// the verification residuals.
#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub stages: Vec<StageResidual>,
    pub p: Colligation,
    #[serde(rename = "U")]
    pub u: CMatrix,
    pub verify: VerifyReport,
    pub u_unitary: bool,
    pub t_rank: usize,
    pub warnings: Vec<String>,
}

impl PipelineReport {
    /// First stage (in pipeline order, then fit/holdout) whose residual
    /// exceeded its tolerance.
    pub fn failing_stage(&self) -> Option<&str> {
        for s in &self.stages {
            if !s.pass {
                return Some(&s.name);
            }
        }
        if !self.verify.fit_pass {
            return Some("fit");
        }
        if !self.verify.holdout_pass {
            return Some("holdout");
        }
        None
    }

    pub fn all_pass(&self) -> bool {
        self.failing_stage().is_none()
    }
}

pub struct PipelineOutcome {
    pub realization: Realization,
    pub report: PipelineReport,
}

/// Run the full pipeline on a model of `phi`, recording each stage identity.
pub fn run_pipeline(
    phi: &dyn GradedMap,
    model: &NcModel,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let padded;
    let model = if cfg.pad_model {
        padded = model.pad();
        &padded
    } else {
        model
    };

    model.validate_projections()?;
    model.require_swap_closed()?;

    let mut stages = Vec::new();
    let mut warnings = Vec::new();
    let record = |name: &str, residual: f64, cfg: &PipelineConfig, stages: &mut Vec<StageResidual>| {
        let tolerance = cfg.tol(name);
        stages.push(StageResidual {
            name: name.to_string(),
            residual,
            tolerance,
            pass: residual <= tolerance,
        });
    };

    let mr = model_residual(model, phi).map_err(|e| e.at_stage("model"))?;
    record("model", mr.max, cfg, &mut stages);

    let split = split_relation_residual(model, phi).map_err(|e| e.at_stage("split"))?;
    record("split", split, cfg, &mut stages);

    let averaged = averaged_relation_residual(model, phi).map_err(|e| e.at_stage("averaged"))?;
    record("averaged", averaged, cfg, &mut stages);

    let ustage = solve_unitary(model, true)?;
    record("intertwine", ustage.residual, cfg, &mut stages);
    if ustage.degenerate_span {
        warnings.push("intertwine: collected families have no numerical span".into());
    }
    let u = ustage.solution.j.clone();

    let nu_sym = nu_symmetry_residual(model, &u).map_err(|e| e.at_stage("nu_symmetry"))?;
    record("nu_symmetry", nu_sym, cfg, &mut stages);

    let resolvent =
        resolvent_relation_residual(model, phi, &u).map_err(|e| e.at_stage("resolvent"))?;
    record("resolvent", resolvent, cfg, &mut stages);

    let tstage = solve_colligation(model, phi, &u)?;
    record("colligation", tstage.residual, cfg, &mut stages);

    let mut cayley = 0.0f64;
    for x in &model.samples {
        cayley = cayley.max(cayley_residual(x, &u).map_err(|e| e.at_stage("cayley"))?);
    }
    record("cayley", cayley, cfg, &mut stages);

    let realization = assemble_realization(&tstage.t, &u, ustage.solution.unitary)?;

    let fit = verify_factorization(&realization, phi, &model.samples)
        .map_err(|e| e.at_stage("fit"))?;
    let holdout = verify_factorization(&realization, phi, &model.held_out)
        .map_err(|e| e.at_stage("holdout"))?;
    let verify = VerifyReport {
        fit,
        holdout,
        fit_pass: fit <= cfg.tol("fit"),
        holdout_pass: holdout <= cfg.tol("holdout"),
    };

    let report = PipelineReport {
        stages,
        p: realization.p.clone(),
        u: realization.u.clone(),
        verify,
        u_unitary: realization.u_unitary,
        t_rank: tstage.solution_rank,
        warnings,
    };

    Ok(PipelineOutcome { realization, report })
}
