//! Line-search-free iteration schemes and their baselines.
//!
//! All SS-family methods probe the gradient at `w_k = x_k + g(x_k)` and take
//! the closed-form step `α_k` built from `g(x_k)` and `g(w_k)`. One `α_k` is
//! computed per outer iteration and reused by every sub-step. Runs are
//! strictly sequential and own all their state, so independent runs can
//! execute concurrently.

mod cg;
mod config;
mod result;
mod schemes;
mod steps;

use thiserror::Error;

use crate::problems::Problem;

pub use cg::run_cg_quadratic;
pub use config::{
    BbVariant, Method, SolverConfig, StepRule, StopNorm, ACOC_TOL, DEFAULT_DENOM_FLOOR,
    DEFAULT_MAX_ITER, DEFAULT_REL_GUARD, DEFAULT_TOL, EXTERNAL_METHODS,
};
pub use result::{IterationRecord, IterationTrace, RunResult, Status};
pub use steps::{
    beta_coeff, gamma_coeff, step_size_dual, step_size_primal, t_scalar, Breakdown, Guard,
};

use schemes::{drive, BarzilaiBorwein, MultiStep, OneStep, ScalarStep};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("unknown method '{0}' (expected one of ss1, ss2, ss3, ss2s, ss3s, bb, cg)")]
    UnknownMethod(String),
    #[error("method '{0}' is an external reference method without a definition here; it is not implemented")]
    ExternalMethod(String),
    #[error("unknown step rule '{0}' (expected primal or dual)")]
    UnknownStepRule(String),
    #[error("unknown BB variant '{0}' (expected bb1 or bb2)")]
    UnknownBbVariant(String),
    #[error("method cg needs a quadratic problem, '{0}' is not one")]
    NotQuadratic(String),
}

/// Runs the method selected in `cfg.method`.
pub fn solve(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    match cfg.method {
        Method::Ss1 => run_ss1(p, cfg),
        Method::Ss2 => run_ss2(p, cfg),
        Method::Ss3 => run_ss3(p, cfg),
        Method::Ss2s => run_ss2_scalar(p, cfg),
        Method::Ss3s => run_ss3_scalar(p, cfg),
        Method::Bb => run_bb(p, cfg),
        Method::Cg => {
            let q = p
                .as_quadratic()
                .ok_or_else(|| SolverError::NotQuadratic(p.name().to_string()))?;
            run_cg_quadratic(q, cfg)
        }
    }
}

/// `x_{k+1} = x_k - α_k g(x_k)`.
pub fn run_ss1(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(p, cfg, Method::Ss1, &mut OneStep::new(p.dim())))
}

/// `y = x - α g(x)`, `x⁺ = y - αT g(y)`. Three gradient evaluations per iteration.
pub fn run_ss2(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(
        p,
        cfg,
        Method::Ss2,
        &mut MultiStep::new(p.dim(), false),
    ))
}

/// [`run_ss2`] plus one more corrected sub-step. Four gradient evaluations per iteration.
pub fn run_ss3(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(
        p,
        cfg,
        Method::Ss3,
        &mut MultiStep::new(p.dim(), true),
    ))
}

pub fn run_ss2_scalar(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(
        p,
        cfg,
        Method::Ss2s,
        &mut ScalarStep::new(p.dim(), false),
    ))
}

pub fn run_ss3_scalar(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(
        p,
        cfg,
        Method::Ss3s,
        &mut ScalarStep::new(p.dim(), true),
    ))
}

pub fn run_bb(p: &dyn Problem, cfg: &SolverConfig) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    Ok(drive(
        p,
        cfg,
        Method::Bb,
        &mut BarzilaiBorwein::new(p.dim(), cfg.bb_variant),
    ))
}
