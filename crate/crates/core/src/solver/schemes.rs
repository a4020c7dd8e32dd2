//! The iteration driver and the per-method update rules.

use std::time::Instant;

use crate::linalg::{all_finite, axpy_into, dot, norm2, norm_inf, norm_sq};
use crate::problems::Problem;

use super::config::{BbVariant, Method, SolverConfig, StepRule, StopNorm};
use super::result::{IterationRecord, IterationTrace, RunResult, Status};
use super::steps::{
    beta_coeff, gamma_coeff, step_size_dual, step_size_primal, t_scalar, Breakdown, Guard,
};

/// Scalars produced by one update, logged against `x_k`.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct StepInfo {
    pub alpha: Option<f64>,
    pub t_factor: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StepError {
    Breakdown(Breakdown),
    Nonfinite,
}

impl From<Breakdown> for StepError {
    fn from(b: Breakdown) -> Self {
        StepError::Breakdown(b)
    }
}

/// Shared context handed to every update rule.
pub(crate) struct StepCtx<'a> {
    pub problem: &'a dyn Problem,
    pub guard: Guard,
    pub rule: StepRule,
    pub evals: usize,
}

impl StepCtx<'_> {
    fn eval(&mut self, x: &[f64], out: &mut [f64]) -> Result<(), StepError> {
        self.problem.gradient_into(x, out);
        self.evals += 1;
        if all_finite(out) {
            Ok(())
        } else {
            Err(StepError::Nonfinite)
        }
    }

    /// Probes `w = x + g(x)`, leaves `g(w)` in `gw` and returns `α`.
    fn closed_form_step(
        &mut self,
        rule: StepRule,
        x: &[f64],
        gx: &[f64],
        w: &mut [f64],
        gw: &mut [f64],
    ) -> Result<f64, StepError> {
        axpy_into(w, x, 1.0, gx);
        self.eval(w, gw)?;
        let alpha = match rule {
            StepRule::Primal => step_size_primal(gx, gw, &self.guard)?,
            StepRule::Dual => step_size_dual(gx, gw, &self.guard)?,
        };
        Ok(alpha)
    }
}

pub(crate) trait Scheme {
    /// Writes `x_{k+1}` into `next`.
    fn step(
        &mut self,
        ctx: &mut StepCtx<'_>,
        x: &[f64],
        gx: &[f64],
        next: &mut [f64],
    ) -> Result<StepInfo, StepError>;
}

pub(crate) fn drive(
    p: &dyn Problem,
    cfg: &SolverConfig,
    method: Method,
    scheme: &mut dyn Scheme,
) -> RunResult {
    let n = p.dim();
    let start = Instant::now();
    let mut ctx = StepCtx {
        problem: p,
        guard: Guard {
            floor: cfg.denom_floor,
            rel: cfg.rel_guard,
        },
        rule: cfg.step_rule,
        evals: 0,
    };
    let mut x = p.initial_point();
    let mut gx = vec![0.0; n];
    let mut next = vec![0.0; n];
    let mut trace = IterationTrace::default();
    let mut k = 0;

    let (status, breakdown) = loop {
        p.gradient_into(&x, &mut gx);
        ctx.evals += 1;
        if !all_finite(&gx) {
            break (Status::DivergedNonfinite, None);
        }
        let gnorm = norm2(&gx);
        trace.records.push(IterationRecord {
            k,
            residual_norm: gnorm,
            alpha: None,
            t_factor: None,
            beta: None,
            gamma: None,
            elapsed: start.elapsed().as_secs_f64(),
        });
        let stop_value = match cfg.stop_norm {
            StopNorm::Euclidean => gnorm,
            StopNorm::Max => norm_inf(&gx),
        };
        if stop_value <= cfg.tol {
            break (Status::Converged, None);
        }
        if k >= cfg.max_iter {
            break (Status::MaxIterReached, None);
        }
        match scheme.step(&mut ctx, &x, &gx, &mut next) {
            Ok(info) => {
                let rec = trace.records.last_mut().expect("pushed above");
                rec.alpha = info.alpha;
                rec.t_factor = info.t_factor;
                rec.beta = info.beta;
                rec.gamma = info.gamma;
                if !all_finite(&next) {
                    break (Status::DivergedNonfinite, None);
                }
                std::mem::swap(&mut x, &mut next);
                k += 1;
            }
            Err(StepError::Breakdown(b)) => break (Status::BreakdownDenominator, Some(b)),
            Err(StepError::Nonfinite) => break (Status::DivergedNonfinite, None),
        }
    };

    RunResult {
        method,
        problem: p.name().to_string(),
        n,
        status,
        breakdown,
        x_final: x,
        iterations: k,
        trace,
        elapsed: start.elapsed().as_secs_f64(),
        gradient_evals: ctx.evals,
    }
}

/// `x_{k+1} = x_k - α_k g(x_k)`.
pub(crate) struct OneStep {
    w: Vec<f64>,
    gw: Vec<f64>,
}

impl OneStep {
    pub fn new(n: usize) -> Self {
        OneStep {
            w: vec![0.0; n],
            gw: vec![0.0; n],
        }
    }
}

impl Scheme for OneStep {
    fn step(
        &mut self,
        ctx: &mut StepCtx<'_>,
        x: &[f64],
        gx: &[f64],
        next: &mut [f64],
    ) -> Result<StepInfo, StepError> {
        let alpha = ctx.closed_form_step(ctx.rule, x, gx, &mut self.w, &mut self.gw)?;
        axpy_into(next, x, -alpha, gx);
        Ok(StepInfo {
            alpha: Some(alpha),
            ..StepInfo::default()
        })
    }
}

/// Two- or three-step scheme sharing one `α_k` and one `T_k`:
/// `y = x - α g(x)`, `z = y - αT g(y)`, and for three steps `x⁺ = z - αT g(z)`.
pub(crate) struct MultiStep {
    three: bool,
    w: Vec<f64>,
    gw: Vec<f64>,
    y: Vec<f64>,
    gy: Vec<f64>,
    z: Vec<f64>,
    gz: Vec<f64>,
}

impl MultiStep {
    pub fn new(n: usize, three: bool) -> Self {
        MultiStep {
            three,
            w: vec![0.0; n],
            gw: vec![0.0; n],
            y: vec![0.0; n],
            gy: vec![0.0; n],
            z: vec![0.0; n],
            gz: vec![0.0; n],
        }
    }
}

impl Scheme for MultiStep {
    fn step(
        &mut self,
        ctx: &mut StepCtx<'_>,
        x: &[f64],
        gx: &[f64],
        next: &mut [f64],
    ) -> Result<StepInfo, StepError> {
        let alpha = ctx.closed_form_step(ctx.rule, x, gx, &mut self.w, &mut self.gw)?;
        axpy_into(&mut self.y, x, -alpha, gx);
        ctx.eval(&self.y, &mut self.gy)?;
        let t = t_scalar(gx, &self.gw, &self.gy, &ctx.guard)?;
        let corrected = alpha * t;
        if self.three {
            axpy_into(&mut self.z, &self.y, -corrected, &self.gy);
            ctx.eval(&self.z, &mut self.gz)?;
            axpy_into(next, &self.z, -corrected, &self.gz);
        } else {
            axpy_into(next, &self.y, -corrected, &self.gy);
        }
        Ok(StepInfo {
            alpha: Some(alpha),
            t_factor: Some(t),
            ..StepInfo::default()
        })
    }
}

/// Scalar-coefficient variants with `d = -α g(x)`:
/// `x⁺ = x + (1+β)d`, or `x⁺ = x + (1+β+βγ)d` with `z = x + (1+β)d`.
pub(crate) struct ScalarStep {
    three: bool,
    w: Vec<f64>,
    gw: Vec<f64>,
    d: Vec<f64>,
    y: Vec<f64>,
    gy: Vec<f64>,
    z: Vec<f64>,
    gz: Vec<f64>,
}

impl ScalarStep {
    pub fn new(n: usize, three: bool) -> Self {
        ScalarStep {
            three,
            w: vec![0.0; n],
            gw: vec![0.0; n],
            d: vec![0.0; n],
            y: vec![0.0; n],
            gy: vec![0.0; n],
            z: vec![0.0; n],
            gz: vec![0.0; n],
        }
    }
}

impl Scheme for ScalarStep {
    fn step(
        &mut self,
        ctx: &mut StepCtx<'_>,
        x: &[f64],
        gx: &[f64],
        next: &mut [f64],
    ) -> Result<StepInfo, StepError> {
        let alpha = ctx.closed_form_step(ctx.rule, x, gx, &mut self.w, &mut self.gw)?;
        for (d, g) in self.d.iter_mut().zip(gx) {
            *d = -alpha * g;
        }
        axpy_into(&mut self.y, x, 1.0, &self.d);
        ctx.eval(&self.y, &mut self.gy)?;
        let beta = beta_coeff(gx, &self.gw, &self.gy, &ctx.guard)?;
        if !self.three {
            axpy_into(next, x, 1.0 + beta, &self.d);
            return Ok(StepInfo {
                alpha: Some(alpha),
                beta: Some(beta),
                ..StepInfo::default()
            });
        }
        axpy_into(&mut self.z, x, 1.0 + beta, &self.d);
        ctx.eval(&self.z, &mut self.gz)?;
        let gamma = gamma_coeff(&self.gy, &self.gz, &ctx.guard)?;
        axpy_into(next, x, 1.0 + beta + beta * gamma, &self.d);
        Ok(StepInfo {
            alpha: Some(alpha),
            beta: Some(beta),
            gamma: Some(gamma),
            ..StepInfo::default()
        })
    }
}

/// Barzilai–Borwein. The first step, and any step whose BB value is not a
/// finite positive number, uses the primal closed-form step instead.
pub(crate) struct BarzilaiBorwein {
    variant: BbVariant,
    prev: Option<(Vec<f64>, Vec<f64>)>,
    w: Vec<f64>,
    gw: Vec<f64>,
}

impl BarzilaiBorwein {
    pub fn new(n: usize, variant: BbVariant) -> Self {
        BarzilaiBorwein {
            variant,
            prev: None,
            w: vec![0.0; n],
            gw: vec![0.0; n],
        }
    }

    fn secant_step(&self, guard: &Guard, x: &[f64], gx: &[f64]) -> Result<Option<f64>, StepError> {
        let Some((px, pg)) = &self.prev else {
            return Ok(None);
        };
        let s: Vec<f64> = x.iter().zip(px).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gx.iter().zip(pg).map(|(a, b)| a - b).collect();
        let (ss, yy) = (norm_sq(&s), norm_sq(&y));
        let sy = dot(&s, &y);
        let alpha = match self.variant {
            BbVariant::Bb2 => ss / guard.check(sy, (ss * yy).sqrt(), Breakdown::BbCurvature)?,
            BbVariant::Bb1 => sy / guard.check(yy, yy, Breakdown::BbCurvature)?,
        };
        Ok((alpha.is_finite() && alpha > 0.0).then_some(alpha))
    }
}

impl Scheme for BarzilaiBorwein {
    fn step(
        &mut self,
        ctx: &mut StepCtx<'_>,
        x: &[f64],
        gx: &[f64],
        next: &mut [f64],
    ) -> Result<StepInfo, StepError> {
        let alpha = match self.secant_step(&ctx.guard, x, gx)? {
            Some(a) => a,
            None => ctx.closed_form_step(StepRule::Primal, x, gx, &mut self.w, &mut self.gw)?,
        };
        axpy_into(next, x, -alpha, gx);
        match &mut self.prev {
            Some((px, pg)) => {
                px.copy_from_slice(x);
                pg.copy_from_slice(gx);
            }
            None => self.prev = Some((x.to_vec(), gx.to_vec())),
        }
        Ok(StepInfo {
            alpha: Some(alpha),
            ..StepInfo::default()
        })
    }
}
