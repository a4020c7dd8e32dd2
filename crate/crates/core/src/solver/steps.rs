//! Closed-form step sizes and acceleration coefficients.
//!
//! Each formula divides by a gradient inner product. A denominator whose
//! magnitude is at most `max(floor, rel · scale)` is reported as a
//! [`Breakdown`] instead of being replaced by a fallback value, where `scale`
//! is `‖v‖²` for a squared norm and `‖u‖·‖v‖` for a cross product `uᵀv`.

use std::fmt;

use crate::linalg::{diff_dot, diff_norm_sq, dot, norm_sq};

use super::config::{DEFAULT_DENOM_FLOOR, DEFAULT_REL_GUARD};

/// Which denominator degenerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Breakdown {
    /// `‖g(w)-g(x)‖²` in the primal step.
    PrimalStep,
    /// `g(x)ᵀ(g(w)-g(x))` in the dual step.
    DualStep,
    /// `‖g(x)‖²` in `T_k`.
    TxNorm,
    /// `‖g(w)‖²` in `T_k`.
    TwNorm,
    /// `g(y)ᵀg(x)` in `β_k`.
    BetaYx,
    /// `‖g(x)‖²` in `β_k`.
    BetaXx,
    /// `g(x)ᵀg(w)` in `β_k`.
    BetaXw,
    /// `g(z)ᵀg(y)` in `γ_k`.
    Gamma,
    /// `sᵀy` (bb2) or `‖y‖²` (bb1) in the Barzilai–Borwein step.
    BbCurvature,
    /// `pᵀAp ≤ 0` in conjugate gradient.
    CgCurvature,
}

impl fmt::Display for Breakdown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Breakdown::PrimalStep => "step denominator |g(w)-g(x)|^2",
            Breakdown::DualStep => "step denominator g(x)'(g(w)-g(x))",
            Breakdown::TxNorm => "T_k denominator |g(x)|^2",
            Breakdown::TwNorm => "T_k denominator |g(w)|^2",
            Breakdown::BetaYx => "beta_k denominator g(y)'g(x)",
            Breakdown::BetaXx => "beta_k denominator |g(x)|^2",
            Breakdown::BetaXw => "beta_k denominator g(x)'g(w)",
            Breakdown::Gamma => "gamma_k denominator g(z)'g(y)",
            Breakdown::BbCurvature => "BB denominator",
            Breakdown::CgCurvature => "CG curvature p'Ap",
        };
        f.write_str(s)
    }
}

/// Denominator guard thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Guard {
    pub floor: f64,
    pub rel: f64,
}

impl Default for Guard {
    fn default() -> Self {
        Guard {
            floor: DEFAULT_DENOM_FLOOR,
            rel: DEFAULT_REL_GUARD,
        }
    }
}

impl Guard {
    #[inline]
    pub fn check(&self, denom: f64, scale: f64, kind: Breakdown) -> Result<f64, Breakdown> {
        if denom.abs() > self.floor.max(self.rel * scale) {
            Ok(denom)
        } else {
            Err(kind)
        }
    }
}

/// `α = (g(w)-g(x))ᵀg(x) / ‖g(w)-g(x)‖²`, the minimiser of the linearised
/// residual `‖g(x) - α(g(w)-g(x))‖²`.
pub fn step_size_primal(gx: &[f64], gw: &[f64], guard: &Guard) -> Result<f64, Breakdown> {
    let denom = guard.check(diff_norm_sq(gw, gx), norm_sq(gx), Breakdown::PrimalStep)?;
    Ok(diff_dot(gw, gx, gx) / denom)
}

/// `α = ‖g(x)‖² / g(x)ᵀ(g(w)-g(x))`.
pub fn step_size_dual(gx: &[f64], gw: &[f64], guard: &Guard) -> Result<f64, Breakdown> {
    let gx2 = norm_sq(gx);
    let denom = guard.check(diff_dot(gw, gx, gx), gx2, Breakdown::DualStep)?;
    Ok(gx2 / denom)
}

/// `T = 1 + g(x)ᵀg(y)/‖g(x)‖² + g(w)ᵀg(y)/‖g(w)‖²`.
pub fn t_scalar(gx: &[f64], gw: &[f64], gy: &[f64], guard: &Guard) -> Result<f64, Breakdown> {
    let gx2 = guard.check(norm_sq(gx), 0.0, Breakdown::TxNorm)?;
    let gw2 = guard.check(norm_sq(gw), 0.0, Breakdown::TwNorm)?;
    Ok(1.0 + dot(gx, gy) / gx2 + dot(gw, gy) / gw2)
}

/// `β = ‖g(y)‖² (1/g(y)ᵀg(x) + 1/‖g(x)‖² + 1/g(x)ᵀg(w))`, and 0 when `g(y) = 0`.
pub fn beta_coeff(gx: &[f64], gw: &[f64], gy: &[f64], guard: &Guard) -> Result<f64, Breakdown> {
    let gy2 = norm_sq(gy);
    if gy2 == 0.0 {
        return Ok(0.0);
    }
    let gx2 = norm_sq(gx);
    let gw2 = norm_sq(gw);
    let yx = guard.check(dot(gy, gx), (gy2 * gx2).sqrt(), Breakdown::BetaYx)?;
    let xx = guard.check(gx2, gx2, Breakdown::BetaXx)?;
    let xw = guard.check(dot(gx, gw), (gx2 * gw2).sqrt(), Breakdown::BetaXw)?;
    Ok(gy2 * (1.0 / yx + 1.0 / xx + 1.0 / xw))
}

/// `γ = ‖g(z)‖² / g(z)ᵀg(y)`, and 0 when `g(z) = 0`.
pub fn gamma_coeff(gy: &[f64], gz: &[f64], guard: &Guard) -> Result<f64, Breakdown> {
    let gz2 = norm_sq(gz);
    if gz2 == 0.0 {
        return Ok(0.0);
    }
    let zy = guard.check(dot(gz, gy), (gz2 * norm_sq(gy)).sqrt(), Breakdown::Gamma)?;
    Ok(gz2 / zy)
}
