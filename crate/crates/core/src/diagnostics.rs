//! Approximate computational order of convergence and per-run summaries.

use serde::Serialize;

use crate::solver::{RunResult, Status};

/// Residuals at or below this value are treated as unusable for log ratios.
pub const ACOC_RESIDUAL_FLOOR: f64 = 1e-290;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AcocStatus {
    Ok,
    /// Fewer than three usable residuals, or no defined ρ at all.
    InsufficientData,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AcocReport {
    /// `rho[j]` is ρ_k for `k = j + 1`; `None` where it is undefined.
    pub rho: Vec<Option<f64>>,
    /// Last defined ρ_k.
    pub rho_final: Option<f64>,
    pub residuals: Vec<f64>,
    pub status: AcocStatus,
}

/// `ρ_k = log(r_{k+1}/r_k) / log(r_k/r_{k-1})` for `k = 1 ..= len - 2`.
///
/// ρ_k is left undefined when any of the three residuals is non-positive,
/// nonfinite or below [`ACOC_RESIDUAL_FLOOR`], when `r_k = r_{k-1}`, or
/// when the quotient is not finite.
pub fn acoc(residuals: &[f64]) -> AcocReport {
    let usable = |r: f64| r.is_finite() && r > ACOC_RESIDUAL_FLOOR;
    let rho: Vec<Option<f64>> = residuals
        .windows(3)
        .map(|w| {
            let (prev, cur, next) = (w[0], w[1], w[2]);
            if !(usable(prev) && usable(cur) && usable(next)) {
                return None;
            }
            let denom = (cur / prev).ln();
            if denom == 0.0 {
                return None;
            }
            let value = (next / cur).ln() / denom;
            value.is_finite().then_some(value)
        })
        .collect();
    let rho_final = rho.iter().rev().find_map(|r| *r);
    let enough = residuals.iter().filter(|r| usable(**r)).count() >= 3;
    AcocReport {
        status: if enough && rho_final.is_some() {
            AcocStatus::Ok
        } else {
            AcocStatus::InsufficientData
        },
        rho: if enough { rho } else { Vec::new() },
        rho_final: if enough { rho_final } else { None },
        residuals: residuals.to_vec(),
    }
}

/// One row of a results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub method: String,
    pub problem: String,
    pub n: usize,
    pub iterations: usize,
    pub final_gnorm: f64,
    pub cpu_seconds: f64,
    pub status: String,
}

pub fn summarize(result: &RunResult) -> RunSummary {
    let status = match (result.status, result.breakdown) {
        (Status::BreakdownDenominator, Some(b)) => format!("{} ({b})", result.status),
        (s, _) => s.to_string(),
    };
    RunSummary {
        method: result.method.label().to_string(),
        problem: result.problem.clone(),
        n: result.n,
        iterations: result.iterations,
        final_gnorm: result.final_residual(),
        cpu_seconds: result.elapsed,
        status,
    }
}
