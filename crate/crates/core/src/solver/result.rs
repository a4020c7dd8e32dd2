use std::fmt;
use std::io;

use serde::Serialize;

use super::config::Method;
use super::steps::Breakdown;
use crate::linalg::DenseVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterReached,
    BreakdownDenominator,
    DivergedNonfinite,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Converged => "converged",
            Status::MaxIterReached => "max_iter_reached",
            Status::BreakdownDenominator => "breakdown_denominator",
            Status::DivergedNonfinite => "diverged_nonfinite",
        }
    }

    /// True for breakdown and divergence.
    pub fn is_failure(self) -> bool {
        matches!(
            self,
            Status::BreakdownDenominator | Status::DivergedNonfinite
        )
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Quantities computed at iterate `x_k`. Scalars that a method does not use,
/// or that were not reached because the run stopped at `x_k`, are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub k: usize,
    /// Euclidean norm of `g(x_k)`.
    pub residual_norm: f64,
    pub alpha: Option<f64>,
    pub t_factor: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    /// Seconds since the start of the run when `g(x_k)` was available.
    pub elapsed: f64,
}

impl IterationRecord {
    /// Equality that ignores the wall-clock field.
    pub fn same_numerics(&self, other: &IterationRecord) -> bool {
        let bits = |v: Option<f64>| v.map(f64::to_bits);
        self.k == other.k
            && self.residual_norm.to_bits() == other.residual_norm.to_bits()
            && bits(self.alpha) == bits(other.alpha)
            && bits(self.t_factor) == bits(other.t_factor)
            && bits(self.beta) == bits(other.beta)
            && bits(self.gamma) == bits(other.gamma)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct IterationTrace {
    pub records: Vec<IterationRecord>,
}

impl IterationTrace {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual_norm).collect()
    }

    pub fn last(&self) -> Option<&IterationRecord> {
        self.records.last()
    }

    /// Bitwise comparison of everything except timings.
    pub fn same_numerics(&self, other: &IterationTrace) -> bool {
        self.records.len() == other.records.len()
            && self
                .records
                .iter()
                .zip(&other.records)
                .all(|(a, b)| a.same_numerics(b))
    }

    /// Writes the trace as CSV with columns `k,gnorm,alpha,t,beta,gamma,seconds`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "gnorm", "alpha", "t", "beta", "gamma", "seconds"])?;
        let opt = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.records {
            w.write_record([
                r.k.to_string(),
                format!("{:e}", r.residual_norm),
                opt(r.alpha),
                opt(r.t_factor),
                opt(r.beta),
                opt(r.gamma),
                format!("{:.6}", r.elapsed),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub method: Method,
    pub problem: String,
    pub n: usize,
    pub status: Status,
    /// Set when `status` is [`Status::BreakdownDenominator`].
    pub breakdown: Option<Breakdown>,
    /// Last iterate with a finite gradient.
    pub x_final: DenseVector,
    /// Number of completed updates.
    pub iterations: usize,
    pub trace: IterationTrace,
    pub elapsed: f64,
    /// Gradient evaluations (matrix-vector products for CG).
    pub gradient_evals: usize,
}

impl RunResult {
    /// `‖g(x_final)‖`, or NaN when the run ended before any finite gradient.
    pub fn final_residual(&self) -> f64 {
        self.trace.last().map_or(f64::NAN, |r| r.residual_norm)
    }

    pub fn converged(&self) -> bool {
        self.status == Status::Converged
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trace_csv_layout() {
        let trace = IterationTrace {
            records: vec![
                IterationRecord {
                    k: 0,
                    residual_norm: 2.5,
                    alpha: Some(0.5),
                    t_factor: Some(1.25),
                    beta: None,
                    gamma: None,
                    elapsed: 0.0,
                },
                IterationRecord {
                    k: 1,
                    residual_norm: 1e-7,
                    alpha: None,
                    t_factor: None,
                    beta: None,
                    gamma: None,
                    elapsed: 0.001,
                },
            ],
        };
        let mut buf = Vec::new();
        trace.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "k,gnorm,alpha,t,beta,gamma,seconds");
        assert_eq!(lines[1], "0,2.5e0,5e-1,1.25e0,,,0.000000");
        assert_eq!(lines[2], "1,1e-7,,,,,0.001000");
    }

    #[test]
    fn status_strings() {
        assert_eq!(Status::Converged.to_string(), "converged");
        assert_eq!(Status::MaxIterReached.as_str(), "max_iter_reached");
        assert!(Status::DivergedNonfinite.is_failure());
        assert!(!Status::MaxIterReached.is_failure());
    }
}
