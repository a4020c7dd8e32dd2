use std::time::Instant;

use crate::linalg::{all_finite, dot};
use crate::problems::{Problem, QuadraticProblem};

use super::config::{Method, SolverConfig};
use super::result::{IterationRecord, IterationTrace, RunResult, Status};
use super::steps::Breakdown;
use super::SolverError;

/// Linear conjugate gradient on `A x = b`, stopping on `‖A x - b‖ ≤ tol`.
///
/// The recursively updated residual drifts from `b - A x` on ill-conditioned
/// systems. When it passes the tolerance, the true residual is recomputed; if
/// that one does not pass, the iteration restarts from it. The trace's `beta`
/// column holds the CG direction coefficient.
pub fn run_cg_quadratic(
    q: &QuadraticProblem,
    cfg: &SolverConfig,
) -> Result<RunResult, SolverError> {
    cfg.validate()?;
    let op = q.operator();
    let n = op.dim();
    let start = Instant::now();

    let mut x = q.initial_point();
    let mut r = vec![0.0; n];
    let mut ap = vec![0.0; n];
    let true_residual = |x: &[f64], r: &mut [f64]| {
        op.residual_into(x, r);
        r.iter_mut().for_each(|v| *v = -*v);
    };
    true_residual(&x, &mut r);
    let mut matvecs = 1;
    let mut p = r.clone();
    let mut rr = dot(&r, &r);
    let mut trace = IterationTrace::default();
    let mut k = 0;

    let (status, breakdown) = loop {
        if !all_finite(&r) {
            break (Status::DivergedNonfinite, None);
        }
        let mut rnorm = rr.sqrt();
        if rnorm <= cfg.tol && k > 0 {
            true_residual(&x, &mut r);
            matvecs += 1;
            rr = dot(&r, &r);
            rnorm = rr.sqrt();
            p.copy_from_slice(&r);
        }
        trace.records.push(IterationRecord {
            k,
            residual_norm: rnorm,
            alpha: None,
            t_factor: None,
            beta: None,
            gamma: None,
            elapsed: start.elapsed().as_secs_f64(),
        });
        if rnorm <= cfg.tol {
            break (Status::Converged, None);
        }
        if k >= cfg.max_iter {
            break (Status::MaxIterReached, None);
        }
        op.matrix().matvec_into(&p, &mut ap);
        matvecs += 1;
        let curvature = dot(&p, &ap);
        if curvature.is_nan() || curvature <= cfg.denom_floor {
            break (Status::BreakdownDenominator, Some(Breakdown::CgCurvature));
        }
        let alpha = rr / curvature;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let rr_next = dot(&r, &r);
        let beta = rr_next / rr;
        for i in 0..n {
            p[i] = r[i] + beta * p[i];
        }
        rr = rr_next;
        let rec = trace.records.last_mut().expect("pushed above");
        rec.alpha = Some(alpha);
        rec.beta = Some(beta);
        if !all_finite(&x) {
            break (Status::DivergedNonfinite, None);
        }
        k += 1;
    };

    Ok(RunResult {
        method: Method::Cg,
        problem: q.name().to_string(),
        n,
        status,
        breakdown,
        x_final: x,
        iterations: k,
        trace,
        elapsed: start.elapsed().as_secs_f64(),
        gradient_evals: matvecs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::norm2;
    use crate::problems::QuadraticOperator;

    fn diag_problem(d: Vec<f64>, b: Vec<f64>) -> QuadraticProblem {
        let n = d.len();
        QuadraticProblem::new(
            "q",
            QuadraticOperator::diagonal(d, b).unwrap(),
            vec![0.0; n],
            None,
        )
        .unwrap()
    }

    #[test]
    fn identity_in_one_iteration() {
        let q = diag_problem(vec![1.0; 5], vec![1.0, -2.0, 3.0, 0.5, 4.0]);
        let res = run_cg_quadratic(&q, &SolverConfig::new(Method::Cg)).unwrap();
        assert_eq!(res.status, Status::Converged);
        assert_eq!(res.iterations, 1);
    }

    #[test]
    fn two_eigenvalues_terminate_in_two_steps() {
        let q = diag_problem(vec![1.0, 2.0], vec![1.0, 2.0]);
        let res = run_cg_quadratic(&q, &SolverConfig::new(Method::Cg)).unwrap();
        assert_eq!(res.status, Status::Converged);
        assert!(res.iterations <= 2);
        assert!((res.x_final[0] - 1.0).abs() < 1e-12);
        assert!((res.x_final[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn converged_means_true_residual_below_tol() {
        let n = 200;
        let h = 11.0 / n as f64;
        let s = 1.0 / (h * h);
        let b: Vec<f64> = (0..n)
            .map(|i| ((i * 7 % 13) as f64 - 6.0) * 100.0)
            .collect();
        let op = QuadraticOperator::tridiagonal(vec![2.0 * s; n], vec![-s; n - 1], b).unwrap();
        let q = QuadraticProblem::new("stencil", op, vec![0.0; n], None).unwrap();
        let res =
            run_cg_quadratic(&q, &SolverConfig::new(Method::Cg).with_max_iter(5 * n)).unwrap();
        assert_eq!(res.status, Status::Converged);
        let g = q.gradient(&res.x_final).unwrap();
        assert!(norm2(&g) <= 1e-6);
    }
}
