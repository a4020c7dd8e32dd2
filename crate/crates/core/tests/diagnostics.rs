use superschemes::diagnostics::{acoc, summarize, AcocStatus};
use superschemes::linalg::DenseVector;
use superschemes::problems::{
    make_example, Problem, ProblemId, QuadraticOperator, QuadraticProblem,
};
use superschemes::solver::{solve, Breakdown, Method, SolverConfig, Status};

fn power_sequence(r0: f64, p: f64, len: usize) -> Vec<f64> {
    let mut r = vec![r0];
    while r.len() < len {
        let last = *r.last().unwrap();
        r.push(last.powf(p));
    }
    r
}

#[test]
fn power_sequences_recover_their_order() {
    for p in [2.0, 3.0, 4.0, 6.0] {
        let r = power_sequence(0.5, p, 5);
        let rep = acoc(&r);
        assert_eq!(rep.status, AcocStatus::Ok);
        let defined: Vec<f64> = rep.rho.iter().flatten().copied().collect();
        assert!(!defined.is_empty(), "p={p}");
        for rho in defined {
            assert!((rho - p).abs() <= 1e-12, "p={p}: {rho}");
        }
    }
}

#[test]
fn exponential_sum_orders_in_acoc_mode() {
    let p = make_example(ProblemId::Ex1, 15, None).unwrap();
    let bands = [
        (Method::Ss1, 1.9, 2.1),
        (Method::Ss2, 3.5, 4.5),
        (Method::Ss3, 5.0, 6.5),
    ];
    for (m, lo, hi) in bands {
        let res = solve(p.as_ref(), &SolverConfig::acoc(m)).unwrap();
        assert_eq!(res.status, Status::Converged);
        assert!(res.final_residual() <= 1e-13);
        let rep = acoc(&res.trace.residuals());
        let got = rep.rho_final.unwrap();
        assert!((lo..=hi).contains(&got), "{m}: {got}");
    }
}

#[test]
fn summaries() {
    let p = make_example(ProblemId::Ex8, 100, None).unwrap();
    let s = summarize(&solve(p.as_ref(), &SolverConfig::new(Method::Ss3)).unwrap());
    assert_eq!(s.method, "SS3");
    assert_eq!(s.status, "converged");
    assert!(s.final_gnorm <= 1e-6);

    let op = QuadraticOperator::diagonal(vec![2.0; 3], vec![0.0; 3]).unwrap();
    let at_solution = QuadraticProblem::new("q", op, vec![0.0; 3], None).unwrap();
    let s = summarize(&solve(&at_solution, &SolverConfig::new(Method::Ss2)).unwrap());
    assert_eq!(s.iterations, 0);
    assert!(s.final_gnorm <= 1e-6);
}

/// Constant gradient: the probe sees `g(w) = g(x)` and the step denominator vanishes.
struct Tilted;

impl Problem for Tilted {
    fn name(&self) -> &str {
        "tilted"
    }
    fn dim(&self) -> usize {
        2
    }
    fn initial_point(&self) -> DenseVector {
        vec![0.0; 2]
    }
    fn gradient_into(&self, _x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&[1.0, -2.0]);
    }
}

#[test]
fn breakdown_status_is_carried_verbatim() {
    let run = solve(&Tilted, &SolverConfig::new(Method::Ss1)).unwrap();
    assert_eq!(run.status, Status::BreakdownDenominator);
    let s = summarize(&run);
    assert!(
        s.status.starts_with("breakdown_denominator"),
        "{}",
        s.status
    );
    assert!(s.status.contains(&Breakdown::PrimalStep.to_string()));
    assert_eq!(s.iterations, 0);
}
