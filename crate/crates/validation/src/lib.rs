//! Acceptance criteria for the solvers, each evaluated to a [`Verdict`].
//!
//! Every criterion runs the library exactly as a user would and compares the
//! outcome with fixed bands. Nothing here is tuned to the observed results.

use std::time::Instant;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use superschemes::bench::{emit_report, run_table, BenchPlan, Cell, Format, Report, TableId};
use superschemes::diagnostics::acoc;
use superschemes::linalg::{compensated_sum, norm_sq};
use superschemes::problems::{
    gradcheck, make_example, Problem, ProblemId, QuadraticOperator, QuadraticProblem, WithStart,
};
use superschemes::solver::{
    beta_coeff, gamma_coeff, solve, step_size_primal, t_scalar, Guard, Method, SolverConfig, Status,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub criterion: u8,
    pub title: &'static str,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(criterion: u8, title: &'static str) -> Self {
        Verdict {
            criterion,
            title,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if ok {
            self.notes.push(what);
        } else {
            self.failures.push(what);
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// `criterion N [PASS] title` followed by the failing checks, if any.
    pub fn line(&self) -> String {
        let tag = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!("criterion {} [{tag}] {}", self.criterion, self.title);
        if !self.passed() {
            s.push_str(&format!(
                " ({} failing: {})",
                self.failures.len(),
                self.failures.join("; ")
            ));
        }
        s
    }
}

fn run_plan(plan: &BenchPlan) -> Report {
    run_table(plan).expect("built-in plans are valid")
}

fn count(cell: Option<&Cell>) -> Option<usize> {
    cell.filter(|c| c.status == "converged")
        .and_then(|c| c.iterations)
}

fn describe(cell: Option<&Cell>) -> String {
    match cell {
        Some(c) => format!("{:?} ({})", c.iterations, c.status),
        None => "missing".into(),
    }
}

/// Exponential-sum table: fixed and narrow iteration counts, under 30 s.
pub fn criterion_1() -> Verdict {
    let mut v = Verdict::new(1, "exponential-sum iteration counts over n = 1e3..1e5");
    let start = Instant::now();
    let report = run_plan(&BenchPlan::for_table(TableId::T1));
    let elapsed = start.elapsed().as_secs_f64();
    let bands = [
        (Method::Ss1, 7, 7),
        (Method::Ss2, 4, 5),
        (Method::Ss3, 4, 5),
        (Method::Bb, 6, 8),
    ];
    for &n in &report.sizes {
        for (m, lo, hi) in bands {
            let cell = report.cell(m, n);
            let ok = count(cell).is_some_and(|k| (lo..=hi).contains(&k));
            v.check(
                ok,
                format!("{} n={n}: {} in [{lo},{hi}]", m.label(), describe(cell)),
            );
        }
    }
    v.check(elapsed < 30.0, format!("runtime {elapsed:.1} s < 30 s"));
    let md = String::from_utf8(emit_report(&report, Format::Md)).expect("utf-8");
    let first_row = md.lines().find(|l| l.starts_with("| 1000 "));
    v.check(
        first_row == Some("| 1000 | 7 | 4 | 4 | 7 |"),
        format!("markdown first row {first_row:?}"),
    );
    v
}

/// Diagonal quadratic: counts within ±2 (BB within 20 %), residual ≤ 1e-6.
pub fn criterion_2() -> Verdict {
    let mut v = Verdict::new(2, "diagonal quadratic diag(1..100) iteration counts");
    let report = run_plan(&BenchPlan::for_table(TableId::T8));
    for (m, k) in [(Method::Ss1, 690), (Method::Ss2, 46), (Method::Ss3, 37)] {
        let cell = report.cell(m, 100);
        let ok = count(cell).is_some_and(|got| got.abs_diff(k) <= 2)
            && cell.and_then(|c| c.final_gnorm).is_some_and(|g| g <= 1e-6);
        v.check(ok, format!("{} {} within {k}±2", m.label(), describe(cell)));
    }
    let bb = report.cell(Method::Bb, 100);
    let ok = count(bb).is_some_and(|k| (k as f64 - 102.0).abs() <= 0.2 * 102.0);
    v.check(ok, format!("BB {} within 102±20%", describe(bb)));
    v
}

/// Order-of-convergence estimates on the exponential sum.
pub fn criterion_3() -> Verdict {
    let mut v = Verdict::new(3, "ACOC of SS1/SS2/SS3 on the exponential sum");
    let report = run_plan(&BenchPlan::for_table(TableId::T10));
    for (m, lo, hi) in [
        (Method::Ss1, 1.9, 2.1),
        (Method::Ss2, 3.5, 4.5),
        (Method::Ss3, 5.0, 6.5),
    ] {
        let cell = report.cells.iter().find(|c| c.method == m.as_str());
        let rho = cell.and_then(|c| c.acoc);
        let g = cell.and_then(|c| c.final_gnorm);
        v.check(
            rho.is_some_and(|r| (lo..=hi).contains(&r)),
            format!("{} rho_final {rho:?} in [{lo},{hi}]", m.label()),
        );
        v.check(
            g.is_some_and(|g| g <= 1e-13),
            format!("{} final residual {g:?} <= 1e-13", m.label()),
        );
    }
    v
}

/// Seeded tridiagonal stencil: order-of-magnitude bands.
pub fn criterion_4() -> Verdict {
    let mut v = Verdict::new(4, "seeded tridiagonal stencil, banded iteration counts");
    let report = run_plan(&BenchPlan::for_table(TableId::T9));
    for &n in &report.sizes {
        for (m, cap) in [(Method::Ss1, 60), (Method::Ss2, 35), (Method::Ss3, 25)] {
            let cell = report.cell(m, n);
            let ok = count(cell).is_some_and(|k| k <= cap);
            v.check(
                ok,
                format!("{} n={n}: {} <= {cap}", m.label(), describe(cell)),
            );
        }
        let ss3 = count(report.cell(Method::Ss3, n));
        let bb = count(report.cell(Method::Bb, n));
        let ok = matches!((bb, ss3), (Some(b), Some(s)) if b >= 100 * s);
        v.check(ok, format!("BB n={n}: {bb:?} >= 100 x SS3 {ss3:?}"));
        let cg = report.cell(Method::Cg, n);
        let ok =
            count(cg).is_some_and(|k| (k as f64) >= 0.8 * n as f64 && (k as f64) <= 1.2 * n as f64);
        v.check(ok, format!("CG n={n}: {} in [0.8n,1.2n]", describe(cg)));
    }
    v
}

/// Published counts for the three non-convex tables, checked in relative bands.
pub fn criterion_5() -> Verdict {
    let mut v = Verdict::new(
        5,
        "banded counts on the cubic, Rosenbrock and trig-quartic tables",
    );
    for table in [TableId::T2, TableId::T3, TableId::T6] {
        let mut plan = BenchPlan::for_table(table);
        plan.methods = vec![Method::Ss1, Method::Ss2, Method::Ss3];
        let report = run_plan(&plan);
        for &n in &report.sizes {
            for &m in &plan.methods {
                let published = superschemes::bench::reference(table, m, n)
                    .and_then(|r| r.iterations)
                    .expect("published cell");
                let band = if table == TableId::T3 && m == Method::Ss1 {
                    0.15
                } else {
                    0.30
                };
                let cell = report.cell(m, n);
                let ok = count(cell).is_some_and(|k| {
                    (k as f64 - published as f64).abs() <= band * published as f64
                });
                v.check(
                    ok,
                    format!(
                        "{table} {} n={n}: {} vs {published}±{:.0}%",
                        m.label(),
                        describe(cell),
                        band * 100.0
                    ),
                );
            }
        }
    }
    v
}

/// Preconditioning turns the weighted exponential sum into the plain one.
pub fn criterion_6() -> Verdict {
    let mut v = Verdict::new(6, "preconditioned exponential sum needs few iterations");
    let n = 1000;
    let cfg = SolverConfig::new(Method::Ss2);
    let pre = make_example(ProblemId::Ex4Pre, n, None).expect("ex4pre");
    let raw = make_example(ProblemId::Ex4, n, None).expect("ex4");
    let pre_run = solve(pre.as_ref(), &cfg).expect("solve");
    let raw_run = solve(raw.as_ref(), &cfg).expect("solve");
    v.check(
        pre_run.converged() && pre_run.iterations <= 10,
        format!(
            "preconditioned: {} k={} <= 10",
            pre_run.status, pre_run.iterations
        ),
    );
    v.check(
        raw_run.iterations >= 100,
        format!(
            "unpreconditioned: {} k={} >= 100",
            raw_run.status, raw_run.iterations
        ),
    );
    let ex1 = make_example(ProblemId::Ex1, n, None).expect("ex1");
    let ex1 = WithStart::new(ex1, pre.initial_point()).expect("same dimension");
    let ex1_run = solve(&ex1, &cfg).expect("solve");
    v.check(
        pre_run.trace.same_numerics(&ex1_run.trace),
        "trace equals the exponential sum's from the same start",
    );
    v
}

fn unit(rng: &mut Xoshiro256PlusPlus) -> f64 {
    (rng.next_u64() >> 11) as f64 * 2f64.powi(-53)
}

fn random_diagonal(rng: &mut Xoshiro256PlusPlus, n: usize, cond: f64) -> QuadraticProblem {
    let d: Vec<f64> = (0..n).map(|_| 1.0 + (cond - 1.0) * unit(rng)).collect();
    let b: Vec<f64> = (0..n).map(|_| 2.0 * unit(rng) - 1.0).collect();
    let x0: Vec<f64> = (0..n).map(|_| 4.0 * unit(rng) - 2.0).collect();
    let op = QuadraticOperator::diagonal(d, b).expect("positive diagonal");
    QuadraticProblem::new("random-diagonal", op, x0, None).expect("consistent sizes")
}

fn probe(p: &dyn Problem, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let gx = p.gradient(x).expect("dimension");
    let w: Vec<f64> = x.iter().zip(&gx).map(|(a, b)| a + b).collect();
    let gw = p.gradient(&w).expect("dimension");
    (gx, gw)
}

fn residual_sq_along(p: &dyn Problem, x: &[f64], gx: &[f64], alpha: f64) -> f64 {
    let y: Vec<f64> = x.iter().zip(gx).map(|(xi, gi)| xi - alpha * gi).collect();
    let gy = p.gradient(&y).expect("dimension");
    compensated_sum(gy.iter().map(|v| v * v))
}

fn golden_section(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            (hi, b, fb) = (b, a, fa);
            a = hi - ratio * (hi - lo);
            fa = f(a);
        } else {
            (lo, a, fa) = (a, b, fb);
            b = lo + ratio * (hi - lo);
            fb = f(b);
        }
    }
    0.5 * (lo + hi)
}

fn model_exactness() -> Result<(), String> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(71);
    let stencil = make_example(ProblemId::Ex9, 40, Some(3)).map_err(|e| e.to_string())?;
    let diag = random_diagonal(&mut rng, 30, 100.0);
    let problems: [&dyn Problem; 2] = [stencil.as_ref(), &diag];
    for p in problems {
        let x = p.initial_point();
        let (gx, gw) = probe(p, &x);
        let d: Vec<f64> = gw.iter().zip(&gx).map(|(a, b)| a - b).collect();
        let gxd: f64 = gx.iter().zip(&d).map(|(a, b)| a * b).sum();
        for i in 0..=40 {
            let alpha = -2.0 + 0.1 * i as f64;
            let direct = residual_sq_along(p, &x, &gx, alpha);
            let model = norm_sq(&gx) - 2.0 * alpha * gxd + alpha * alpha * norm_sq(&d);
            if (direct - model).abs() > 1e-10 * direct.abs().max(model.abs()) {
                return Err(format!("{} alpha={alpha}: {direct} vs {model}", p.name()));
            }
        }
    }
    Ok(())
}

fn step_optimality() -> Result<(), String> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(72);
    for trial in 0..25 {
        let p = random_diagonal(&mut rng, 12, 20.0);
        let x = p.initial_point();
        let (gx, gw) = probe(&p, &x);
        let alpha = step_size_primal(&gx, &gw, &Guard::default()).map_err(|b| b.to_string())?;
        let oracle = golden_section(|a| residual_sq_along(&p, &x, &gx, a), 0.0, 2.0, 1e-12);
        if (alpha - oracle).abs() > 1e-8 {
            return Err(format!(
                "trial {trial}: alpha {alpha} vs golden-section {oracle}"
            ));
        }
    }
    Ok(())
}

fn monotone_and_positive() -> Result<(), String> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(73);
    for trial in 0..50 {
        let n = 2 + (rng.next_u64() % 99) as usize;
        let p = random_diagonal(&mut rng, n, 1000.0);
        let run = solve(&p, &SolverConfig::new(Method::Ss1)).map_err(|e| e.to_string())?;
        let r = run.trace.residuals();
        if let Some(k) = (1..r.len()).find(|&k| r[k] >= r[k - 1]) {
            return Err(format!("trial {trial} n={n}: residual rose at k={k}"));
        }
        let records = &run.trace.records[..run.iterations];
        if let Some(rec) = records
            .iter()
            .find(|rec| !rec.alpha.is_some_and(|a| a > 0.0))
        {
            return Err(format!(
                "trial {trial}: alpha {:?} at k={}",
                rec.alpha, rec.k
            ));
        }
    }
    Ok(())
}

fn limit_conventions() -> Result<(), String> {
    let guard = Guard::default();
    let zero = [0.0, 0.0];
    let checks = [
        (
            t_scalar(&[1.0, 2.0], &[3.0, -1.0], &zero, &guard),
            1.0,
            "T with g(y)=0",
        ),
        (
            beta_coeff(&[1.0, 2.0], &[3.0, -1.0], &zero, &guard),
            0.0,
            "beta with g(y)=0",
        ),
        (
            gamma_coeff(&[1.0, 2.0], &zero, &guard),
            0.0,
            "gamma with g(z)=0",
        ),
        (
            t_scalar(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0], &guard),
            3.0,
            "T example",
        ),
        (
            beta_coeff(&[1.0, 0.0], &[1.0, 0.0], &[1.0, 0.0], &guard),
            3.0,
            "beta example",
        ),
        (
            gamma_coeff(&[1.0, 1.0], &[2.0, 0.0], &guard),
            2.0,
            "gamma example",
        ),
    ];
    for (got, want, what) in checks {
        if got != Ok(want) {
            return Err(format!("{what}: {got:?} != {want}"));
        }
    }
    if beta_coeff(&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0], &guard).is_ok() {
        return Err("orthogonal g(x), g(w) must break down".into());
    }
    Ok(())
}

fn gradients_agree() -> Result<(), String> {
    // Step used at random points: near the cube root of machine epsilon.
    const H: f64 = 3e-5;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(74);
    for id in ProblemId::ALL {
        let sizes: &[usize] = if id == ProblemId::Ex8 {
            &[100]
        } else {
            &[4, 20, 50]
        };
        for &n in sizes {
            let p = make_example(id, n, Some(5)).map_err(|e| e.to_string())?;
            let mut points = vec![(p.initial_point(), 1e-6)];
            for _ in 0..10 {
                points.push(((0..n).map(|_| 4.0 * unit(&mut rng) - 2.0).collect(), H));
            }
            for (i, (x, h)) in points.iter().enumerate() {
                let rep = gradcheck(p.as_ref(), x, *h).map_err(|e| e.to_string())?;
                if rep.max_rel_error > 1e-5 {
                    return Err(format!("{id} n={n} point {i}: {:e}", rep.max_rel_error));
                }
            }
        }
    }
    Ok(())
}

fn deterministic_reruns() -> Result<(), String> {
    let cases = [
        (ProblemId::Ex3, 500, Method::Ss3, None),
        (ProblemId::Ex6, 200, Method::Ss2, None),
        (ProblemId::Ex8, 100, Method::Bb, None),
        (ProblemId::Ex9, 200, Method::Ss1, Some(9)),
        (ProblemId::Ex9, 200, Method::Cg, Some(9)),
    ];
    for (id, n, m, seed) in cases {
        let cfg = SolverConfig::new(m);
        let runs: Vec<_> = (0..2)
            .map(|_| {
                let p = make_example(id, n, seed).expect("valid example");
                solve(p.as_ref(), &cfg).expect("valid config")
            })
            .collect();
        if !runs[0].trace.same_numerics(&runs[1].trace) || runs[0].x_final != runs[1].x_final {
            return Err(format!("{id} {m} differs between runs"));
        }
    }
    let mut plan = BenchPlan::for_table(TableId::T3);
    plan.sizes = vec![300, 200];
    let a = emit_report(&run_plan(&plan).without_timing(), Format::Csv);
    let b = emit_report(&run_plan(&plan).without_timing(), Format::Csv);
    if a != b {
        return Err("bench CSV differs between runs".into());
    }
    Ok(())
}

type PropertyCheck = fn() -> Result<(), String>;

/// Structural properties that need no reference data.
pub fn criterion_7() -> Verdict {
    let mut v = Verdict::new(7, "property suite");
    let checks: [(&str, PropertyCheck); 6] = [
        ("quadratic model exact to 1e-10", model_exactness),
        (
            "closed-form step matches golden-section to 1e-8",
            step_optimality,
        ),
        (
            "SS1 monotone with alpha > 0 on 50 SPD diagonals",
            monotone_and_positive,
        ),
        ("T/beta/gamma limit conventions", limit_conventions),
        (
            "gradients agree with finite differences to 1e-5",
            gradients_agree,
        ),
        ("bit-identical reruns", deterministic_reruns),
    ];
    for (name, check) in checks {
        match check() {
            Ok(()) => v.check(true, name),
            Err(e) => v.check(false, format!("{name}: {e}")),
        }
    }
    v
}

/// Power sequences `r_{k+1} = r_k^p` have ACOC exactly `p`.
pub fn criterion_8() -> Verdict {
    let mut v = Verdict::new(8, "ACOC of synthetic power sequences");
    for p in [2.0_f64, 3.0, 4.0, 6.0] {
        let mut r = vec![0.5_f64];
        while r.len() < 5 {
            let next = r.last().expect("non-empty").powf(p);
            r.push(next);
        }
        let rep = acoc(&r);
        let rhos: Vec<f64> = rep.rho.iter().flatten().copied().collect();
        let ok = !rhos.is_empty() && rhos.iter().all(|rho| (rho - p).abs() <= 1e-12);
        v.check(ok, format!("p={p}: {rhos:?}"));
    }
    v
}

/// The scalar three-step variant on the trig-quartic problem, outside the numbered criteria.
pub fn scalar_three_step_on_trig_quartic() -> Result<usize, String> {
    let p = make_example(ProblemId::Ex6, 1000, None).map_err(|e| e.to_string())?;
    let run = solve(p.as_ref(), &SolverConfig::new(Method::Ss3s)).map_err(|e| e.to_string())?;
    if run.status == Status::Converged && run.final_residual() <= 1e-6 {
        Ok(run.iterations)
    } else {
        Err(format!(
            "{} after {} iterations, final ‖g‖ = {:e}",
            run.status,
            run.iterations,
            run.final_residual()
        ))
    }
}
