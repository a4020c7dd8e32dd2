//! `superschemes` command-line front end.
//!
//! Exit codes: 0 when a run converges, reaches its iteration cap or a table
//! completes; 2 when a run breaks down, diverges or a gradient check fails;
//! 1 for usage and I/O errors.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};

use config::ConfigFile;
use superschemes::bench::{emit_report, run_table, BenchPlan, Format, TableId};
use superschemes::diagnostics::{acoc, summarize, AcocStatus};
use superschemes::problems::{gradcheck, make_example, Problem, ProblemId};
use superschemes::solver::{solve, Method, RunResult, SolverConfig, StepRule, ACOC_TOL};

/// Largest component-wise relative error accepted by `gradcheck`.
const GRADCHECK_TOL: f64 = 1e-5;
const DEFAULT_FD_STEP: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(
    name = "superschemes",
    version,
    about = "Line-search-free gradient schemes, benchmark tables and diagnostics"
)]
struct Cli {
    /// Flat `key = value` file supplying defaults; explicit flags override it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one method on one problem.
    Solve(SolveArgs),
    /// Regenerate a benchmark table.
    Bench(BenchArgs),
    /// Estimate the order of convergence of one run.
    Acoc(AcocArgs),
    /// Compare a problem's gradient with central differences of its objective.
    Gradcheck(GradcheckArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    /// Problem id: ex1..ex6, ex4pre, ex8, ex9.
    #[arg(long)]
    problem: Option<ProblemId>,
    /// Dimension; defaults to the problem's standard size.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for problems with random data (required by ex9).
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// ss1, ss2, ss3, ss2s, ss3s, bb or cg.
    #[arg(long)]
    method: Option<Method>,
    /// Step-size rule for the SS family: primal or dual.
    #[arg(long)]
    step_rule: Option<StepRule>,
    /// Stop when the gradient norm is at or below this value.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Tighten the tolerance for order-of-convergence studies and print ρ.
    #[arg(long)]
    acoc: bool,
    /// Write the per-iteration trace as CSV.
    #[arg(long, value_name = "PATH")]
    trace: Option<PathBuf>,
    /// Write a JSON run summary.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// t1..t6, t8, t9 or t10.
    #[arg(long)]
    table: Option<TableId>,
    /// Comma-separated methods replacing the table's own columns.
    #[arg(long)]
    method: Option<String>,
    /// Comma-separated sizes replacing the table's own rows.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// csv, md or json.
    #[arg(long)]
    format: Option<Format>,
    /// Output file; the report goes to standard output when absent.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct AcocArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long)]
    method: Option<Method>,
    #[arg(long)]
    step_rule: Option<StepRule>,
    /// Defaults to the order-of-convergence tolerance 1e-13.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the ρ sequence as JSON.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GradcheckArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    /// Central-difference step [default: 1e-6].
    #[arg(long)]
    h: Option<f64>,
    /// Write the comparison as JSON.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| anyhow!("missing --{flag} (give it on the command line or in --config)"))
}

fn build_problem(args: &ProblemArgs, cfg: &ConfigFile) -> Result<Box<dyn Problem>> {
    let id: ProblemId = required(cfg.merge(args.problem, "problem")?, "problem")?;
    let n = cfg.merge(args.n, "n")?.unwrap_or(id.default_dim());
    let seed = cfg.merge(args.seed, "seed")?;
    Ok(make_example(id, n, seed)?)
}

fn solver_config(
    cfg: &ConfigFile,
    method: Option<Method>,
    rule: Option<StepRule>,
    tol: Option<f64>,
    max_iter: Option<usize>,
    acoc_mode: bool,
) -> Result<SolverConfig> {
    let method = required(cfg.merge(method, "method")?, "method")?;
    let mut sc = SolverConfig::new(method).with_acoc_mode(acoc_mode);
    if let Some(rule) = cfg.merge(rule, "step-rule")? {
        sc = sc.with_step_rule(rule);
    }
    if let Some(tol) = cfg.merge(tol, "tol")? {
        sc = sc.with_tol(tol);
    }
    if let Some(max_iter) = cfg.merge(max_iter, "max-iter")? {
        sc = sc.with_max_iter(max_iter);
    }
    sc.validate()?;
    Ok(sc)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}

fn exit_for(run: &RunResult) -> ExitCode {
    if run.status.is_failure() {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_solve(args: SolveArgs, cfg: &ConfigFile) -> Result<ExitCode> {
    let acoc_mode = cfg.flag(args.acoc, "acoc")?;
    let sc = solver_config(
        cfg,
        args.method,
        args.step_rule,
        args.tol,
        args.max_iter,
        acoc_mode,
    )?;
    let problem = build_problem(&args.problem, cfg)?;
    let run = solve(problem.as_ref(), &sc)?;
    let summary = summarize(&run);

    println!("{} k={}", run.status, run.iterations);
    println!(
        "{} on {} (n={}): final ‖g‖ = {:e}, {:.3} s, {} gradient evaluations",
        summary.method,
        summary.problem,
        summary.n,
        summary.final_gnorm,
        summary.cpu_seconds,
        run.gradient_evals
    );
    if let Some(b) = run.breakdown {
        println!("breakdown: {b}");
    }
    let rho = acoc_mode
        .then(|| acoc(&run.trace.residuals()).rho_final)
        .flatten();
    if acoc_mode {
        match rho {
            Some(r) => println!("ACOC ρ_final = {r:.4}"),
            None => println!("ACOC: not enough usable residuals"),
        }
    }

    if let Some(path) = cfg.merge(args.trace, "trace")? {
        let w = create(&path)?;
        run.trace
            .write_csv(w)
            .with_context(|| format!("cannot write trace {}", path.display()))?;
    }
    if let Some(path) = cfg.merge(args.out, "out")? {
        let mut value = serde_json::to_value(&summary)?;
        value["gradient_evals"] = run.gradient_evals.into();
        if let Some(r) = rho {
            value["acoc"] = r.into();
        }
        write_json(&path, &value)?;
    }
    Ok(exit_for(&run))
}

fn parse_sizes(list: &str) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().with_context(|| format!("bad size `{s}` in --n")))
        .collect()
}

fn cmd_bench(args: BenchArgs, cfg: &ConfigFile) -> Result<ExitCode> {
    let table: TableId = required(cfg.merge(args.table, "table")?, "table")?;
    let mut plan = BenchPlan::for_table(table);
    if let Some(methods) = cfg.merge(args.method, "method")? {
        plan = plan.with_method_names(&methods)?;
    }
    if let Some(sizes) = cfg.merge(args.n, "n")? {
        plan.sizes = parse_sizes(&sizes)?;
    }
    if let Some(seed) = cfg.merge(args.seed, "seed")? {
        plan.seed = Some(seed);
    }
    if let Some(max_iter) = cfg.merge(args.max_iter, "max-iter")? {
        plan.max_iter = max_iter;
    }
    plan.format = cfg.merge(args.format, "format")?.unwrap_or_default();

    let report = run_table(&plan)?;
    let bytes = emit_report(&report, plan.format);
    match cfg.merge(args.out, "out")? {
        Some(path) => {
            let mut w = create(&path)?;
            w.write_all(&bytes)?;
            w.flush()
                .with_context(|| format!("cannot write {}", path.display()))?;
            let converged = report
                .cells
                .iter()
                .filter(|c| c.status == "converged")
                .count();
            println!(
                "{table}: {} cells, {converged} converged, written to {}",
                report.cells.len(),
                path.display()
            );
        }
        None => io::stdout().write_all(&bytes)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_acoc(args: AcocArgs, cfg: &ConfigFile) -> Result<ExitCode> {
    let tol = cfg.merge(args.tol, "tol")?.or(Some(ACOC_TOL));
    let sc = solver_config(cfg, args.method, args.step_rule, tol, args.max_iter, true)?;
    let problem = build_problem(&args.problem, cfg)?;
    let run = solve(problem.as_ref(), &sc)?;
    let report = acoc(&run.trace.residuals());

    println!("{} k={}", run.status, run.iterations);
    println!("{:>4}  {:>12}  {:>8}", "k", "‖g‖", "ρ_k");
    for (k, r) in report.residuals.iter().enumerate() {
        let rho = k
            .checked_sub(1)
            .and_then(|j| report.rho.get(j).copied().flatten())
            .map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        println!("{k:>4}  {r:>12.4e}  {rho:>8}");
    }
    match (report.status, report.rho_final) {
        (AcocStatus::Ok, Some(r)) => println!("ρ_final = {r:.4}"),
        _ => println!("ρ_final undefined: fewer than three usable residuals"),
    }
    if let Some(path) = cfg.merge(args.out, "out")? {
        let mut value = serde_json::to_value(&report)?;
        value["method"] = run.method.as_str().into();
        value["problem"] = run.problem.clone().into();
        value["run_status"] = run.status.as_str().into();
        write_json(&path, &value)?;
    }
    Ok(exit_for(&run))
}

fn cmd_gradcheck(args: GradcheckArgs, cfg: &ConfigFile) -> Result<ExitCode> {
    let h = cfg.merge(args.h, "h")?.unwrap_or(DEFAULT_FD_STEP);
    let problem = build_problem(&args.problem, cfg)?;
    let x0 = problem.initial_point();
    let rep = gradcheck(problem.as_ref(), &x0, h)?;
    let pass = rep.max_rel_error <= GRADCHECK_TOL;
    println!(
        "{} n={} h={h:e}: max relative error {:e} at index {} (absolute {:e})",
        problem.name(),
        problem.dim(),
        rep.max_rel_error,
        rep.worst_index,
        rep.max_abs_error
    );
    println!("{}", if pass { "ok" } else { "FAILED: exceeds 1e-5" });
    if let Some(path) = cfg.merge(args.out, "out")? {
        let value = serde_json::json!({
            "problem": problem.name(),
            "n": problem.dim(),
            "h": h,
            "max_rel_error": rep.max_rel_error,
            "worst_index": rep.worst_index,
            "max_abs_error": rep.max_abs_error,
            "pass": pass,
        });
        write_json(&path, &value)?;
    }
    Ok(if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match cli.command {
        Command::Solve(a) => cmd_solve(a, &cfg),
        Command::Bench(a) => cmd_bench(a, &cfg),
        Command::Acoc(a) => cmd_acoc(a, &cfg),
        Command::Gradcheck(a) => cmd_gradcheck(a, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
