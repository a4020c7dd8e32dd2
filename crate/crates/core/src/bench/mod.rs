//! Regenerates the benchmark tables: every (method, n) cell is an
//! independent run under the same stopping rule.

mod reference;
mod report;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagnostics::{acoc, summarize};
use crate::problems::{make_example, ProblemId};
use crate::solver::{solve, Method, SolverConfig, SolverError, DEFAULT_MAX_ITER};

pub use reference::{reference, ReferenceCell};
pub use report::{emit_report, format_sci, Format};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BenchError {
    #[error("unknown table '{0}' (expected t1..t6, t8, t9, t10)")]
    UnknownTable(String),
    #[error("unknown report format '{0}' (expected csv, md or json)")]
    UnknownFormat(String),
    #[error(transparent)]
    Method(#[from] SolverError),
    #[error("plan for {0} has no methods or no sizes")]
    EmptyPlan(TableId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TableId {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T8,
    T9,
    T10,
}

impl TableId {
    pub const ALL: [TableId; 9] = [
        TableId::T1,
        TableId::T2,
        TableId::T3,
        TableId::T4,
        TableId::T5,
        TableId::T6,
        TableId::T8,
        TableId::T9,
        TableId::T10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableId::T1 => "t1",
            TableId::T2 => "t2",
            TableId::T3 => "t3",
            TableId::T4 => "t4",
            TableId::T5 => "t5",
            TableId::T6 => "t6",
            TableId::T8 => "t8",
            TableId::T9 => "t9",
            TableId::T10 => "t10",
        }
    }

    pub fn problem(self) -> ProblemId {
        match self {
            TableId::T1 | TableId::T10 => ProblemId::Ex1,
            TableId::T2 => ProblemId::Ex2,
            TableId::T3 => ProblemId::Ex3,
            TableId::T4 => ProblemId::Ex4,
            TableId::T5 => ProblemId::Ex5,
            TableId::T6 => ProblemId::Ex6,
            TableId::T8 => ProblemId::Ex8,
            TableId::T9 => ProblemId::Ex9,
        }
    }

    /// Tables laid out as `n` rows by method columns.
    pub fn is_iteration_grid(self) -> bool {
        matches!(
            self,
            TableId::T1 | TableId::T2 | TableId::T3 | TableId::T4 | TableId::T5 | TableId::T6
        )
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TableId {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        TableId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| BenchError::UnknownTable(s.to_string()))
    }
}

/// Seed used for t9 when none is given.
pub const DEFAULT_T9_SEED: u64 = 1;
/// t9's published BB counts run far past 2000, so its cap is raised.
pub const T9_MAX_ITER: usize = 50_000;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub table: TableId,
    pub methods: Vec<Method>,
    pub sizes: Vec<usize>,
    pub seed: Option<u64>,
    pub format: Format,
    pub max_iter: usize,
    /// Run cells on the rayon pool. Output order does not depend on it.
    pub parallel: bool,
}

impl BenchPlan {
    /// The table's own rows and columns.
    pub fn for_table(table: TableId) -> Self {
        use Method::*;
        let methods = match table {
            TableId::T9 => vec![Ss1, Ss2, Ss3, Bb, Cg],
            TableId::T10 => vec![Ss1, Ss2, Ss3],
            _ => vec![Ss1, Ss2, Ss3, Bb],
        };
        BenchPlan {
            table,
            methods,
            sizes: reference::table_sizes(table).to_vec(),
            seed: (table == TableId::T9).then_some(DEFAULT_T9_SEED),
            format: Format::Csv,
            max_iter: if table == TableId::T9 {
                T9_MAX_ITER
            } else {
                DEFAULT_MAX_ITER
            },
            parallel: true,
        }
    }

    /// Replaces the method list from names such as `"ss1,ss2,bb"`.
    /// Names of external reference methods are rejected.
    pub fn with_method_names(mut self, names: &str) -> Result<Self, BenchError> {
        self.methods = names
            .split(',')
            .filter(|s| !s.trim().is_empty())
            .map(str::parse)
            .collect::<Result<_, SolverError>>()?;
        Ok(self)
    }

    pub fn acoc_mode(&self) -> bool {
        self.table == TableId::T10
    }

    fn solver_config(&self, method: Method) -> SolverConfig {
        SolverConfig::new(method)
            .with_max_iter(self.max_iter)
            .with_acoc_mode(self.acoc_mode())
    }
}

/// One executed cell. Field names and order are the CSV/JSON contract.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cell {
    pub table: String,
    pub method: String,
    pub n: usize,
    pub iterations: Option<usize>,
    pub final_gnorm: Option<f64>,
    pub cpu_seconds: f64,
    pub status: String,
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub acoc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: TableId,
    pub methods: Vec<Method>,
    pub sizes: Vec<usize>,
    pub cells: Vec<Cell>,
}

impl Report {
    pub fn empty(table: TableId) -> Self {
        Report {
            table,
            methods: Vec::new(),
            sizes: Vec::new(),
            cells: Vec::new(),
        }
    }

    pub fn cell(&self, method: Method, n: usize) -> Option<&Cell> {
        self.cells
            .iter()
            .find(|c| c.method == method.as_str() && c.n == n)
    }

    /// Copy with every wall-clock field zeroed, for byte comparisons.
    pub fn without_timing(&self) -> Report {
        let mut r = self.clone();
        for c in &mut r.cells {
            c.cpu_seconds = 0.0;
        }
        r
    }
}

fn run_cell(plan: &BenchPlan, method: Method, n: usize) -> Cell {
    let mut cell = Cell {
        table: plan.table.to_string(),
        method: method.as_str().to_string(),
        n,
        iterations: None,
        final_gnorm: None,
        cpu_seconds: 0.0,
        status: String::new(),
        seed: plan.seed,
        acoc: None,
    };
    let problem = match make_example(plan.table.problem(), n, plan.seed) {
        Ok(p) => p,
        Err(e) => {
            cell.status = format!("error: {e}");
            return cell;
        }
    };
    match solve(problem.as_ref(), &plan.solver_config(method)) {
        Ok(result) => {
            let summary = summarize(&result);
            cell.iterations = Some(summary.iterations);
            cell.final_gnorm = Some(summary.final_gnorm);
            cell.cpu_seconds = (summary.cpu_seconds * 1000.0).round() / 1000.0;
            cell.status = summary.status;
            if plan.acoc_mode() {
                cell.acoc = acoc(&result.trace.residuals()).rho_final;
            }
        }
        Err(e) => cell.status = format!("error: {e}"),
    }
    cell
}

/// Executes every cell of the plan. Cell failures are recorded in the cell's
/// status; output order is size-major, then method, regardless of scheduling.
pub fn run_table(plan: &BenchPlan) -> Result<Report, BenchError> {
    if plan.methods.is_empty() || plan.sizes.is_empty() {
        return Err(BenchError::EmptyPlan(plan.table));
    }
    let jobs: Vec<(usize, Method)> = plan
        .sizes
        .iter()
        .flat_map(|&n| plan.methods.iter().map(move |&m| (n, m)))
        .collect();
    let cells = if plan.parallel {
        jobs.par_iter()
            .map(|&(n, m)| run_cell(plan, m, n))
            .collect()
    } else {
        jobs.iter().map(|&(n, m)| run_cell(plan, m, n)).collect()
    };
    Ok(Report {
        table: plan.table,
        methods: plan.methods.clone(),
        sizes: plan.sizes.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_plans_mirror_tables() {
        let t1 = BenchPlan::for_table(TableId::T1);
        assert_eq!(t1.sizes, vec![1000, 2000, 5000, 10000, 50000, 100000]);
        assert_eq!(
            t1.methods,
            vec![Method::Ss1, Method::Ss2, Method::Ss3, Method::Bb]
        );
        let t9 = BenchPlan::for_table(TableId::T9);
        assert_eq!(t9.seed, Some(DEFAULT_T9_SEED));
        assert_eq!(t9.max_iter, T9_MAX_ITER);
        assert!(t9.methods.contains(&Method::Cg));
        assert!(BenchPlan::for_table(TableId::T10).acoc_mode());
        assert_eq!("T10".parse::<TableId>().unwrap(), TableId::T10);
        assert!("t7".parse::<TableId>().is_err());
    }

    #[test]
    fn external_methods_are_rejected_by_name() {
        let err = BenchPlan::for_table(TableId::T9)
            .with_method_names("ss3,ABB")
            .unwrap_err();
        assert_eq!(
            err,
            BenchError::Method(SolverError::ExternalMethod("ABB".into()))
        );
        assert!(err.to_string().contains("not implemented"));
        let ok = BenchPlan::for_table(TableId::T1)
            .with_method_names("ss2, bb")
            .unwrap();
        assert_eq!(ok.methods, vec![Method::Ss2, Method::Bb]);
    }

    #[test]
    fn cell_failures_stay_in_cell() {
        let mut plan = BenchPlan::for_table(TableId::T6);
        plan.sizes = vec![7, 8];
        plan.methods = vec![Method::Ss1, Method::Cg];
        let report = run_table(&plan).unwrap();
        assert_eq!(report.cells.len(), 4);
        assert!(report.cells[0].status.starts_with("error:"));
        assert!(report.cells[0].status.contains("even"));
        assert!(report.cells[3].status.contains("quadratic"));
        assert!(report.cells[2].iterations.is_some());
    }

    #[test]
    fn order_is_size_major() {
        let mut plan = BenchPlan::for_table(TableId::T1);
        plan.sizes = vec![20, 10];
        let report = run_table(&plan).unwrap();
        let order: Vec<(usize, &str)> = report
            .cells
            .iter()
            .map(|c| (c.n, c.method.as_str()))
            .collect();
        assert_eq!(
            order,
            vec![
                (20, "ss1"),
                (20, "ss2"),
                (20, "ss3"),
                (20, "bb"),
                (10, "ss1"),
                (10, "ss2"),
                (10, "ss3"),
                (10, "bb")
            ]
        );
        let empty = BenchPlan {
            sizes: vec![],
            ..plan
        };
        assert_eq!(run_table(&empty), Err(BenchError::EmptyPlan(TableId::T1)));
    }
}
