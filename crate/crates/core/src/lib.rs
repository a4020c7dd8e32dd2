//! Line-search-free gradient schemes for unconstrained minimisation, with the
//! test problems, convergence diagnostics and table harness used to study them.
//!
//! ```
//! use superschemes::problems::{make_example, ProblemId};
//! use superschemes::solver::{solve, Method, SolverConfig, Status};
//!
//! let p = make_example(ProblemId::Ex1, 100, None).unwrap();
//! let run = solve(p.as_ref(), &SolverConfig::new(Method::Ss2)).unwrap();
//! assert_eq!(run.status, Status::Converged);
//! ```

pub mod bench;
pub mod diagnostics;
pub mod linalg;
pub mod problems;
pub mod solver;

pub use problems::{make_example, Problem, ProblemId};
pub use solver::{solve, Method, RunResult, SolverConfig, Status};
