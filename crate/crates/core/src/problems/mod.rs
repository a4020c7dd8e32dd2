//! Gradient oracles: the test-problem suite, quadratic operators and a
//! finite-difference checker for hand-written gradients.
//!
//! A [`Problem`] is immutable once built and carries no interior state, so a
//! single instance may be evaluated from many threads at once.

mod examples;
mod gradcheck;
mod quadratic;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::linalg::DenseVector;

pub use examples::{
    make_example, make_example_with, ChainedCubic, ChainedRosenbrock, CubicTridiagonal, Ex5Start,
    Ex9Mesh, ExampleOptions, ExpSum, PairedTrigQuartic,
};
pub use gradcheck::{finite_diff_gradient, gradcheck, GradCheckReport, GRADCHECK_FLOOR};
pub use quadratic::{QuadraticOperator, QuadraticProblem, SpdMatrix};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem id '{0}' (expected one of ex1..ex6, ex4pre, ex8, ex9)")]
    UnknownId(String),
    #[error("{id}: dimension n = {n} is not allowed: {reason}")]
    BadDimension {
        id: ProblemId,
        n: usize,
        reason: &'static str,
    },
    #[error("ex9 needs a seed to draw its reference solution")]
    MissingSeed,
    #[error("dimension mismatch: expected length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("problem '{0}' has no objective; finite differences need one")]
    NoObjective(String),
    #[error("finite-difference step must be positive and finite, got {0}")]
    BadStep(f64),
    #[error("matrix is not symmetric positive definite: {0}")]
    NotSpd(String),
}

/// Stable identifiers of the built-in test problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex4Pre,
    Ex5,
    Ex6,
    Ex8,
    Ex9,
}

impl ProblemId {
    pub const ALL: [ProblemId; 9] = [
        ProblemId::Ex1,
        ProblemId::Ex2,
        ProblemId::Ex3,
        ProblemId::Ex4,
        ProblemId::Ex4Pre,
        ProblemId::Ex5,
        ProblemId::Ex6,
        ProblemId::Ex8,
        ProblemId::Ex9,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ProblemId::Ex1 => "ex1",
            ProblemId::Ex2 => "ex2",
            ProblemId::Ex3 => "ex3",
            ProblemId::Ex4 => "ex4",
            ProblemId::Ex4Pre => "ex4pre",
            ProblemId::Ex5 => "ex5",
            ProblemId::Ex6 => "ex6",
            ProblemId::Ex8 => "ex8",
            ProblemId::Ex9 => "ex9",
        }
    }

    /// Dimension used when the caller does not pick one.
    pub fn default_dim(self) -> usize {
        match self {
            ProblemId::Ex8 => 100,
            _ => 1000,
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| ProblemError::UnknownId(s.to_string()))
    }
}

/// A gradient oracle for `min f(x)`, i.e. the system `g(x) = ∇f(x) = 0`.
pub trait Problem: Send + Sync {
    /// Stable identifier, e.g. `"ex1"`.
    fn name(&self) -> &str;

    fn dim(&self) -> usize;

    /// Default starting point.
    fn initial_point(&self) -> DenseVector;

    /// Writes `g(x)` into `out`. Both slices have length [`Problem::dim`].
    ///
    /// Nonfinite components are written as they come out of the formula; the
    /// caller decides how to treat them.
    fn gradient_into(&self, x: &[f64], out: &mut [f64]);

    fn objective(&self, _x: &[f64]) -> Option<f64> {
        None
    }

    /// Known minimiser, when the problem was built around one.
    fn solution(&self) -> Option<&[f64]> {
        None
    }

    /// Downcast hook used by the conjugate-gradient baseline.
    fn as_quadratic(&self) -> Option<&QuadraticProblem> {
        None
    }

    /// Length-checked gradient evaluation.
    fn gradient(&self, x: &[f64]) -> Result<DenseVector, ProblemError> {
        if x.len() != self.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut out = vec![0.0; x.len()];
        self.gradient_into(x, &mut out);
        Ok(out)
    }
}

/// Wraps a problem with a different starting point.
pub struct WithStart<P> {
    inner: P,
    x0: DenseVector,
}

impl<P: Problem> WithStart<P> {
    pub fn new(inner: P, x0: DenseVector) -> Result<Self, ProblemError> {
        if x0.len() != inner.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: inner.dim(),
                got: x0.len(),
            });
        }
        Ok(WithStart { inner, x0 })
    }
}

impl<P: Problem> Problem for WithStart<P> {
    fn name(&self) -> &str {
        self.inner.name()
    }
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.inner.gradient_into(x, out)
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        self.inner.objective(x)
    }
    fn solution(&self) -> Option<&[f64]> {
        self.inner.solution()
    }
    fn as_quadratic(&self) -> Option<&QuadraticProblem> {
        self.inner.as_quadratic()
    }
}

impl<P: Problem + ?Sized> Problem for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn initial_point(&self) -> DenseVector {
        (**self).initial_point()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).gradient_into(x, out)
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        (**self).objective(x)
    }
    fn solution(&self) -> Option<&[f64]> {
        (**self).solution()
    }
    fn as_quadratic(&self) -> Option<&QuadraticProblem> {
        (**self).as_quadratic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_round_trip_through_strings() {
        for id in ProblemId::ALL {
            assert_eq!(id.as_str().parse::<ProblemId>().unwrap(), id);
        }
        assert_eq!("EX4PRE".parse::<ProblemId>().unwrap(), ProblemId::Ex4Pre);
        assert!(matches!(
            "ex7".parse::<ProblemId>(),
            Err(ProblemError::UnknownId(_))
        ));
    }

    #[test]
    fn gradient_rejects_wrong_length() {
        let p = make_example(ProblemId::Ex1, 3, None).unwrap();
        assert_eq!(
            p.gradient(&[0.0, 0.0]),
            Err(ProblemError::DimensionMismatch {
                expected: 3,
                got: 2
            })
        );
    }

    #[test]
    fn with_start_overrides_only_the_start() {
        let p = make_example(ProblemId::Ex1, 2, None).unwrap();
        let moved = WithStart::new(p, vec![0.5, -0.5]).unwrap();
        assert_eq!(moved.initial_point(), vec![0.5, -0.5]);
        assert_eq!(moved.name(), "ex1");
        assert!(WithStart::new(make_example(ProblemId::Ex1, 2, None).unwrap(), vec![1.0]).is_err());
    }
}
