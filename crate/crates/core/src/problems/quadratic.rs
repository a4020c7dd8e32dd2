//! Convex quadratics `f(x) = ½ xᵀAx - bᵀx` with symmetric positive definite `A`.

use nalgebra::{DMatrix, DVector};

use super::{Problem, ProblemError};
use crate::linalg::{compensated_sum, DenseVector};

/// Storage for a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub enum SpdMatrix {
    Diagonal(Vec<f64>),
    /// Symmetric tridiagonal: `main` has n entries, `off` (sub = super) has n - 1.
    Tridiagonal {
        main: Vec<f64>,
        off: Vec<f64>,
    },
    Dense(DMatrix<f64>),
}

impl SpdMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SpdMatrix::Diagonal(d) => d.len(),
            SpdMatrix::Tridiagonal { main, .. } => main.len(),
            SpdMatrix::Dense(m) => m.nrows(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            SpdMatrix::Diagonal(_) => "diagonal",
            SpdMatrix::Tridiagonal { .. } => "tridiagonal",
            SpdMatrix::Dense(_) => "dense",
        }
    }

    /// `out = A x`. O(n) for diagonal and tridiagonal storage, O(n²) dense.
    pub fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        match self {
            SpdMatrix::Diagonal(d) => {
                for ((o, di), xi) in out.iter_mut().zip(d).zip(x) {
                    *o = di * xi;
                }
            }
            SpdMatrix::Tridiagonal { main, off } => {
                let n = main.len();
                for i in 0..n {
                    let mut acc = main[i] * x[i];
                    if i > 0 {
                        acc += off[i - 1] * x[i - 1];
                    }
                    if i + 1 < n {
                        acc += off[i] * x[i + 1];
                    }
                    out[i] = acc;
                }
            }
            SpdMatrix::Dense(m) => {
                for (i, o) in out.iter_mut().enumerate() {
                    *o = m.row(i).iter().zip(x).fold(0.0, |acc, (a, b)| acc + a * b);
                }
            }
        }
    }

    fn check_spd(&self) -> Result<(), ProblemError> {
        match self {
            SpdMatrix::Diagonal(d) => {
                if let Some((i, v)) = d
                    .iter()
                    .enumerate()
                    .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
                {
                    return Err(ProblemError::NotSpd(format!("diagonal entry {i} is {v}")));
                }
            }
            SpdMatrix::Tridiagonal { main, off } => {
                if off.len() + 1 != main.len() {
                    return Err(ProblemError::DimensionMismatch {
                        expected: main.len().saturating_sub(1),
                        got: off.len(),
                    });
                }
                // LDLᵀ: A is SPD iff every pivot is positive
                let mut pivot = main[0];
                for i in 0..main.len() {
                    if i > 0 {
                        pivot = main[i] - off[i - 1] * off[i - 1] / pivot;
                    }
                    if !(pivot > 0.0 && pivot.is_finite()) {
                        return Err(ProblemError::NotSpd(format!(
                            "tridiagonal LDLᵀ pivot {i} is {pivot}"
                        )));
                    }
                }
            }
            SpdMatrix::Dense(m) => {
                if !m.is_square() {
                    return Err(ProblemError::NotSpd(format!(
                        "matrix is {}x{}",
                        m.nrows(),
                        m.ncols()
                    )));
                }
                let n = m.nrows();
                for i in 0..n {
                    for j in 0..i {
                        let (a, b) = (m[(i, j)], m[(j, i)]);
                        if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                            return Err(ProblemError::NotSpd(format!(
                                "entries ({i},{j}) and ({j},{i}) differ"
                            )));
                        }
                    }
                }
                if m.clone().cholesky().is_none() {
                    return Err(ProblemError::NotSpd("Cholesky factorisation failed".into()));
                }
            }
        }
        Ok(())
    }
}

/// The operator `A` together with the right-hand side `b`.
#[derive(Debug, Clone)]
pub struct QuadraticOperator {
    matrix: SpdMatrix,
    rhs: DenseVector,
}

impl QuadraticOperator {
    pub fn new(matrix: SpdMatrix, rhs: DenseVector) -> Result<Self, ProblemError> {
        matrix.check_spd()?;
        if rhs.len() != matrix.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: matrix.dim(),
                got: rhs.len(),
            });
        }
        Ok(QuadraticOperator { matrix, rhs })
    }

    pub fn diagonal(diag: Vec<f64>, rhs: DenseVector) -> Result<Self, ProblemError> {
        Self::new(SpdMatrix::Diagonal(diag), rhs)
    }

    pub fn tridiagonal(
        main: Vec<f64>,
        off: Vec<f64>,
        rhs: DenseVector,
    ) -> Result<Self, ProblemError> {
        Self::new(SpdMatrix::Tridiagonal { main, off }, rhs)
    }

    pub fn dense(matrix: DMatrix<f64>, rhs: DenseVector) -> Result<Self, ProblemError> {
        Self::new(SpdMatrix::Dense(matrix), rhs)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SpdMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn matvec(&self, x: &[f64]) -> Result<DenseVector, ProblemError> {
        if x.len() != self.dim() {
            return Err(ProblemError::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let mut out = vec![0.0; x.len()];
        self.matrix.matvec_into(x, &mut out);
        Ok(out)
    }

    /// `out = A x - b`.
    pub fn residual_into(&self, x: &[f64], out: &mut [f64]) {
        self.matrix.matvec_into(x, out);
        for (o, b) in out.iter_mut().zip(&self.rhs) {
            *o -= b;
        }
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        let mut ax = vec![0.0; x.len()];
        self.matrix.matvec_into(x, &mut ax);
        compensated_sum(
            x.iter()
                .zip(&ax)
                .zip(&self.rhs)
                .map(|((xi, axi), bi)| xi * (0.5 * axi - bi)),
        )
    }

    /// Exact solution of `A x = b` via nalgebra, for small test systems.
    pub fn solve_dense(&self) -> Option<DenseVector> {
        let n = self.dim();
        let mut a = DMatrix::zeros(n, n);
        let mut col = vec![0.0; n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e[j] = 1.0;
            self.matrix.matvec_into(&e, &mut col);
            a.set_column(j, &DVector::from_column_slice(&col));
            e[j] = 0.0;
        }
        let chol = a.cholesky()?;
        Some(
            chol.solve(&DVector::from_column_slice(&self.rhs))
                .as_slice()
                .to_vec(),
        )
    }
}

/// A quadratic wired up as a [`Problem`]: gradient `A x - b`.
#[derive(Debug, Clone)]
pub struct QuadraticProblem {
    id: String,
    op: QuadraticOperator,
    x0: DenseVector,
    solution: Option<DenseVector>,
}

impl QuadraticProblem {
    pub fn new(
        id: impl Into<String>,
        op: QuadraticOperator,
        x0: DenseVector,
        solution: Option<DenseVector>,
    ) -> Result<Self, ProblemError> {
        let n = op.dim();
        for len in std::iter::once(x0.len()).chain(solution.as_ref().map(Vec::len)) {
            if len != n {
                return Err(ProblemError::DimensionMismatch {
                    expected: n,
                    got: len,
                });
            }
        }
        Ok(QuadraticProblem {
            id: id.into(),
            op,
            x0,
            solution,
        })
    }

    pub fn operator(&self) -> &QuadraticOperator {
        &self.op
    }
}

impl Problem for QuadraticProblem {
    fn name(&self) -> &str {
        &self.id
    }
    fn dim(&self) -> usize {
        self.op.dim()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.op.residual_into(x, out)
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(self.op.objective(x))
    }
    fn solution(&self) -> Option<&[f64]> {
        self.solution.as_deref()
    }
    fn as_quadratic(&self) -> Option<&QuadraticProblem> {
        Some(self)
    }
}
