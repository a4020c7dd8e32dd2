//! The nine built-in test problems, with hand-differentiated gradients.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use super::quadratic::{QuadraticOperator, QuadraticProblem};
use super::{Problem, ProblemError, ProblemId};
use crate::linalg::{compensated_sum, DenseVector};

/// Reading of ex5's printed starting point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ex5Start {
    /// Repeat `(-1, 2, 1)`, truncated when `n` is not a multiple of 3.
    #[default]
    Triple,
    /// Repeat `(-1.2, 1)`.
    Pair,
}

/// Mesh width of ex9's tridiagonal stencil.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Ex9Mesh {
    /// `h = 11 / n`.
    #[default]
    Printed,
    /// `h = 1 / n`.
    Unit,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ExampleOptions {
    pub seed: Option<u64>,
    pub ex5_start: Ex5Start,
    pub ex9_mesh: Ex9Mesh,
}

/// Builds one of the built-in problems with default options.
pub fn make_example(
    id: ProblemId,
    n: usize,
    seed: Option<u64>,
) -> Result<Box<dyn Problem>, ProblemError> {
    make_example_with(
        id,
        n,
        &ExampleOptions {
            seed,
            ..ExampleOptions::default()
        },
    )
}

pub fn make_example_with(
    id: ProblemId,
    n: usize,
    opts: &ExampleOptions,
) -> Result<Box<dyn Problem>, ProblemError> {
    if n < 2 {
        return Err(ProblemError::BadDimension {
            id,
            n,
            reason: "n must be at least 2",
        });
    }
    let problem: Box<dyn Problem> = match id {
        ProblemId::Ex1 => Box::new(ExpSum::new(id, vec![1.0; n], None)),
        ProblemId::Ex4 => {
            let weights = (1..=n).map(|i| i as f64 / 10.0).collect();
            Box::new(ExpSum::new(id, vec![0.3; n], Some(weights)))
        }
        // Ex4's gradient system multiplied through by diag(i/10)^-1.
        ProblemId::Ex4Pre => Box::new(ExpSum::new(id, vec![0.3; n], None)),
        ProblemId::Ex2 => Box::new(CubicTridiagonal { x0: vec![-0.8; n] }),
        ProblemId::Ex3 => Box::new(ChainedRosenbrock { x0: vec![-1.2; n] }),
        ProblemId::Ex5 => {
            let pattern: &[f64] = match opts.ex5_start {
                Ex5Start::Triple => &[-1.0, 2.0, 1.0],
                Ex5Start::Pair => &[-1.2, 1.0],
            };
            Box::new(ChainedCubic {
                x0: pattern.iter().copied().cycle().take(n).collect(),
            })
        }
        ProblemId::Ex6 => {
            if !n.is_multiple_of(2) {
                return Err(ProblemError::BadDimension {
                    id,
                    n,
                    reason: "ex6 couples coordinates in pairs, n must be even",
                });
            }
            Box::new(PairedTrigQuartic {
                x0: [3.0, 0.1].iter().copied().cycle().take(n).collect(),
            })
        }
        ProblemId::Ex8 => {
            if n != 100 {
                return Err(ProblemError::BadDimension {
                    id,
                    n,
                    reason: "ex8 is defined only for n = 100 (A = diag(1..100))",
                });
            }
            Box::new(ex8())
        }
        ProblemId::Ex9 => {
            let seed = opts.seed.ok_or(ProblemError::MissingSeed)?;
            Box::new(ex9(n, seed, opts.ex9_mesh))
        }
    };
    Ok(problem)
}

fn ex8() -> QuadraticProblem {
    let diag: Vec<f64> = (1..=100).map(|i| i as f64).collect();
    let solution = diag.iter().map(|d| 1.0 / d).collect();
    let op = QuadraticOperator::diagonal(diag, vec![1.0; 100]).expect("diag(1..100) is SPD");
    QuadraticProblem::new("ex8", op, vec![0.0; 100], Some(solution)).expect("consistent sizes")
}

/// Reference solution for ex9: `x*_i = -10 + 20 u_i`, `u_i` uniform in [0, 1).
///
/// `u_i` is the top 53 bits of successive Xoshiro256++ outputs (seeded via
/// SplitMix64), so a seed gives the same vector on every platform.
pub(crate) fn ex9_reference_solution(n: usize, seed: u64) -> DenseVector {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
            -10.0 + 20.0 * u
        })
        .collect()
}

fn ex9(n: usize, seed: u64, mesh: Ex9Mesh) -> QuadraticProblem {
    let h = match mesh {
        Ex9Mesh::Printed => 11.0 / n as f64,
        Ex9Mesh::Unit => 1.0 / n as f64,
    };
    let inv_h2 = 1.0 / (h * h);
    let main = vec![2.0 * inv_h2; n];
    let off = vec![-inv_h2; n - 1];
    let x_star = ex9_reference_solution(n, seed);
    let probe = QuadraticOperator::tridiagonal(main.clone(), off.clone(), vec![0.0; n])
        .expect("second-difference stencil is SPD");
    let b = probe.matvec(&x_star).expect("sizes agree");
    let op =
        QuadraticOperator::tridiagonal(main, off, b).expect("second-difference stencil is SPD");
    QuadraticProblem::new("ex9", op, vec![0.0; n], Some(x_star)).expect("consistent sizes")
}

/// `f(x) = Σ wᵢ (e^{xᵢ} - xᵢ)`, gradient `wᵢ (e^{xᵢ} - 1)`.
///
/// Unit weights give ex1 (and ex4pre), `wᵢ = i/10` gives ex4.
#[derive(Debug, Clone)]
pub struct ExpSum {
    id: ProblemId,
    x0: DenseVector,
    weights: Option<DenseVector>,
}

impl ExpSum {
    fn new(id: ProblemId, x0: DenseVector, weights: Option<DenseVector>) -> Self {
        ExpSum { id, x0, weights }
    }
}

impl Problem for ExpSum {
    fn name(&self) -> &str {
        self.id.as_str()
    }
    fn dim(&self) -> usize {
        self.x0.len()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        match &self.weights {
            None => {
                for (o, xi) in out.iter_mut().zip(x) {
                    *o = xi.exp_m1();
                }
            }
            Some(w) => {
                for ((o, xi), wi) in out.iter_mut().zip(x).zip(w) {
                    *o = wi * xi.exp_m1();
                }
            }
        }
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        let term = |xi: f64| xi.exp() - xi;
        Some(match &self.weights {
            None => compensated_sum(x.iter().map(|&xi| term(xi))),
            Some(w) => compensated_sum(x.iter().zip(w).map(|(&xi, wi)| wi * term(xi))),
        })
    }
}

/// ex2: `f(x) = Σ cᵢ²`, `cᵢ = (5 - 3xᵢ - xᵢ²)xᵢ - x_{i-1} - 3x_{i+1} + 1`
/// with `x₀ = x_{n+1} = 0`.
#[derive(Debug, Clone)]
pub struct CubicTridiagonal {
    x0: DenseVector,
}

impl CubicTridiagonal {
    fn residual(x: &[f64], i: usize) -> f64 {
        let xi = x[i];
        let left = if i > 0 { x[i - 1] } else { 0.0 };
        let right = x.get(i + 1).copied().unwrap_or(0.0);
        (5.0 - 3.0 * xi - xi * xi) * xi - left - 3.0 * right + 1.0
    }
}

impl Problem for CubicTridiagonal {
    fn name(&self) -> &str {
        "ex2"
    }
    fn dim(&self) -> usize {
        self.x0.len()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        let n = x.len();
        // rolling window over c_{i-1}, c_i, c_{i+1}
        let mut prev = 0.0;
        let mut cur = Self::residual(x, 0);
        for i in 0..n {
            let next = if i + 1 < n {
                Self::residual(x, i + 1)
            } else {
                0.0
            };
            let xi = x[i];
            let dcur = 5.0 - 6.0 * xi - 3.0 * xi * xi;
            // c_{i-1} carries -3 x_i, c_{i+1} carries -x_i
            out[i] = 2.0 * (cur * dcur - 3.0 * prev - next);
            prev = cur;
            cur = next;
        }
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(compensated_sum((0..x.len()).map(|i| {
            let c = Self::residual(x, i);
            c * c
        })))
    }
}

/// ex3: `f(x) = Σ_{i<n} (x_{i+1} - xᵢ²)² + (1 - xᵢ)²`.
#[derive(Debug, Clone)]
pub struct ChainedRosenbrock {
    x0: DenseVector,
}

impl Problem for ChainedRosenbrock {
    fn name(&self) -> &str {
        "ex3"
    }
    fn dim(&self) -> usize {
        self.x0.len()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for i in 0..x.len() - 1 {
            let a = x[i + 1] - x[i] * x[i];
            out[i] += -4.0 * x[i] * a - 2.0 * (1.0 - x[i]);
            out[i + 1] += 2.0 * a;
        }
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(compensated_sum(x.windows(2).map(|w| {
            let a = w[1] - w[0] * w[0];
            let b = 1.0 - w[0];
            a * a + b * b
        })))
    }
}

/// ex5: `f(x) = Σ_{i<n} (x_{i+1} - xᵢ³)² + (1 - xᵢ)²`.
#[derive(Debug, Clone)]
pub struct ChainedCubic {
    x0: DenseVector,
}

impl Problem for ChainedCubic {
    fn name(&self) -> &str {
        "ex5"
    }
    fn dim(&self) -> usize {
        self.x0.len()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for i in 0..x.len() - 1 {
            let xi = x[i];
            let a = x[i + 1] - xi * xi * xi;
            out[i] += -6.0 * xi * xi * a - 2.0 * (1.0 - xi);
            out[i + 1] += 2.0 * a;
        }
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(compensated_sum(x.windows(2).map(|w| {
            let a = w[1] - w[0] * w[0] * w[0];
            let b = 1.0 - w[0];
            a * a + b * b
        })))
    }
}

/// ex6: `f(x) = Σ_pairs (u² + v² + uv)² + sin²u + cos²v` over `(u, v) = (x_{2i-1}, x_{2i})`.
#[derive(Debug, Clone)]
pub struct PairedTrigQuartic {
    x0: DenseVector,
}

impl Problem for PairedTrigQuartic {
    fn name(&self) -> &str {
        "ex6"
    }
    fn dim(&self) -> usize {
        self.x0.len()
    }
    fn initial_point(&self) -> DenseVector {
        self.x0.clone()
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        for (xs, gs) in x.chunks_exact(2).zip(out.chunks_exact_mut(2)) {
            let (u, v) = (xs[0], xs[1]);
            let q = u * u + v * v + u * v;
            let (su, cu) = u.sin_cos();
            let (sv, cv) = v.sin_cos();
            gs[0] = 2.0 * q * (2.0 * u + v) + 2.0 * su * cu;
            gs[1] = 2.0 * q * (2.0 * v + u) - 2.0 * cv * sv;
        }
    }
    fn objective(&self, x: &[f64]) -> Option<f64> {
        Some(compensated_sum(x.chunks_exact(2).map(|p| {
            let (u, v) = (p[0], p[1]);
            let q = u * u + v * v + u * v;
            q * q + u.sin().powi(2) + v.cos().powi(2)
        })))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grad(id: ProblemId, n: usize, x: &[f64]) -> Vec<f64> {
        make_example(id, n, Some(7)).unwrap().gradient(x).unwrap()
    }

    #[test]
    fn ex1_gradient_at_start_and_at_zero() {
        let p = make_example(ProblemId::Ex1, 3, None).unwrap();
        let x0 = p.initial_point();
        assert_eq!(x0, vec![1.0; 3]);
        let e1 = std::f64::consts::E - 1.0;
        for gi in p.gradient(&x0).unwrap() {
            assert!((gi - e1).abs() < 1e-15);
            assert!((gi - 1.71828).abs() < 1e-5);
        }
        assert_eq!(p.gradient(&[0.0; 3]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn ex8_gradient_at_zero_is_minus_b() {
        let p = make_example(ProblemId::Ex8, 100, None).unwrap();
        let x0 = p.initial_point();
        assert_eq!(x0, vec![0.0; 100]);
        assert_eq!(p.gradient(&x0).unwrap(), vec![-1.0; 100]);
        let xs = p.solution().unwrap().to_vec();
        assert!(p.gradient(&xs).unwrap().iter().all(|g| g.abs() < 1e-15));
    }

    #[test]
    fn chained_problems_vanish_at_all_ones() {
        assert_eq!(grad(ProblemId::Ex3, 2, &[1.0, 1.0]), vec![0.0, 0.0]);
        assert_eq!(grad(ProblemId::Ex5, 2, &[1.0, 1.0]), vec![0.0, 0.0]);
        assert_eq!(grad(ProblemId::Ex3, 5, &[1.0; 5]), vec![0.0; 5]);
    }

    #[test]
    fn ex9_gradient_vanishes_at_reference_solution() {
        let p = make_example(ProblemId::Ex9, 500, Some(42)).unwrap();
        let xs = p.solution().unwrap().to_vec();
        assert!(xs.iter().all(|v| (-10.0..10.0).contains(v)));
        let q = p.as_quadratic().unwrap();
        let bnorm = crate::linalg::norm2(q.operator().rhs());
        let g = p.gradient(&xs).unwrap();
        assert!(crate::linalg::norm2(&g) <= 1e-9 * bnorm);
    }

    #[test]
    fn ex9_seed_is_reproducible() {
        let a = ex9_reference_solution(16, 3);
        let b = ex9_reference_solution(16, 3);
        let c = ex9_reference_solution(16, 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
        // shorter draws are prefixes of longer ones
        assert_eq!(&a[..4], &ex9_reference_solution(4, 3)[..]);
    }

    #[test]
    fn starting_points() {
        let start = |id, n| make_example(id, n, Some(1)).unwrap().initial_point();
        assert_eq!(start(ProblemId::Ex2, 2), vec![-0.8; 2]);
        assert_eq!(start(ProblemId::Ex3, 2), vec![-1.2; 2]);
        assert_eq!(start(ProblemId::Ex4, 2), vec![0.3; 2]);
        assert_eq!(start(ProblemId::Ex4Pre, 2), vec![0.3; 2]);
        assert_eq!(start(ProblemId::Ex5, 5), vec![-1.0, 2.0, 1.0, -1.0, 2.0]);
        assert_eq!(start(ProblemId::Ex6, 4), vec![3.0, 0.1, 3.0, 0.1]);
        assert_eq!(start(ProblemId::Ex9, 3), vec![0.0; 3]);
        let alt = make_example_with(
            ProblemId::Ex5,
            3,
            &ExampleOptions {
                ex5_start: Ex5Start::Pair,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(alt.initial_point(), vec![-1.2, 1.0, -1.2]);
    }

    #[test]
    fn ex4pre_matches_ex1_gradient() {
        let x = [0.3, -1.7, 2.5, 0.0, 1e-9];
        assert_eq!(grad(ProblemId::Ex4Pre, 5, &x), grad(ProblemId::Ex1, 5, &x));
        // ex4 = diag(i/10) * ex1
        let g4 = grad(ProblemId::Ex4, 5, &x);
        let g1 = grad(ProblemId::Ex1, 5, &x);
        for (i, (a, b)) in g4.iter().zip(&g1).enumerate() {
            assert_eq!(*a, (i + 1) as f64 / 10.0 * b);
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            make_example(ProblemId::Ex6, 5, None),
            Err(ProblemError::BadDimension { .. })
        ));
        assert!(matches!(
            make_example(ProblemId::Ex8, 50, None),
            Err(ProblemError::BadDimension { .. })
        ));
        assert!(matches!(
            make_example(ProblemId::Ex9, 10, None),
            Err(ProblemError::MissingSeed)
        ));
        assert!(matches!(
            make_example(ProblemId::Ex1, 1, None),
            Err(ProblemError::BadDimension { .. })
        ));
    }

    #[test]
    fn ex9_unit_mesh_scales_the_stencil() {
        let opts = |mesh| ExampleOptions {
            seed: Some(5),
            ex9_mesh: mesh,
            ..Default::default()
        };
        let printed = make_example_with(ProblemId::Ex9, 10, &opts(Ex9Mesh::Printed)).unwrap();
        let unit = make_example_with(ProblemId::Ex9, 10, &opts(Ex9Mesh::Unit)).unwrap();
        let e0: Vec<f64> = (0..10).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
        let a_printed = printed
            .as_quadratic()
            .unwrap()
            .operator()
            .matvec(&e0)
            .unwrap();
        let a_unit = unit.as_quadratic().unwrap().operator().matvec(&e0).unwrap();
        assert!((a_printed[0] - 2.0 / (1.1f64 * 1.1)).abs() < 1e-12);
        assert!((a_unit[0] - 200.0).abs() < 1e-9);
    }
}
