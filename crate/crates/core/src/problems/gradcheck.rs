use super::{Problem, ProblemError};
use crate::linalg::DenseVector;

/// Absolute floor on the denominator of the component-wise relative error.
pub const GRADCHECK_FLOOR: f64 = 1e-8;

/// Central differences `(f(x + h eᵢ) - f(x - h eᵢ)) / 2h`, one coordinate at a time.
pub fn finite_diff_gradient(
    p: &dyn Problem,
    x: &[f64],
    h: f64,
) -> Result<DenseVector, ProblemError> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(ProblemError::BadStep(h));
    }
    if x.len() != p.dim() {
        return Err(ProblemError::DimensionMismatch {
            expected: p.dim(),
            got: x.len(),
        });
    }
    let no_objective = || ProblemError::NoObjective(p.name().to_string());
    p.objective(x).ok_or_else(no_objective)?;

    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        let xi = x[i];
        probe[i] = xi + h;
        let up = p.objective(&probe).ok_or_else(no_objective)?;
        probe[i] = xi - h;
        let down = p.objective(&probe).ok_or_else(no_objective)?;
        probe[i] = xi;
        out.push((up - down) / (2.0 * h));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    /// `max_i |gᵢ - fdᵢ| / max(|gᵢ|, floor)`.
    pub max_rel_error: f64,
    pub worst_index: usize,
    pub max_abs_error: f64,
}

/// Compares the analytic gradient at `x` with central differences.
pub fn gradcheck(p: &dyn Problem, x: &[f64], h: f64) -> Result<GradCheckReport, ProblemError> {
    let fd = finite_diff_gradient(p, x, h)?;
    let analytic = p.gradient(x)?;
    let mut report = GradCheckReport {
        max_rel_error: 0.0,
        worst_index: 0,
        max_abs_error: 0.0,
    };
    for (i, (a, f)) in analytic.iter().zip(&fd).enumerate() {
        let abs = (a - f).abs();
        let rel = abs / a.abs().max(GRADCHECK_FLOOR);
        report.max_abs_error = report.max_abs_error.max(abs);
        if rel > report.max_rel_error || rel.is_nan() {
            report.max_rel_error = rel;
            report.worst_index = i;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{make_example, ProblemId};

    #[test]
    fn ex1_at_minimum_and_at_start() {
        let p = make_example(ProblemId::Ex1, 2, None).unwrap();
        let fd = finite_diff_gradient(p.as_ref(), &[0.0, 0.0], 1e-6).unwrap();
        assert!(fd.iter().all(|v| v.abs() < 1e-9));
        let fd = finite_diff_gradient(p.as_ref(), &[1.0, 1.0], 1e-6).unwrap();
        let e1 = std::f64::consts::E - 1.0;
        assert!(fd.iter().all(|v| (v - e1).abs() < 1e-8));
    }

    #[test]
    fn ex6_at_start_agrees_with_analytic() {
        let p = make_example(ProblemId::Ex6, 2, None).unwrap();
        let x0 = p.initial_point();
        assert_eq!(x0, vec![3.0, 0.1]);
        let report = gradcheck(p.as_ref(), &x0, 1e-6).unwrap();
        assert!(report.max_rel_error <= 1e-5, "{report:?}");
    }

    #[test]
    fn errors() {
        let p = make_example(ProblemId::Ex1, 2, None).unwrap();
        assert_eq!(
            finite_diff_gradient(p.as_ref(), &[0.0, 0.0], 0.0),
            Err(ProblemError::BadStep(0.0))
        );
        assert!(finite_diff_gradient(p.as_ref(), &[0.0], 1e-6).is_err());

        struct GradientOnly;
        impl Problem for GradientOnly {
            fn name(&self) -> &str {
                "bare"
            }
            fn dim(&self) -> usize {
                1
            }
            fn initial_point(&self) -> DenseVector {
                vec![0.0]
            }
            fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
                out[0] = x[0];
            }
        }
        assert_eq!(
            finite_diff_gradient(&GradientOnly, &[0.0], 1e-6),
            Err(ProblemError::NoObjective("bare".into()))
        );
    }
}
