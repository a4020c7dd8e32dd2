//! Dense vector kernels shared by the problems and the solvers.
//!
//! Every reduction is a plain left-to-right loop so that results are
//! bit-reproducible across runs and platforms.

/// An n-dimensional vector of `f64`: iterates, gradients and directions.
pub type DenseVector = Vec<f64>;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |acc, (x, y)| acc + x * y)
}

#[inline]
pub fn norm_sq(a: &[f64]) -> f64 {
    dot(a, a)
}

#[inline]
pub fn norm2(a: &[f64]) -> f64 {
    norm_sq(a).sqrt()
}

#[inline]
pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
}

/// `(a - b)ᵀ c`, computed without materialising `a - b`.
#[inline]
pub fn diff_dot(a: &[f64], b: &[f64], c: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(c)
        .fold(0.0, |acc, ((x, y), z)| acc + (x - y) * z)
}

/// `‖a - b‖²`.
#[inline]
pub fn diff_norm_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |acc, (x, y)| {
        let d = x - y;
        acc + d * d
    })
}

/// `out = x + s * d`.
#[inline]
pub fn axpy_into(out: &mut [f64], x: &[f64], s: f64, d: &[f64]) {
    for ((o, xi), di) in out.iter_mut().zip(x).zip(d) {
        *o = xi + s * di;
    }
}

/// Neumaier-compensated sum. Objectives use it so that central differences
/// of a long sum are not swamped by its accumulated rounding.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let (mut sum, mut carry) = (0.0_f64, 0.0_f64);
    for t in terms {
        let next = sum + t;
        carry += if sum.abs() >= t.abs() {
            (sum - next) + t
        } else {
            (t - next) + sum
        };
        sum = next;
    }
    sum + carry
}

#[inline]
pub fn all_finite(a: &[f64]) -> bool {
    a.iter().all(|v| v.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(terms.iter().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(terms), 2.0);
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
    }

    #[test]
    fn kernels_on_small_vectors() {
        let a = [1.0, 2.0, 3.0];
        let b = [4.0, -5.0, 6.0];
        assert_eq!(dot(&a, &b), 12.0);
        assert_eq!(norm_sq(&a), 14.0);
        assert_eq!(norm_inf(&b), 6.0);
        assert_eq!(diff_dot(&b, &a, &a), 3.0 - 14.0 + 9.0);
        assert_eq!(diff_norm_sq(&a, &b), 9.0 + 49.0 + 9.0);
        let mut out = [0.0; 3];
        axpy_into(&mut out, &a, -2.0, &b);
        assert_eq!(out, [-7.0, 12.0, -9.0]);
        assert!(all_finite(&a));
        assert!(!all_finite(&[1.0, f64::NAN]));
    }
}
