use num_complex::Complex64;

use crate::{Error, Result};

const MAX_ITER: usize = 500;

/// p(z) and p'(z) for ascending coefficients.
fn eval_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of a polynomial given by ascending coefficients, by
/// simultaneous Aberth–Ehrlich iteration followed by a Newton polish of
/// each root.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut a = coeffs.to_vec();
    while a.last().is_some_and(|c| c.norm() == 0.0) {
        a.pop();
    }
    if a.len() < 2 {
        return Err(Error::Degenerate("polynomial has no roots".into()));
    }
    let lead = *a.last().unwrap();
    for c in a.iter_mut() {
        *c /= lead;
    }
    let n = a.len() - 1;
    let radius = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();

    for _ in 0..MAX_ITER {
        let mut biggest = 0.0f64;
        for k in 0..n {
            let (p, dp) = eval_with_derivative(&a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (1.0 - ratio * repulsion);
            z[k] -= w;
            biggest = biggest.max(w.norm() / z[k].norm().max(1.0));
        }
        if biggest < 1e-15 {
            break;
        }
    }

    for root in z.iter_mut() {
        for _ in 0..5 {
            let (p, dp) = eval_with_derivative(&a, *root);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            *root -= step;
            if step.norm() <= 1e-16 * root.norm().max(1.0) {
                break;
            }
        }
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::Degenerate("root iteration diverged".into()));
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;

    fn real(c: &[f64]) -> Vec<Complex64> {
        c.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    /// Eigenvalues of the companion matrix of a real monic polynomial.
    fn companion_roots(c: &[f64]) -> Vec<Complex64> {
        let n = c.len() - 1;
        let lead = c[n];
        let mut m = DMatrix::<f64>::zeros(n, n);
        for i in 1..n {
            m[(i, i - 1)] = 1.0;
        }
        for i in 0..n {
            m[(i, n - 1)] = -c[i] / lead;
        }
        m.complex_eigenvalues().iter().copied().collect()
    }

    fn assert_same_roots(mut a: Vec<Complex64>, mut b: Vec<Complex64>, tol: f64) {
        let key = |z: &Complex64| {
            (z.re * 1e6).round() as i64 * 1_000_000_000 + (z.im * 1e6).round() as i64
        };
        a.sort_by_key(key);
        b.sort_by_key(key);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < tol, "{x} vs {y}");
        }
    }

    #[test]
    fn quadratic_roots_are_sixth_roots_of_unity() {
        let r = polynomial_roots(&real(&[1.0, -1.0, 1.0])).unwrap();
        let expect = vec![
            Complex64::new(0.5, 3f64.sqrt() / 2.0),
            Complex64::new(0.5, -(3f64.sqrt()) / 2.0),
        ];
        assert_same_roots(r, expect, 1e-15);
    }

    #[test]
    fn eliminants_match_companion_matrix() {
        for c in [
            vec![-1.0, 2.0, -3.0, 1.0],
            vec![1.0, -3.0, 6.0, -5.0, 2.0],
            vec![-6.0, 11.0, -6.0, 1.0],
            vec![3.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        ] {
            let ours = polynomial_roots(&real(&c)).unwrap();
            assert_same_roots(ours, companion_roots(&c), 1e-10);
        }
    }

    #[test]
    fn cubic_real_root() {
        let r = polynomial_roots(&real(&[-1.0, 2.0, -3.0, 1.0])).unwrap();
        let real_root = r.iter().find(|z| z.im.abs() < 1e-12).unwrap();
        assert!((real_root.re - 2.324_717_957_244_746).abs() < 1e-12);
    }

    #[test]
    fn constants_have_no_roots() {
        assert!(polynomial_roots(&real(&[2.0])).is_err());
        assert!(polynomial_roots(&real(&[2.0, 0.0])).is_err());
    }
}
