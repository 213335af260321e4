//! Dense polynomials stored as ascending coefficient vectors.

use num_complex::Complex64;

/// Horner evaluation of `Σ c_j z^j`.
pub fn eval(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &cj| acc * z + cj)
}

/// Value and derivative at `z`.
pub fn eval_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut p = zero;
    let mut dp = zero;
    for &cj in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + cj;
    }
    (p, dp)
}

/// Real Horner evaluation with derivative.
pub fn eval_real_with_derivative(c: &[f64], x: f64) -> (f64, f64) {
    let mut p = 0.0;
    let mut dp = 0.0;
    for &cj in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + cj;
    }
    (p, dp)
}

/// Reverse polynomial at formal degree `n`: `z^n conj(q(1/conj z))`.
pub fn reverse(c: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
    for (j, cj) in c.iter().enumerate().take(n + 1) {
        out[n - j] = cj.conj();
    }
    out
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|j| {
            a.get(j).copied().unwrap_or_default() + b.get(j).copied().unwrap_or_default()
        })
        .collect()
}

/// Multiplies by `z^k`.
pub fn shift(a: &[Complex64], k: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); k];
    out.extend_from_slice(a);
    out
}

pub fn scale(a: &[Complex64], s: Complex64) -> Vec<Complex64> {
    a.iter().map(|&x| x * s).collect()
}

/// Largest coefficient modulus of `a - b`.
pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|j| (a.get(j).copied().unwrap_or_default() - b.get(j).copied().unwrap_or_default()).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn reverse_of_z_minus_half() {
        let p = vec![c(-0.5, 0.0), c(1.0, 0.0)];
        assert_eq!(reverse(&p, 1), vec![c(1.0, 0.0), c(-0.5, 0.0)]);
    }

    #[test]
    fn derivative_matches_difference() {
        let p = vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.25, 0.0), c(2.0, -1.0)];
        let z = c(0.3, -0.7);
        let (_, d) = eval_with_derivative(&p, z);
        let h = 1e-6;
        let fd = (eval(&p, z + h) - eval(&p, z - h)) / (2.0 * h);
        assert!((d - fd).norm() < 1e-8);
    }

    #[test]
    fn product_evaluates_to_product() {
        let a = vec![c(1.0, 0.0), c(2.0, 1.0)];
        let b = vec![c(0.0, 1.0), c(-1.0, 0.0), c(3.0, 0.0)];
        let z = c(0.4, 0.9);
        let lhs = eval(&mul(&a, &b), z);
        assert!((lhs - eval(&a, z) * eval(&b, z)).norm() < 1e-14);
    }
}
