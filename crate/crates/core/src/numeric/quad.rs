//! Quadrature rules: Gauss–Legendre (fixed and adaptive), Gauss–Hermite,
//! and the periodic trapezoid rule.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre three-term recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    (
        x.iter().map(|t| c + h * t).collect(),
        w.iter().map(|wi| h * wi).collect(),
    )
}

/// Gauss–Hermite rule for `∫ f(x) e^{-x²} dx`.
///
/// Nodes start from the eigenvalues of the Hermite Jacobi matrix
/// (`b_k = sqrt((k+1)/2)`) and are polished by Newton steps; weights come from
/// the Christoffel function `1/Σ p_k(x)²`, which keeps the tiny tail weights
/// accurate in relative terms.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 0..n.saturating_sub(1) {
        let b = ((k + 1) as f64 / 2.0).sqrt();
        j[(k, k + 1)] = b;
        j[(k + 1, k)] = b;
    }
    let eig = SymmetricEigen::new(j);
    let mut x: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    x.sort_by(|a, b| a.total_cmp(b));
    let w = x
        .iter_mut()
        .map(|xi| {
            for _ in 0..3 {
                let (p, d, _) = hermite_orthonormal(n, *xi);
                if d != 0.0 {
                    *xi -= p / d;
                }
            }
            let (_, _, sum) = hermite_orthonormal(n, *xi);
            1.0 / sum
        })
        .collect();
    (x, w)
}

/// `(p_n(x), p_n'(x), Σ_{k<n} p_k(x)²)` for Hermite polynomials orthonormal
/// with respect to `e^{-x²}`.
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64, f64) {
    let mut pm = 0.0;
    let mut p = PI.powf(-0.25);
    let mut sum = 0.0;
    for k in 0..n {
        sum += p * p;
        let next = (x * p * (2.0 / (k as f64 + 1.0)).sqrt()) - pm * (k as f64 / (k as f64 + 1.0)).sqrt();
        pm = p;
        p = next;
    }
    // p_n' = sqrt(2n) p_{n-1}
    (p, (2.0 * n as f64).sqrt() * pm, sum)
}

/// Adaptive Gauss–Legendre quadrature of `f` over `[a, b]`.
///
/// Each panel is integrated with a 20-point rule and compared against the
/// sum over its two halves; panels are split until the difference falls
/// below `tol` (absolute, scaled by the running magnitude).
pub fn adaptive_gl<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let (x, w) = gauss_legendre(20);
    let rule = |lo: f64, hi: f64| -> f64 {
        let h = 0.5 * (hi - lo);
        let c = 0.5 * (hi + lo);
        x.iter().zip(&w).map(|(t, wi)| wi * f(c + h * t)).sum::<f64>() * h
    };
    let mut total: f64 = 0.0;
    let mut stack = vec![(a, b, rule(a, b), 0u32)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule(lo, mid);
        let right = rule(mid, hi);
        let split = left + right;
        let scale = split.abs().max(total.abs()).max(1e-300);
        if (split - whole).abs() <= tol * scale.max(1.0) * 0.1 || depth > 40 {
            total += split;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    total
}

/// Uniform grid `θ_j = 2πj/m` on the circle.
pub fn circle_grid(m: usize) -> Vec<f64> {
    (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(7);
        for k in 0..14 {
            let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let want = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "k={k}");
        }
    }

    #[test]
    fn hermite_rule_reproduces_gaussian_moments() {
        let (x, w) = gauss_hermite(12);
        let m4: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(4)).sum();
        assert!((m4 - 0.75 * PI.sqrt()).abs() < 1e-13);
        let (x, w) = gauss_hermite(160);
        let m40: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(40)).sum();
        // Γ(41/2)
        let want: f64 = (1..=20).map(|k| k as f64 - 0.5).product::<f64>() * PI.sqrt();
        assert!((m40 - want).abs() < 1e-12 * want);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let got = adaptive_gl(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-12);
        let want = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((got - want).abs() / want < 1e-10);
    }
}
