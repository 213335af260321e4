//! Elimination without pivoting for positive definite moment matrices.
//! The pivots are ratios of consecutive leading principal minors.

use super::field::{Cx, Field};

/// LDLᵀ pivots of a real symmetric matrix. Stops at the first pivot that is
/// not strictly positive and returns the pivots computed so far.
pub fn ldl_pivots<T: Field>(mut a: Vec<Vec<T>>) -> Vec<T> {
    let n = a.len();
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].clone();
        if !p.is_positive() {
            break;
        }
        for i in k + 1..n {
            let l = a[i][k].clone() / p.clone();
            for j in k + 1..=i {
                let v = a[i][j].clone() - l.clone() * a[k][j].clone();
                a[i][j] = v.clone();
                a[j][i] = v;
            }
        }
        piv.push(p);
    }
    piv
}

/// LDL* pivots of a Hermitian matrix; the pivots are real.
pub fn ldl_pivots_hermitian<T: Field>(mut a: Vec<Vec<Cx<T>>>) -> Vec<T> {
    let n = a.len();
    let mut piv = Vec::with_capacity(n);
    for k in 0..n {
        let p = a[k][k].re.clone();
        if !p.is_positive() {
            break;
        }
        for i in k + 1..n {
            let l = a[i][k].scale(&(T::one() / p.clone()));
            for j in k + 1..n {
                let v = a[i][j].clone() - l.clone() * a[k][j].clone();
                a[i][j] = v;
            }
        }
        piv.push(p);
    }
    piv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Dd;

    #[test]
    fn pivots_multiply_to_leading_minors() {
        let a = vec![
            vec![4.0, 2.0, 0.4],
            vec![2.0, 5.0, 1.0],
            vec![0.4, 1.0, 3.0],
        ];
        let p = ldl_pivots(a);
        assert!((p[0] - 4.0).abs() < 1e-15);
        assert!((p[0] * p[1] - 16.0).abs() < 1e-13);
        let det = 4.0 * (15.0 - 1.0) - 2.0 * (6.0 - 0.4) + 0.4 * (2.0 - 2.0);
        assert!((p.iter().product::<f64>() - det).abs() < 1e-12);
    }

    #[test]
    fn hermitian_pivots_are_real_minor_ratios() {
        let c = |re: f64, im: f64| Cx::new(Dd::from_f64(re), Dd::from_f64(im));
        let a = vec![vec![c(2.0, 0.0), c(0.5, 0.5)], vec![c(0.5, -0.5), c(1.0, 0.0)]];
        let p = ldl_pivots_hermitian(a);
        // det = 2 - |0.5+0.5i|² = 1.5
        assert!(((p[0] * p[1]).to_f64() - 1.5).abs() < 1e-30);
    }

    #[test]
    fn stops_at_nonpositive_pivot() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 1.0]];
        assert_eq!(ldl_pivots(a).len(), 1);
    }
}
