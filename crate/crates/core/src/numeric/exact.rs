//! Exact and high-precision rational helpers: fraction-free elimination and
//! rapidly convergent rational series rounded to a fixed number of digits.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::dd::Dd;

/// `10^digits` as a rational.
pub fn ten_pow(digits: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), digits as usize)
}

/// Rounds `q` to the nearest multiple of `10^-digits`.
pub fn round_to_digits(q: &BigRational, digits: u32) -> BigRational {
    let scale = ten_pow(digits);
    let scaled = q * BigRational::from_integer(scale.clone());
    BigRational::new(scaled.round().to_integer(), scale)
}

/// Exact rational value of a finite double.
pub fn rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

/// Leading principal minors `det A[..k,..k]`, `k = 1..=n`, by Bareiss
/// fraction-free elimination without pivoting.
///
/// Returns `Err(k)` when the `k`-th leading minor vanishes, which for a
/// positive definite moment matrix cannot happen.
pub fn bareiss_leading_minors(mut a: Vec<Vec<BigInt>>) -> Result<Vec<BigInt>, usize> {
    let n = a.len();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        if pivot.is_zero() {
            return Err(k + 1);
        }
        minors.push(pivot.clone());
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &pivot - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = pivot;
    }
    Ok(minors)
}

/// Leading principal minors of a rational matrix, computed exactly.
pub fn rational_leading_minors(a: &[Vec<BigRational>]) -> Result<Vec<BigRational>, usize> {
    let mut lcm = BigInt::one();
    for row in a {
        for q in row {
            lcm = lcm.lcm(q.denom());
        }
    }
    let scale = BigRational::from_integer(lcm.clone());
    let ints: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|q| (q * &scale).to_integer()).collect())
        .collect();
    let minors = bareiss_leading_minors(ints)?;
    let mut out = Vec::with_capacity(minors.len());
    let mut power = BigInt::one();
    for m in minors {
        power *= &lcm;
        out.push(BigRational::new(m, power.clone()));
    }
    Ok(out)
}

/// Modified Bessel function `I_k(s)` for rational `s`, as a rational rounded
/// to `digits` decimal places.
pub fn bessel_i_rational(k: u32, s: &BigRational, digits: u32) -> BigRational {
    let half = s / BigRational::from_integer(BigInt::from(2));
    let half_sq = &half * &half;
    let eps = BigRational::new(BigInt::one(), ten_pow(digits + 8));
    // m = 0 term: (s/2)^k / k!
    let mut term = num_traits::pow(half.clone(), k as usize);
    for j in 1..=k {
        term /= BigRational::from_integer(BigInt::from(j));
    }
    let mut sum = term.clone();
    let mut m: u64 = 0;
    loop {
        m += 1;
        term = term * &half_sq / BigRational::from_integer(BigInt::from(m * (m + k as u64)));
        // Trim the running term so the series stays cheap.
        term = round_to_digits(&term, digits + 16);
        sum += &term;
        if term.abs() < eps {
            break;
        }
    }
    round_to_digits(&sum, digits)
}

/// `exp(q)` for rational `q` with `|q|` moderate, rounded to `digits` places.
pub fn exp_rational(q: &BigRational, digits: u32) -> BigRational {
    let eps = BigRational::new(BigInt::one(), ten_pow(digits + 8));
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    let mut j: u64 = 0;
    loop {
        j += 1;
        term = term * q / BigRational::from_integer(BigInt::from(j));
        term = round_to_digits(&term, digits + 16);
        sum += &term;
        if term.abs() < eps && j as f64 > q.to_f64().unwrap_or(0.0).abs() {
            break;
        }
    }
    round_to_digits(&sum, digits)
}

/// `sqrt(q)` for positive rational `q`, rounded to `digits` places.
pub fn sqrt_rational(q: &BigRational, digits: u32) -> BigRational {
    let scale = ten_pow(digits);
    let scaled = q * BigRational::from_integer(&scale * &scale);
    let r = scaled.to_integer().sqrt();
    BigRational::new(r, scale)
}

/// Natural logarithm of a positive integer in double-double precision,
/// valid far outside the `f64` exponent range.
pub fn ln_bigint(x: &BigInt) -> Dd {
    let bits = x.bits() as i64;
    let shift = (bits - 110).max(0);
    let top = x >> (shift as usize);
    Dd::from(&top).ln() + Dd::LN_2 * Dd::from_f64(shift as f64)
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(q: &BigRational) -> Dd {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn bareiss_matches_hand_determinants() {
        // [[1, 1/2], [1/2, 1]] -> 3/4 ; Toeplitz of 1 + cos
        let a = vec![
            vec![q(1, 1), q(1, 2), q(0, 1)],
            vec![q(1, 2), q(1, 1), q(1, 2)],
            vec![q(0, 1), q(1, 2), q(1, 1)],
        ];
        let m = rational_leading_minors(&a).unwrap();
        assert_eq!(m, vec![q(1, 1), q(3, 4), q(1, 2)]);
    }

    #[test]
    fn bareiss_reports_vanishing_minor() {
        let a = vec![vec![BigInt::from(0), BigInt::from(1)], vec![BigInt::from(1), BigInt::from(0)]];
        assert_eq!(bareiss_leading_minors(a), Err(1));
    }

    #[test]
    fn bessel_series_matches_known_values() {
        // I_0(1) = 1.2660658777520083355982446252147175376076703113549622...
        let i0 = bessel_i_rational(0, &q(1, 1), 60);
        let want = BigRational::new(
            "12660658777520083355982446252147175376076703113549622".parse().unwrap(),
            ten_pow(52),
        );
        assert!((i0 - want).abs() < q(1, 1) / BigRational::from_integer(ten_pow(50)));
        // I_1(1) = 0.565159103992485027207696...
        let i1 = bessel_i_rational(1, &q(1, 1), 40).to_f64().unwrap();
        assert!((i1 - 0.565_159_103_992_485).abs() < 1e-15);
    }

    #[test]
    fn logs_of_huge_rationals() {
        let big = num_traits::pow(BigInt::from(3), 2000);
        let got = ln_bigint(&big).to_f64();
        assert!((got - 2000.0 * 3f64.ln()).abs() < 1e-12 * got);
        let q = BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), 400));
        assert!((ln_rational(&q).to_f64() + 400.0 * 10f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn exp_and_sqrt_series() {
        let e = exp_rational(&q(1, 4), 50).to_f64().unwrap();
        assert!((e - 0.25f64.exp()).abs() < 1e-15);
        let r2 = sqrt_rational(&q(2, 1), 40).to_f64().unwrap();
        assert_eq!(r2, std::f64::consts::SQRT_2);
    }
}
