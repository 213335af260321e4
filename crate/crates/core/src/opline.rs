//! Orthogonal polynomials on the real line: recurrence coefficients,
//! Hankel determinants, Jacobi matrices and their spectral measures, and the
//! Toda flow.
//!
//! Conventions: `b_{n-1} p_{n-1} + a_n p_n + b_n p_{n+1} = x p_n` for the
//! orthonormal `p_n` with leading coefficient `k_n`, monic `P_n = p_n / k_n`
//! and `k_n = k_{n-1}/b_{n-1}`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::Partial;
use crate::measures::{self, Contour, MomentData, WeightSpec};
use crate::numeric::exact;
use crate::numeric::linalg::ldl_pivots;
use crate::numeric::{Dd, Field, Precision};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceLine {
    /// `a_0 .. a_{N-1}`
    pub a: Vec<f64>,
    /// `b_0 .. b_{N-2}`
    pub b: Vec<f64>,
    /// `k_0 .. k_{N-1}`
    pub k: Vec<f64>,
}

impl RecurrenceLine {
    /// Builds norming constants from `k_0 = 1/√m_0`.
    pub fn from_coefficients(a: Vec<f64>, b: Vec<f64>, m0: f64) -> Self {
        let mut k = vec![1.0 / m0.sqrt()];
        for (j, bj) in b.iter().enumerate().take(a.len().saturating_sub(1)) {
            k.push(k[j] / bj);
        }
        RecurrenceLine { a, b, k }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn mass(&self) -> f64 {
        1.0 / (self.k[0] * self.k[0])
    }

    /// Truncates to the first `n` coefficient sets.
    pub fn truncated(&self, n: usize) -> Self {
        RecurrenceLine {
            a: self.a[..n].to_vec(),
            b: self.b[..n.saturating_sub(1)].to_vec(),
            k: self.k[..n].to_vec(),
        }
    }

    /// Largest violation of `b_n > 0` and `k_n = k_{n-1}/b_{n-1}`.
    pub fn invariant_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (j, bj) in self.b.iter().enumerate() {
            if !(*bj > 0.0) {
                return f64::INFINITY;
            }
            if j + 1 < self.k.len() {
                r = r.max((self.k[j + 1] - self.k[j] / bj).abs() / self.k[j + 1]);
            }
        }
        r
    }

    /// Monic polynomial coefficients `P_0 .. P_n` (ascending powers),
    /// available for `n ≤ N`.
    pub fn monic_coeffs(&self, n: usize) -> Result<Vec<Vec<f64>>> {
        if n > self.len() {
            return Err(Error::InvalidInput(format!(
                "degree {n} exceeds the {} stored recurrence coefficients",
                self.len()
            )));
        }
        let mut out: Vec<Vec<f64>> = vec![vec![1.0]];
        for j in 0..n {
            let mut next = vec![0.0; j + 2];
            for (i, c) in out[j].iter().enumerate() {
                next[i + 1] += c;
                next[i] -= self.a[j] * c;
            }
            if j >= 1 {
                let b2 = self.b[j - 1] * self.b[j - 1];
                for (i, c) in out[j - 1].iter().enumerate() {
                    next[i] -= b2 * c;
                }
            }
            out.push(next);
        }
        Ok(out)
    }
}

/// Orthonormal values `p_0(x) .. p_n(x)` by the forward recurrence.
pub fn eval_opl(rec: &RecurrenceLine, n: usize, x: f64) -> Result<Vec<f64>> {
    if n >= rec.len() {
        return Err(Error::InvalidInput(format!(
            "p_{n} needs {} recurrence coefficients, have {}",
            n + 1,
            rec.len()
        )));
    }
    let mut p = vec![rec.k[0]];
    for j in 0..n {
        let prev = if j >= 1 { rec.b[j - 1] * p[j - 1] } else { 0.0 };
        p.push(((x - rec.a[j]) * p[j] - prev) / rec.b[j]);
    }
    Ok(p)
}

/// Monic values `P_0(x) .. P_n(x)`, `n ≤ N`.
pub fn eval_monic(rec: &RecurrenceLine, n: usize, x: f64) -> Result<Vec<f64>> {
    if n > rec.len() {
        return Err(Error::InvalidInput(format!("P_{n} is beyond the stored recurrence")));
    }
    let mut p = vec![1.0];
    for j in 0..n {
        let prev = if j >= 1 { rec.b[j - 1] * rec.b[j - 1] * p[j - 1] } else { 0.0 };
        p.push((x - rec.a[j]) * p[j] - prev);
    }
    Ok(p)
}

/// Recurrence data in arbitrary arithmetic from Gram–Schmidt on moments.
#[derive(Clone, Debug)]
pub struct MonicRecurrence<T> {
    pub a: Vec<T>,
    /// `b_n²`
    pub bsq: Vec<T>,
    /// `h_n = ∫ P_n² dμ = 1/k_n² = D_n/D_{n-1}`
    pub h: Vec<T>,
    /// Monic coefficients, ascending.
    pub coeffs: Vec<Vec<T>>,
}

/// Gram–Schmidt orthogonalization of `1, x, x², …` against the moment
/// functional `⟨x^i, x^j⟩ = m_{i+j}`; needs moments through `2N - 1`.
///
/// Returns `Err(j)` if `h_j` is not strictly positive.
pub fn gram_schmidt_line<T: Field>(m: &[T], n: usize) -> std::result::Result<MonicRecurrence<T>, (usize, MonicRecurrence<T>)> {
    assert!(m.len() >= 2 * n, "need moments through order 2N-1");
    let inner = |p: &[T], q: &[T], shift: usize| -> T {
        let mut s = T::zero();
        for (i, pi) in p.iter().enumerate() {
            if pi.is_exact_zero() {
                continue;
            }
            for (j, qj) in q.iter().enumerate() {
                if !qj.is_exact_zero() {
                    s = s + pi.clone() * qj.clone() * m[i + j + shift].clone();
                }
            }
        }
        s
    };
    let mut out: MonicRecurrence<T> = MonicRecurrence {
        a: Vec::new(),
        bsq: Vec::new(),
        h: Vec::new(),
        coeffs: Vec::new(),
    };
    for deg in 0..n {
        let mut p = vec![T::zero(); deg + 1];
        p[deg] = T::one();
        // <x^deg, P_j> = Σ_i P_j[i] m_{i+deg}
        let mut corr = vec![T::zero(); deg + 1];
        for (j, pj) in out.coeffs.iter().enumerate() {
            let mut s = T::zero();
            for (i, c) in pj.iter().enumerate() {
                s = s + c.clone() * m[i + deg].clone();
            }
            let f = s / out.h[j].clone();
            for (i, c) in pj.iter().enumerate() {
                corr[i] = corr[i].clone() + f.clone() * c.clone();
            }
        }
        for (pi, ci) in p.iter_mut().zip(corr) {
            *pi = pi.clone() - ci;
        }
        let h = inner(&p, &p, 0);
        if !h.is_positive() {
            return Err((deg, out));
        }
        let a = inner(&p, &p, 1) / h.clone();
        if deg >= 1 {
            out.bsq.push(h.clone() / out.h[deg - 1].clone());
        }
        out.a.push(a);
        out.h.push(h);
        out.coeffs.push(p);
    }
    Ok(out)
}

impl<T: Field> MonicRecurrence<T> {
    pub fn to_line(&self) -> RecurrenceLine {
        RecurrenceLine {
            a: self.a.iter().map(|v| v.to_f64()).collect(),
            b: self.bsq.iter().map(|v| v.to_f64().sqrt()).collect(),
            k: self.h.iter().map(|v| 1.0 / v.to_f64().sqrt()).collect(),
        }
    }
}

/// Recurrence coefficients from moment data by Gram–Schmidt in the
/// requested arithmetic.
pub fn recurrence_from_moments(m: &MomentData, n: usize, precision: Precision) -> Result<RecurrenceLine> {
    if m.contour != Contour::Line {
        return Err(Error::InvalidInput("line recurrence needs line moments".into()));
    }
    if m.order() + 1 < 2 * n {
        return Err(Error::InsufficientMoments(format!(
            "degree {n} needs moments through order {}",
            2 * n - 1
        )));
    }
    let fail = |deg: usize, partial: RecurrenceLine| Error::PrecisionExhausted {
        degree: deg,
        partial: Box::new(Partial::Line(partial)),
    };
    match precision {
        Precision::Exact => {
            let q: Vec<BigRational> = match &m.exact {
                Some(e) => e.iter().map(|(re, _)| re.clone()).collect(),
                None => m.values.iter().map(|v| v.re.to_rational()).collect(),
            };
            gram_schmidt_line(&q, n).map(|r| r.to_line()).map_err(|(d, p)| fail(d, p.to_line()))
        }
        Precision::Extended => {
            let q = m.line_dd();
            gram_schmidt_line(&q, n).map(|r| r.to_line()).map_err(|(d, p)| fail(d, p.to_line()))
        }
        Precision::Double => {
            let q = m.line_f64();
            gram_schmidt_line(&q, n).map(|r| r.to_line()).map_err(|(d, p)| fail(d, p.to_line()))
        }
    }
}

/// Recurrence coefficients of a discrete measure, by the Rutishauser–Kahan–
/// Pal–Walker updating scheme (a stable replacement for the Stieltjes
/// procedure).
pub fn recurrence_from_discrete(x: &[f64], w: &[f64], n: usize) -> Result<RecurrenceLine> {
    discrete_recurrence(x, w, n)
}

fn discrete_recurrence<T: Field>(x: &[T], w: &[T], n: usize) -> Result<RecurrenceLine> {
    let m0: f64 = w.iter().map(Field::to_f64).sum();
    if !(m0 > 0.0) || w.iter().any(|v| v.to_f64() < 0.0) || x.len() != w.len() {
        return Err(Error::DegenerateMeasure("discrete measure has non-positive mass".into()));
    }
    let (alpha, beta) = rkpw(x, w);
    let alpha: Vec<f64> = alpha.iter().map(Field::to_f64).collect();
    let beta: Vec<f64> = beta.iter().map(Field::to_f64).collect();
    let cap = x.len();
    let scale = x.iter().fold(0.0f64, |s, xi| s.max(xi.to_f64().abs())).max(1.0);
    let mut b = Vec::with_capacity(n.saturating_sub(1));
    for j in 1..n {
        if j >= cap || !(beta[j] > 1e-26 * scale * scale) {
            let partial = RecurrenceLine::from_coefficients(alpha[..j].to_vec(), b, m0);
            return Err(Error::PrecisionExhausted {
                degree: j,
                partial: Box::new(Partial::Line(partial)),
            });
        }
        b.push(beta[j].sqrt());
    }
    Ok(RecurrenceLine::from_coefficients(alpha[..n].to_vec(), b, m0))
}

/// Rutishauser–Kahan–Pal–Walker: add one atom at a time, updating the
/// Jacobi matrix with Givens-like rotations. Returns `(a, b²)` with
/// `b²[0] = m₀`.
fn rkpw<T: Field>(x: &[T], w: &[T]) -> (Vec<T>, Vec<T>) {
    let cap = x.len();
    let mut alpha = vec![T::zero(); cap];
    let mut beta = vec![T::zero(); cap];
    alpha[0] = x[0].clone();
    beta[0] = w[0].clone();
    for m in 1..cap {
        let mut pn = w[m].clone();
        let (mut gam, mut sig, mut t) = (T::one(), T::zero(), T::zero());
        let lam = x[m].clone();
        for k in 0..=m {
            let rho = beta[k].clone() + pn.clone();
            let tmp = gam.clone() * rho.clone();
            let tsig = sig.clone();
            if rho.is_positive() {
                gam = beta[k].clone() / rho.clone();
                sig = pn / rho;
            } else {
                gam = T::one();
                sig = T::zero();
            }
            let tk = sig.clone() * (alpha[k].clone() - lam.clone()) - gam.clone() * t.clone();
            alpha[k] = alpha[k].clone() - (tk.clone() - t);
            t = tk;
            pn = if sig.is_positive() { t.clone() * t.clone() / sig.clone() } else { tsig * beta[k].clone() };
            beta[k] = tmp;
        }
    }
    (alpha, beta)
}

/// Recurrence coefficients of a line weight (Stieltjes on a Gauss-type
/// discretization).
pub fn recurrence_from_measure(weight: &WeightSpec, n: usize) -> Result<RecurrenceLine> {
    let (x, w) = measures::discretize_line(weight, n)?;
    recurrence_from_discrete(&x, &w, n)
}

/// Logarithm of a positive determinant, kept in double-double precision so
/// that very large and very small determinants stay representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetValue {
    pub ln: Dd,
    pub precision: Precision,
}

impl DetValue {
    pub fn value(&self) -> f64 {
        self.ln.to_f64().exp()
    }
}

/// Leading Hankel determinants `D_0 .. D_n`.
///
/// In double precision the elimination is repeated in double-double when the
/// pivots span more than ten decades or lose positivity.
pub fn hankel_dets(m: &MomentData, n: usize, precision: Precision) -> Result<Vec<DetValue>> {
    if m.contour != Contour::Line {
        return Err(Error::InvalidInput("Hankel determinants need line moments".into()));
    }
    if m.order() < 2 * n {
        return Err(Error::InsufficientMoments(format!("D_{n} needs moments through order {}", 2 * n)));
    }
    let build = |v: &dyn Fn(usize) -> Dd| -> Vec<Vec<Dd>> {
        (0..=n).map(|i| (0..=n).map(|j| v(i + j)).collect()).collect()
    };
    let fail = |j: usize, tier: &str| {
        Error::DegenerateMeasure(format!("Hankel matrix lost positive definiteness at order {j} in {tier} precision"))
    };
    match precision {
        Precision::Exact => {
            let q: Vec<BigRational> = match &m.exact {
                Some(e) => e.iter().map(|(re, _)| re.clone()).collect(),
                None => m.values.iter().map(|v| v.re.to_rational()).collect(),
            };
            let mat: Vec<Vec<BigRational>> = (0..=n).map(|i| (0..=n).map(|j| q[i + j].clone()).collect()).collect();
            let minors = exact::rational_leading_minors(&mat).map_err(|j| fail(j - 1, "exact"))?;
            minors
                .iter()
                .map(|d| {
                    if d <= &BigRational::from_integer(0.into()) {
                        Err(fail(0, "exact"))
                    } else {
                        Ok(DetValue {
                            ln: exact::ln_rational(d),
                            precision: Precision::Exact,
                        })
                    }
                })
                .collect()
        }
        Precision::Extended => {
            let md = m.line_dd();
            let piv = ldl_pivots(build(&|k| md[k]));
            if piv.len() <= n {
                return Err(fail(piv.len(), "extended"));
            }
            Ok(accumulate_ln(&piv, Precision::Extended))
        }
        Precision::Double => {
            let mf = m.line_f64();
            let mat: Vec<Vec<f64>> = (0..=n).map(|i| (0..=n).map(|j| mf[i + j]).collect()).collect();
            let piv = ldl_pivots(mat);
            let spread = piv.iter().cloned().fold(0.0f64, f64::max) / piv.iter().cloned().fold(f64::INFINITY, f64::min);
            if piv.len() <= n || !(spread < 1e10) {
                log::debug!("Hankel pivots span {spread:e}; escalating to extended precision");
                return hankel_dets(m, n, Precision::Extended);
            }
            let pd: Vec<Dd> = piv.into_iter().map(Dd::from_f64).collect();
            Ok(accumulate_ln(&pd, Precision::Double))
        }
    }
}

fn accumulate_ln(piv: &[Dd], precision: Precision) -> Vec<DetValue> {
    let mut acc = Dd::ZERO;
    piv.iter()
        .map(|p| {
            acc += p.ln();
            DetValue { ln: acc, precision }
        })
        .collect()
}

/// `D_n = det (m_{j+k})_{j,k=0}^n`.
pub fn hankel_det(m: &MomentData, n: usize, precision: Precision) -> Result<DetValue> {
    Ok(hankel_dets(m, n, precision)?[n])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JacobiMatrix {
    pub n: usize,
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "Jacobi matrix needs N diagonal and N-1 off-diagonal entries, got {} and {}",
                diag.len(),
                offdiag.len()
            )));
        }
        if let Some(b) = offdiag.iter().find(|b| !(**b > 0.0)) {
            return Err(Error::InvalidInput(format!("off-diagonal entry {b} is not positive")));
        }
        Ok(JacobiMatrix {
            n: diag.len(),
            diag,
            offdiag,
        })
    }

    pub fn dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            m[(i, i)] = self.diag[i];
        }
        for (i, b) in self.offdiag.iter().enumerate() {
            m[(i, i + 1)] = *b;
            m[(i + 1, i)] = *b;
        }
        m
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.dense()).eigenvalues.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_diff(&self, other: &JacobiMatrix) -> f64 {
        self.diag
            .iter()
            .zip(&other.diag)
            .chain(self.offdiag.iter().zip(&other.offdiag))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub atoms: Vec<f64>,
    pub weights: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::InvalidInput("atoms and weights must be nonempty and of equal length".into()));
        }
        if atoms.windows(2).any(|p| !(p[1] > p[0])) {
            return Err(Error::InvalidInput("atoms must be strictly increasing".into()));
        }
        if weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::InvalidInput("weights must be positive".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!("weights sum to {total}, not 1")));
        }
        Ok(DiscreteMeasure { atoms, weights })
    }
}

/// The `N × N` Jacobi matrix of a recurrence.
pub fn jacobi_from_recurrence(rec: &RecurrenceLine, n: usize) -> Result<JacobiMatrix> {
    if n == 0 || n > rec.len() {
        return Err(Error::InvalidInput(format!("cannot take a {n}×{n} section of {} coefficients", rec.len())));
    }
    JacobiMatrix::new(rec.a[..n].to_vec(), rec.b[..n - 1].to_vec())
}

/// Spectral measure of a finite Jacobi matrix: eigenvalues as atoms and
/// squared first eigenvector components as weights.
pub fn spectral_measure(l: &JacobiMatrix) -> Result<DiscreteMeasure> {
    JacobiMatrix::new(l.diag.clone(), l.offdiag.clone())?;
    let eig = SymmetricEigen::new(l.dense());
    let a: Vec<Dd> = l.diag.iter().map(|v| Dd::from_f64(*v)).collect();
    let b: Vec<Dd> = l.offdiag.iter().map(|v| Dd::from_f64(*v)).collect();
    let mut lams: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    lams.sort_by(f64::total_cmp);
    let refined: Vec<Dd> = lams.iter().map(|&lam| refine_eigenvalue(&a, &b, lam)).collect();
    // Newton may only move each root within its rounding neighbourhood.
    let keep = refined.iter().zip(&lams).all(|(r, l0)| (r.to_f64() - l0).abs() <= 1e-8 * (1.0 + l0.abs()))
        && refined.windows(2).all(|p| p[1].to_f64() > p[0].to_f64());
    let roots: Vec<Dd> = if keep { refined } else { lams.iter().map(|v| Dd::from_f64(*v)).collect() };
    // Weights from the Christoffel function 1/Σ p_k(λ)², accurate in
    // relative terms even when the first eigenvector component is tiny.
    let raw: Vec<Dd> = roots
        .iter()
        .map(|&lam| {
            let (mut pm, mut p, mut sum) = (Dd::ZERO, Dd::ONE, Dd::ZERO);
            for k in 0..l.n {
                sum += p * p;
                if k + 1 < l.n {
                    let prev = if k > 0 { b[k - 1] } else { Dd::ZERO };
                    let next = ((lam - a[k]) * p - prev * pm) / b[k];
                    pm = p;
                    p = next;
                }
            }
            Dd::ONE / sum
        })
        .collect();
    let total = raw.iter().fold(Dd::ZERO, |s, w| s + *w);
    let atoms: Vec<f64> = roots.iter().map(|r| r.to_f64()).collect();
    let weights: Vec<f64> = raw.iter().map(|w| (*w / total).to_f64()).collect();
    // Positive off-diagonals force a simple spectrum.
    assert!(
        atoms.windows(2).all(|p| p[1] > p[0]),
        "Jacobi matrix with positive off-diagonal has a repeated eigenvalue"
    );
    Ok(DiscreteMeasure { atoms, weights })
}

/// Newton steps on `det(λ - L)` in double-double, from a double eigenvalue.
fn refine_eigenvalue(a: &[Dd], b: &[Dd], lam0: f64) -> Dd {
    let n = a.len();
    let mut lam = Dd::from_f64(lam0);
    for _ in 0..3 {
        // p_{k+1} = ((λ - a_k) p_k - b_{k-1} p_{k-1}) / b_k, last step undivided
        let (mut pm, mut p, mut dpm, mut dp) = (Dd::ZERO, Dd::ONE, Dd::ZERO, Dd::ZERO);
        for k in 0..n {
            let prev = if k > 0 { b[k - 1] } else { Dd::ZERO };
            let mut np = (lam - a[k]) * p - prev * pm;
            let mut ndp = p + (lam - a[k]) * dp - prev * dpm;
            if k + 1 < n {
                np = np / b[k];
                ndp = ndp / b[k];
            }
            (pm, p, dpm, dp) = (p, np, dp, ndp);
        }
        if dp.to_f64() == 0.0 || !dp.is_finite() {
            break;
        }
        lam = lam - p / dp;
    }
    lam
}

/// The inverse map: the Jacobi matrix of a discrete probability measure.
pub fn jacobi_from_measure(mu: &DiscreteMeasure, n: usize) -> Result<JacobiMatrix> {
    let x: Vec<Dd> = mu.atoms.iter().map(|v| Dd::from_f64(*v)).collect();
    let w: Vec<Dd> = mu.weights.iter().map(|v| Dd::from_f64(*v)).collect();
    let rec = discrete_recurrence(&x, &w, n)?;
    jacobi_from_recurrence(&rec, n)
}

/// Toda flow by the spectral map: reweight the atoms of the spectral measure
/// by `e^{2λt}` and map back.
pub fn toda_flow_spectral(l0: &JacobiMatrix, t: f64) -> Result<JacobiMatrix> {
    if t == 0.0 {
        return Ok(l0.clone());
    }
    let mu = spectral_measure(l0)?;
    let logs: Vec<f64> = mu
        .atoms
        .iter()
        .zip(&mu.weights)
        .map(|(lam, w)| w.ln() + 2.0 * lam * t)
        .collect();
    let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = logs.iter().map(|v| (v - top).exp()).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    if let Some(w) = weights.iter().find(|w| !(**w > 1e-300)) {
        return Err(Error::DynamicRange(format!(
            "reweighted atom mass {w:e} underflows at t = {t}; the spectral map loses an atom"
        )));
    }
    let rec = recurrence_from_discrete(&mu.atoms, &weights, l0.n).map_err(|e| match e {
        Error::PrecisionExhausted { degree, .. } => Error::DynamicRange(format!(
            "reweighted measure at t = {t} resolves only {degree} recurrence steps"
        )),
        other => other,
    })?;
    jacobi_from_recurrence(&rec, l0.n)
}

fn toda_rhs(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let da = (0..n)
        .map(|k| {
            let up = if k < n - 1 { b[k] * b[k] } else { 0.0 };
            let down = if k >= 1 { b[k - 1] * b[k - 1] } else { 0.0 };
            2.0 * (up - down)
        })
        .collect();
    let db = (0..n - 1).map(|k| b[k] * (a[k + 1] - a[k])).collect();
    (da, db)
}

fn axpy(x: &[f64], s: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + s * b).collect()
}

fn energy(a: &[f64], b: &[f64]) -> f64 {
    a.iter().map(|v| v * v).sum::<f64>() + 2.0 * b.iter().map(|v| v * v).sum::<f64>()
}

/// Toda flow `dL/dt = BL - LB` (with `B` the antisymmetric part built from
/// the off-diagonal) by classical fourth-order Runge–Kutta.
///
/// Rejects the step size if `tr L²`, a conserved quantity, drifts by more
/// than `1e-9` relative.
pub fn toda_flow_ode(l0: &JacobiMatrix, t: f64, step: f64) -> Result<JacobiMatrix> {
    if !(step > 0.0) {
        return Err(Error::InvalidInput(format!("step {step} must be positive")));
    }
    let steps = (t.abs() / step).ceil() as usize;
    let mut a = l0.diag.clone();
    let mut b = l0.offdiag.clone();
    if steps == 0 {
        return Ok(l0.clone());
    }
    let h = t / steps as f64;
    let e0 = energy(&a, &b);
    for _ in 0..steps {
        let (ka1, kb1) = toda_rhs(&a, &b);
        let (ka2, kb2) = toda_rhs(&axpy(&a, h / 2.0, &ka1), &axpy(&b, h / 2.0, &kb1));
        let (ka3, kb3) = toda_rhs(&axpy(&a, h / 2.0, &ka2), &axpy(&b, h / 2.0, &kb2));
        let (ka4, kb4) = toda_rhs(&axpy(&a, h, &ka3), &axpy(&b, h, &kb3));
        for i in 0..a.len() {
            a[i] += h / 6.0 * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
        }
        for i in 0..b.len() {
            b[i] += h / 6.0 * (kb1[i] + 2.0 * kb2[i] + 2.0 * kb3[i] + kb4[i]);
        }
    }
    let drift = (energy(&a, &b) - e0).abs() / e0.max(1e-300);
    if !(drift <= 1e-9) {
        return Err(Error::StepRejected(format!("energy drift {drift:e} with step {h}")));
    }
    JacobiMatrix::new(a, b).map_err(|e| Error::StepRejected(format!("integration left the Jacobi class: {e}")))
}

/// Result of comparing the two orders of advancing in `n` and in `t`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommutationReport {
    pub n: usize,
    pub t: f64,
    /// Monic `P_n` of the reweighted measure, built directly.
    pub direct: Vec<f64>,
    /// Monic `P_n` at `t = 0`, carried along the flow.
    pub flowed: Vec<f64>,
    pub residual: f64,
}

/// Checks that the monic `P_n` of `e^{2xt} w(x) dx` is the same whether one
/// first reweights and then runs the recurrence (path A), or first builds the
/// polynomials at `t = 0` and then integrates `∂_t P_j = -2 b_{j-1}² P_{j-1}`
/// along the Toda flow of the recurrence coefficients (path B).
pub fn toda_commutation_check(weight: &WeightSpec, n: usize, t: f64) -> Result<CommutationReport> {
    let tilted = WeightSpec::tilted(t, weight.clone())?;
    let rec_t = recurrence_from_measure(&tilted, n + 1)?;
    let direct = rec_t.monic_coeffs(n)?.pop().unwrap();

    let size = n + 24;
    let rec0 = recurrence_from_measure(weight, size)?;
    let mut a = rec0.a.clone();
    let mut b = rec0.b.clone();
    let mut polys = rec0.monic_coeffs(n)?;
    let steps = ((t.abs() / 1e-3).ceil() as usize).max(1);
    let h = t / steps as f64;
    let poly_rhs = |b: &[f64], polys: &[Vec<f64>]| -> Vec<Vec<f64>> {
        polys
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let mut d = vec![0.0; p.len()];
                if j >= 1 {
                    let f = -2.0 * b[j - 1] * b[j - 1];
                    for (i, c) in polys[j - 1].iter().enumerate() {
                        d[i] = f * c;
                    }
                }
                d
            })
            .collect()
    };
    let padd = |p: &[Vec<f64>], s: f64, d: &[Vec<f64>]| -> Vec<Vec<f64>> {
        p.iter().zip(d).map(|(x, y)| axpy(x, s, y)).collect()
    };
    for _ in 0..steps {
        let (ka1, kb1) = toda_rhs(&a, &b);
        let kp1 = poly_rhs(&b, &polys);
        let (a2, b2) = (axpy(&a, h / 2.0, &ka1), axpy(&b, h / 2.0, &kb1));
        let (ka2, kb2) = toda_rhs(&a2, &b2);
        let kp2 = poly_rhs(&b2, &padd(&polys, h / 2.0, &kp1));
        let (a3, b3) = (axpy(&a, h / 2.0, &ka2), axpy(&b, h / 2.0, &kb2));
        let (ka3, kb3) = toda_rhs(&a3, &b3);
        let kp3 = poly_rhs(&b3, &padd(&polys, h / 2.0, &kp2));
        let (a4, b4) = (axpy(&a, h, &ka3), axpy(&b, h, &kb3));
        let (ka4, kb4) = toda_rhs(&a4, &b4);
        let kp4 = poly_rhs(&b4, &padd(&polys, h, &kp3));
        for i in 0..a.len() {
            a[i] += h / 6.0 * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
        }
        for i in 0..b.len() {
            b[i] += h / 6.0 * (kb1[i] + 2.0 * kb2[i] + 2.0 * kb3[i] + kb4[i]);
        }
        for (j, p) in polys.iter_mut().enumerate() {
            for i in 0..p.len() {
                p[i] += h / 6.0 * (kp1[j][i] + 2.0 * kp2[j][i] + 2.0 * kp3[j][i] + kp4[j][i]);
            }
        }
    }
    let flowed = polys.pop().unwrap();
    let residual = direct
        .iter()
        .zip(&flowed)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    Ok(CommutationReport {
        n,
        t,
        direct,
        flowed,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::line_moments;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn gauss_recurrence_and_norming_constants() {
        let rec = recurrence_from_measure(&WeightSpec::gauss(), 12).unwrap();
        for n in 0..12 {
            assert!(rec.a[n].abs() < 1e-13);
        }
        for n in 0..11 {
            assert!((rec.b[n] - ((n as f64 + 1.0) / 2.0).sqrt()).abs() < 1e-13);
        }
        assert!((rec.k[0] - 1.0).abs() < 1e-14);
        assert!((rec.k[1] - 2f64.sqrt()).abs() < 1e-14);
        assert!(rec.invariant_residual() < 1e-14);
    }

    #[test]
    fn exact_gram_schmidt_gives_rational_b_squared() {
        let m = line_moments(&WeightSpec::gauss(), 20).unwrap();
        let q: Vec<BigRational> = m.exact.unwrap().into_iter().map(|(r, _)| r).collect();
        let r = gram_schmidt_line(&q, 10).unwrap();
        for (n, b2) in r.bsq.iter().enumerate() {
            assert_eq!(*b2, BigRational::new(BigInt::from(n + 1), BigInt::from(2)));
        }
        assert!(r.a.iter().all(|a| *a == BigRational::from_integer(0.into())));
    }

    #[test]
    fn opl_values_for_gauss() {
        let rec = recurrence_from_measure(&WeightSpec::gauss(), 4).unwrap();
        let p = eval_opl(&rec, 2, 1.0).unwrap();
        assert!((p[0] - 1.0).abs() < 1e-14);
        assert!((p[1] - 2f64.sqrt()).abs() < 1e-14);
        let mp = eval_monic(&rec, 2, 0.0).unwrap();
        assert!((mp[2] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn hankel_examples() {
        let m = line_moments(&WeightSpec::gauss(), 24).unwrap();
        for tier in [Precision::Double, Precision::Extended, Precision::Exact] {
            let d = hankel_dets(&m, 12, tier).unwrap();
            assert!(d[0].value() == 1.0 || (d[0].value() - 1.0).abs() < 1e-15);
            assert!((d[1].value() - 0.5).abs() < 1e-15);
            assert!(((d[0].ln - d[1].ln).to_f64().exp() - 2.0).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_and_extended_determinants_agree() {
        let m = line_moments(&WeightSpec::gauss(), 40).unwrap();
        let e = hankel_dets(&m, 20, Precision::Exact).unwrap();
        let x = hankel_dets(&m, 20, Precision::Extended).unwrap();
        for (a, b) in e.iter().zip(&x) {
            assert!((a.ln - b.ln).abs().to_f64() < 1e-20);
        }
    }

    #[test]
    fn two_by_two_spectral_measure() {
        let l = JacobiMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        let mu = spectral_measure(&l).unwrap();
        assert!((mu.atoms[0] + 1.0).abs() < 1e-15 && (mu.atoms[1] - 1.0).abs() < 1e-15);
        assert!((mu.weights[0] - 0.5).abs() < 1e-15 && (mu.weights[1] - 0.5).abs() < 1e-15);
        let one = JacobiMatrix::new(vec![0.7], vec![]).unwrap();
        let m1 = spectral_measure(&one).unwrap();
        assert_eq!((m1.atoms[0], m1.weights[0]), (0.7, 1.0));
    }

    #[test]
    fn toda_two_by_two_closed_form() {
        let l0 = JacobiMatrix::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        for &t in &[0.0, 0.3, 1.0, -0.7] {
            let s = toda_flow_spectral(&l0, t).unwrap();
            let o = toda_flow_ode(&l0, t, 1e-3).unwrap();
            let th = (2.0f64 * t).tanh();
            let sh = 1.0 / (2.0f64 * t).cosh();
            for l in [&s, &o] {
                assert!((l.diag[0] - th).abs() < 1e-10);
                assert!((l.diag[1] + th).abs() < 1e-10);
                assert!((l.offdiag[0] - sh).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn toda_rejects_coarse_steps() {
        let l0 = JacobiMatrix::new(vec![0.0, 1.0, -2.0], vec![3.0, 2.0]).unwrap();
        assert!(matches!(toda_flow_ode(&l0, 2.0, 0.5), Err(Error::StepRejected(_))));
    }

    #[test]
    fn commutation_for_gauss_is_a_shift() {
        // e^{2xt} e^{-x²} is a Gaussian centred at t, so P_n(x; t) = P_n(x - t; 0).
        let r = toda_commutation_check(&WeightSpec::gauss(), 4, 0.3).unwrap();
        assert!(r.residual < 1e-8, "residual {}", r.residual);
        // monic Hermite-type P_4(y) = y⁴ - 3y² + 3/4 at y = x - 0.3: constant term
        let y: f64 = -0.3;
        let c0 = y.powi(4) - 3.0 * y * y + 0.75;
        assert!((r.direct[0] - c0).abs() < 1e-10);
    }

    #[test]
    fn commutation_for_quartic() {
        let r = toda_commutation_check(&WeightSpec::quartic(1.0, 0.0), 5, 0.25).unwrap();
        assert!(r.residual < 1e-8, "residual {}", r.residual);
    }

    fn jacobi_strategy(max: usize) -> impl Strategy<Value = JacobiMatrix> {
        (1..=max).prop_flat_map(|n| {
            (
                prop::collection::vec(-2.0f64..2.0, n),
                prop::collection::vec(0.2f64..2.0, n - 1),
            )
                .prop_map(|(d, o)| JacobiMatrix::new(d, o).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn spectral_round_trip(l in jacobi_strategy(20)) {
            let mu = spectral_measure(&l).unwrap();
            let back = jacobi_from_measure(&mu, l.n).unwrap();
            prop_assert!(back.max_diff(&l) <= 1e-10, "diff {}", back.max_diff(&l));
        }

        #[test]
        fn toda_paths_agree_and_preserve_spectrum(l in jacobi_strategy(8)) {
            let s = toda_flow_spectral(&l, 1.0).unwrap();
            let o = toda_flow_ode(&l, 1.0, 2e-4).unwrap();
            prop_assert!(s.max_diff(&o) <= 1e-6, "diff {}", s.max_diff(&o));
            let e0 = l.eigenvalues();
            let e1 = s.eigenvalues();
            for (a, b) in e0.iter().zip(&e1) {
                prop_assert!((a - b).abs() <= 1e-10);
            }
            let tr0: f64 = l.diag.iter().sum();
            let tr1: f64 = o.diag.iter().sum();
            prop_assert!((tr0 - tr1).abs() <= 1e-12 * (1.0 + tr0.abs()) * l.n as f64);
        }

        #[test]
        fn even_weights_have_zero_diagonal(g in 0.2f64..2.0, d in 0.0f64..2.0) {
            let rec = recurrence_from_measure(&WeightSpec::quartic(g, d), 8).unwrap();
            for a in &rec.a {
                prop_assert!(a.abs() < 1e-12);
            }
        }
    }
}
