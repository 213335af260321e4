//! Orthogonal polynomials on the unit circle: Verblunsky coefficients from
//! Toeplitz Gram–Schmidt and from the Schur algorithm, the Szegő recurrence,
//! Toeplitz determinants, CMV matrices and Wall polynomials.
//!
//! Conventions: `Φ_{n+1} = zΦ_n - conj(α_n) Φ_n*`, `α_n = -conj(Φ_{n+1}(0))`,
//! `ρ_n = √(1 - |α_n|²)`, `κ_{n+1} = κ_n/ρ_n`, `κ_0 = μ̂_0^{-1/2}`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Partial;
use crate::measures::{self, Contour, MomentData, WeightSpec};
use crate::numeric::exact;
use crate::numeric::linalg::{ldl_pivots, ldl_pivots_hermitian};
use crate::numeric::poly;
use crate::numeric::{Cx, Dd, Precision};
use crate::opline::DetValue;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerblunskySeq {
    /// `α_0 .. α_{N-1}`
    pub alpha: Vec<Complex64>,
    /// `ρ_0 .. ρ_{N-1}`
    pub rho: Vec<f64>,
    /// `κ_0 .. κ_N`
    pub kappa: Vec<f64>,
}

impl VerblunskySeq {
    /// Builds `ρ` and `κ` from the coefficients and the total mass.
    pub fn from_alpha(alpha: Vec<Complex64>, mu0: f64) -> Result<Self> {
        if let Some(a) = alpha.iter().find(|a| !(a.norm() < 1.0)) {
            return Err(Error::InvalidInput(format!("Verblunsky coefficient {a} is not inside the unit disk")));
        }
        let rho: Vec<f64> = alpha.iter().map(|a| (1.0 - a.norm_sqr()).sqrt()).collect();
        let mut kappa = vec![1.0 / mu0.sqrt()];
        for r in &rho {
            let last = *kappa.last().unwrap();
            kappa.push(last / r);
        }
        Ok(VerblunskySeq { alpha, rho, kappa })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Largest violation of `ρ² + |α|² = 1` and `κ_{n+1} = κ_n/ρ_n`.
    pub fn invariant_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for (j, (a, rho)) in self.alpha.iter().zip(&self.rho).enumerate() {
            if !(a.norm() < 1.0) {
                return f64::INFINITY;
            }
            r = r.max((rho * rho + a.norm_sqr() - 1.0).abs());
            r = r.max((self.kappa[j + 1] - self.kappa[j] / rho).abs() / self.kappa[j + 1]);
        }
        r
    }

    /// Monic `Φ_0 .. Φ_n` coefficients (ascending), `n ≤ N`.
    pub fn monic_polys(&self, n: usize) -> Result<Vec<Vec<Complex64>>> {
        if n > self.len() {
            return Err(Error::InvalidInput(format!("Φ_{n} needs α_0..α_{}, have {}", n - 1, self.len())));
        }
        let mut out = vec![vec![Complex64::new(1.0, 0.0)]];
        for j in 0..n {
            let p = &out[j];
            let star = poly::reverse(p, j);
            let next = poly::add(&poly::shift(p, 1), &poly::scale(&star, -self.alpha[j].conj()));
            out.push(next);
        }
        Ok(out)
    }

    /// `(Φ_n, Φ_n*)` coefficients.
    pub fn monic_pair(&self, n: usize) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let p = self.monic_polys(n)?.pop().unwrap();
        let s = poly::reverse(&p, n);
        Ok((p, s))
    }
}

/// Monic orthogonal polynomials by Gram–Schmidt against the Toeplitz form
/// `⟨z^j, z^k⟩ = μ̂_{k-j}`, carried out in double-double arithmetic.
///
/// `κ_n` is read off the norm of `Φ_n` rather than from determinant ratios,
/// so the two can be compared independently.
pub fn verblunsky_levinson(moments: &MomentData, n: usize) -> Result<VerblunskySeq> {
    Ok(levinson_polys(moments, n)?.0)
}

/// As [`verblunsky_levinson`], also returning the `Φ_0..Φ_N` coefficients.
pub fn levinson_polys(moments: &MomentData, n: usize) -> Result<(VerblunskySeq, Vec<Vec<Cx<Dd>>>)> {
    if moments.contour != Contour::Circle {
        return Err(Error::InvalidInput("Verblunsky coefficients need circle moments".into()));
    }
    if moments.order() < n {
        return Err(Error::InsufficientMoments(format!("degree {n} needs moments through order {n}")));
    }
    let mu = |k: i64| moments.mu(k);
    let mu0 = moments.values[0].re;
    let mut polys: Vec<Vec<Cx<Dd>>> = vec![vec![Cx::one()]];
    let mut norms: Vec<Dd> = vec![mu0];
    let mut alpha = Vec::with_capacity(n);
    let mut rho = Vec::with_capacity(n);
    let mut kappa = vec![mu0.sqrt().recip().to_f64()];
    for deg in 1..=n {
        let mut p = vec![Cx::<Dd>::zero(); deg + 1];
        p[deg] = Cx::one();
        for (j, pj) in polys.iter().enumerate() {
            // ⟨z^deg, Φ_j⟩ = Σ_b conj(Φ_j[b]) μ̂_{b-deg}
            let mut s = Cx::<Dd>::zero();
            for (b, c) in pj.iter().enumerate() {
                s = s + c.conj() * mu(b as i64 - deg as i64);
            }
            let f = Cx::new(s.re / norms[j], s.im / norms[j]);
            for (i, c) in pj.iter().enumerate() {
                p[i] = p[i].clone() - f.clone() * c.clone();
            }
        }
        let mut nn = Cx::<Dd>::zero();
        for (a, pa) in p.iter().enumerate() {
            for (b, pb) in p.iter().enumerate() {
                nn = nn + pa.clone() * pb.conj() * mu(b as i64 - a as i64);
            }
        }
        let h = nn.re;
        if !(h.hi > 1e-28 * norms[deg - 1].hi) {
            let partial = VerblunskySeq { alpha, rho, kappa };
            return Err(Error::PrecisionExhausted {
                degree: deg,
                partial: Box::new(Partial::Circle(partial)),
            });
        }
        let a = -p[0].conj();
        let rho_dd = (Dd::ONE - a.norm_sqr()).sqrt();
        alpha.push(a.to_c64());
        rho.push(rho_dd.to_f64());
        kappa.push(h.sqrt().recip().to_f64());
        norms.push(h);
        polys.push(p);
    }
    Ok((VerblunskySeq { alpha, rho, kappa }, polys))
}

/// Orthonormal `(φ_n(z), φ_n*(z))` by the Szegő recurrence.
pub fn szego_eval(v: &VerblunskySeq, n: usize, z: Complex64) -> Result<(Complex64, Complex64)> {
    if n > v.len() {
        return Err(Error::InvalidInput(format!("φ_{n} needs {n} Verblunsky coefficients, have {}", v.len())));
    }
    let k0 = Complex64::new(v.kappa[0], 0.0);
    let (mut p, mut s) = (k0, k0);
    for j in 0..n {
        let a = v.alpha[j];
        let np = (z * p - a.conj() * s) / v.rho[j];
        let ns = (s - a * z * p) / v.rho[j];
        p = np;
        s = ns;
    }
    Ok((p, s))
}

/// Monic `(Φ_n(z), Φ_n*(z))`.
pub fn szego_eval_monic(v: &VerblunskySeq, n: usize, z: Complex64) -> Result<(Complex64, Complex64)> {
    let (p, s) = szego_eval(v, n, z)?;
    Ok((p / v.kappa[n], s / v.kappa[n]))
}

/// Leading Toeplitz determinants `Δ_0 .. Δ_n`.
pub fn toeplitz_dets(m: &MomentData, n: usize, precision: Precision) -> Result<Vec<DetValue>> {
    if m.contour != Contour::Circle {
        return Err(Error::InvalidInput("Toeplitz determinants need circle moments".into()));
    }
    if m.order() < n {
        return Err(Error::InsufficientMoments(format!("Δ_{n} needs moments through order {n}")));
    }
    let fail = |j: usize, tier: &str| {
        Error::DegenerateMeasure(format!("Toeplitz matrix lost positive definiteness at order {j} in {tier} precision"))
    };
    match precision {
        Precision::Exact => {
            let q: Vec<(BigRational, BigRational)> = match &m.exact {
                Some(e) => e.clone(),
                None => m.values.iter().map(|v| (v.re.to_rational(), v.im.to_rational())).collect(),
            };
            if q.iter().any(|(_, im)| !im.is_zero()) {
                return Err(Error::InvalidInput(
                    "exact Toeplitz determinants are implemented for real moment sequences".into(),
                ));
            }
            let mat: Vec<Vec<BigRational>> = (0..=n)
                .map(|i| (0..=n).map(|j| q[(i as i64 - j as i64).unsigned_abs() as usize].0.clone()).collect())
                .collect();
            let minors = exact::rational_leading_minors(&mat).map_err(|j| fail(j - 1, "exact"))?;
            minors
                .iter()
                .map(|d| {
                    if d <= &BigRational::zero() {
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
            let mat: Vec<Vec<Cx<Dd>>> =
                (0..=n).map(|i| (0..=n).map(|j| m.mu(i as i64 - j as i64)).collect()).collect();
            let piv = ldl_pivots_hermitian(mat);
            if piv.len() <= n {
                return Err(fail(piv.len(), "extended"));
            }
            Ok(accumulate(&piv, Precision::Extended))
        }
        Precision::Double => {
            let real = m.values.iter().all(|v| v.im.hi == 0.0);
            let piv: Vec<f64> = if real {
                let mat: Vec<Vec<f64>> = (0..=n)
                    .map(|i| (0..=n).map(|j| m.mu(i as i64 - j as i64).re.to_f64()).collect())
                    .collect();
                ldl_pivots(mat)
            } else {
                let mat: Vec<Vec<Cx<f64>>> = (0..=n)
                    .map(|i| (0..=n).map(|j| Cx::from_c64(m.mu_c64(i as i64 - j as i64))).collect())
                    .collect();
                ldl_pivots_hermitian(mat)
            };
            let spread = piv.iter().cloned().fold(0.0f64, f64::max) / piv.iter().cloned().fold(f64::INFINITY, f64::min);
            if piv.len() <= n || !(spread < 1e10) {
                return toeplitz_dets(m, n, Precision::Extended);
            }
            let pd: Vec<Dd> = piv.into_iter().map(Dd::from_f64).collect();
            Ok(accumulate(&pd, Precision::Double))
        }
    }
}

fn accumulate(piv: &[Dd], precision: Precision) -> Vec<DetValue> {
    let mut acc = Dd::ZERO;
    piv.iter()
        .map(|p| {
            acc += p.ln();
            DetValue { ln: acc, precision }
        })
        .collect()
}

/// `Δ_n = det (μ̂_{j-k})_{j,k=0}^n`.
pub fn toeplitz_det(m: &MomentData, n: usize, precision: Precision) -> Result<DetValue> {
    Ok(toeplitz_dets(m, n, precision)?[n])
}

/// `N × N` section of the CMV matrix `C = LM`.
#[derive(Clone, Debug)]
pub struct CmvMatrix {
    pub n: usize,
    pub matrix: DMatrix<Complex64>,
}

/// Serializable band form: `bands[d + 2][i]` is the entry `(i, i + d)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmvBands {
    pub n: usize,
    pub offsets: Vec<i64>,
    pub bands: Vec<Vec<[f64; 2]>>,
}

impl CmvMatrix {
    /// Largest entry outside the five central diagonals.
    pub fn off_band_max(&self) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                if (i as i64 - j as i64).abs() > 2 {
                    m = m.max(self.matrix[(i, j)].norm());
                }
            }
        }
        m
    }

    pub fn bands(&self) -> CmvBands {
        let offsets: Vec<i64> = (-2..=2).collect();
        let bands = offsets
            .iter()
            .map(|&d| {
                (0..self.n as i64)
                    .filter(|i| (0..self.n as i64).contains(&(i + d)))
                    .map(|i| {
                        let v = self.matrix[(i as usize, (i + d) as usize)];
                        [v.re, v.im]
                    })
                    .collect()
            })
            .collect();
        CmvBands {
            n: self.n,
            offsets,
            bands,
        }
    }

    pub fn from_bands(b: &CmvBands) -> Result<Self> {
        let mut matrix = DMatrix::zeros(b.n, b.n);
        for (d, band) in b.offsets.iter().zip(&b.bands) {
            let rows: Vec<i64> = (0..b.n as i64).filter(|i| (0..b.n as i64).contains(&(i + d))).collect();
            if rows.len() != band.len() {
                return Err(Error::Parse(format!("band {d} has {} entries, expected {}", band.len(), rows.len())));
            }
            for (i, v) in rows.iter().zip(band) {
                matrix[(*i as usize, (*i + d) as usize)] = Complex64::new(v[0], v[1]);
            }
        }
        Ok(CmvMatrix { n: b.n, matrix })
    }

    /// Rows and columns whose support stays inside the section; these must
    /// have unit norm.
    pub fn interior_norm_residual(&self) -> f64 {
        let mut r: f64 = 0.0;
        for i in 0..self.n.saturating_sub(3) {
            let row: f64 = (0..self.n).map(|j| self.matrix[(i, j)].norm_sqr()).sum();
            let col: f64 = (0..self.n).map(|j| self.matrix[(j, i)].norm_sqr()).sum();
            r = r.max((row - 1.0).abs()).max((col - 1.0).abs());
        }
        r
    }
}

fn theta_block(m: &mut DMatrix<Complex64>, j: usize, a: Complex64, rho: f64) {
    let n = m.nrows();
    m[(j, j)] = a.conj();
    if j + 1 < n {
        m[(j, j + 1)] = Complex64::new(rho, 0.0);
        m[(j + 1, j)] = Complex64::new(rho, 0.0);
        m[(j + 1, j + 1)] = -a;
    }
}

/// `C = LM` with `L = diag(Θ_0, Θ_2, …)`, `M = diag(1, Θ_1, Θ_3, …)` and
/// `Θ_j = [[conj α_j, ρ_j], [ρ_j, -α_j]]`, both cut to `N × N` before
/// multiplying.
pub fn cmv_build(v: &VerblunskySeq, n: usize) -> Result<CmvMatrix> {
    if n == 0 || n > v.len() {
        return Err(Error::InvalidInput(format!("a {n}×{n} CMV section needs {n} Verblunsky coefficients, have {}", v.len())));
    }
    let mut l = DMatrix::<Complex64>::zeros(n, n);
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    for j in 0..n {
        if j % 2 == 0 {
            theta_block(&mut l, j, v.alpha[j], v.rho[j]);
        } else {
            theta_block(&mut m, j, v.alpha[j], v.rho[j]);
        }
    }
    Ok(CmvMatrix { n, matrix: l * m })
}

/// `|⟨e_0, C^k e_0⟩ - conj(μ̂_k)/μ̂_0|`, valid while `k ≤ N/2 - 2`.
pub fn cmv_moment_check(c: &CmvMatrix, moments: &MomentData, k: usize) -> Result<f64> {
    let window = (c.n / 2).saturating_sub(2);
    if k > window {
        return Err(Error::TruncationWindow(format!(
            "moment {k} needs a CMV section larger than {} (window k ≤ {window})",
            c.n
        )));
    }
    if k > moments.order() {
        return Err(Error::InsufficientMoments(format!("moment {k} not available")));
    }
    let mut v = DMatrix::<Complex64>::zeros(c.n, 1);
    v[(0, 0)] = Complex64::new(1.0, 0.0);
    for _ in 0..k {
        v = &c.matrix * v;
    }
    let want = moments.mu_c64(-(k as i64)) / moments.re(0);
    Ok((v[(0, 0)] - want).norm())
}

/// Schur iterates as truncated Taylor series; returns `f_n` coefficients for
/// `n = 0..=steps`. `len` is the initial series length.
pub fn schur_series_iterates(moments: &MomentData, steps: usize, len: usize) -> Result<Vec<Vec<Cx<Dd>>>> {
    if moments.contour != Contour::Circle {
        return Err(Error::InvalidInput("Schur algorithm needs circle moments".into()));
    }
    if moments.order() < len || len <= steps {
        return Err(Error::InsufficientMoments(format!(
            "{len} series terms need moments through order {len} and more terms than steps"
        )));
    }
    let mu0 = moments.values[0].re;
    // f = S / (2 + zS), S_j = 2 μ̂_{j+1}/μ̂_0
    let s: Vec<Cx<Dd>> = (0..len)
        .map(|j| {
            let m = moments.values[j + 1].clone();
            Cx::new(m.re / mu0, m.im / mu0).scale(&Dd::from_f64(2.0))
        })
        .collect();
    let mut d = vec![Cx::real(Dd::from_f64(2.0))];
    d.extend(s.iter().take(len - 1).cloned());
    let mut f = series_div(&s, &d);
    let mut out = vec![f.clone()];
    for step in 0..steps {
        let g0 = f[0].clone();
        let modulus = g0.to_c64().norm();
        if !(modulus < 1.0) {
            return Err(Error::SchurParameterOutOfDisk { step, modulus });
        }
        let mut g = f.clone();
        g[0] = Cx::zero();
        let mut h: Vec<Cx<Dd>> = f.iter().map(|c| -(g0.conj() * c.clone())).collect();
        h[0] = h[0].clone() + Cx::one();
        let q = series_div(&g, &h);
        f = q[1..].to_vec();
        out.push(f.clone());
    }
    Ok(out)
}

fn series_div(num: &[Cx<Dd>], den: &[Cx<Dd>]) -> Vec<Cx<Dd>> {
    let n = num.len();
    let inv0 = Cx::one() / den[0].clone();
    let mut q: Vec<Cx<Dd>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut acc = num[j].clone();
        for i in 1..=j.min(den.len() - 1) {
            acc = acc - den[i].clone() * q[j - i].clone();
        }
        q.push(acc * inv0.clone());
    }
    q
}

/// Verblunsky coefficients `α_n = f_n(0)` from the Schur algorithm on the
/// Taylor coefficients of the Schur function, with eight guard terms.
pub fn schur_geronimus(moments: &MomentData, n: usize) -> Result<VerblunskySeq> {
    let len = n + 8;
    let it = schur_series_iterates(moments, n.saturating_sub(1), len)?;
    let alpha: Vec<Complex64> = it.iter().take(n).map(|f| f[0].to_c64()).collect();
    VerblunskySeq::from_alpha(alpha, moments.re(0))
}

/// `f_n(z)` from the series iterates, with a tail check.
pub fn schur_iterate_series(moments: &MomentData, n: usize, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("|z| = {r} is not inside the unit disk")));
    }
    let avail = moments.order().saturating_sub(1);
    let it = schur_series_iterates(moments, n, avail)?;
    let f = &it[n];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for c in f {
        acc += c.to_c64() * zk;
        zk *= z;
    }
    let last = f.last().map(|c| c.to_c64().norm()).unwrap_or(0.0);
    if last * r.powi(f.len() as i32) / (1.0 - r) > 1e-12 {
        return Err(Error::InsufficientMoments(format!("series for f_{n} not converged at |z| = {r}")));
    }
    Ok(acc)
}

/// `f_n(z) = ∫ Φ_n*(s) s^{-n}/(s-z) dμ / ∫ Φ_n(s) s^{1-n}/(s-z) dμ` by the
/// trapezoid rule on the circle, refined until two grids agree.
pub fn schur_iterate_integral(weight: &WeightSpec, n: usize, z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if r > 0.95 {
        return Err(Error::Domain(format!("|z| = {r} > 0.95: quadrature is unreliable this close to the circle")));
    }
    let moments = measures::circle_moments(weight, n + 1)?;
    let v = verblunsky_levinson(&moments, n)?;
    let (phi, star) = v.monic_pair(n)?;
    let eval = |m: usize| -> Complex64 {
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let th = 2.0 * PI * j as f64 / m as f64;
            let s = Complex64::from_polar(1.0, th);
            let w = weight.eval(th) / (s - z);
            let sn = s.powi(-(n as i32));
            num += poly::eval(&star, s) * sn * w;
            den += poly::eval(&phi, s) * sn * s * w;
        }
        num / den
    };
    let need = if r > 0.0 { (-40.0 / r.ln()).ceil() as usize } else { 0 };
    let mut m = need.max(8 * (n + 1)).max(512).next_power_of_two();
    let mut prev = eval(m);
    for _ in 0..6 {
        m *= 2;
        let next = eval(m);
        if (next - prev).norm() <= 1e-13 * (1.0 + next.norm()) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::GridUnderresolved(format!("Schur iterate integrals at z = {z} did not converge")))
}

/// Wall polynomials with Pinter–Nevai residuals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WallReport {
    pub n: usize,
    /// `A_{n-1}` coefficients (ascending), as `[re, im]` pairs.
    pub a: Vec<[f64; 2]>,
    /// `B_{n-1}` coefficients.
    pub b: Vec<[f64; 2]>,
    /// max-coefficient residual of `Φ_n* - (B_{n-1} - z A_{n-1})`
    pub residual_star: f64,
    /// max-coefficient residual of `Φ_n - (z B_{n-1}* - A_{n-1}*)`
    pub residual_phi: f64,
}

/// The Wall pair `(A_{n-1}, B_{n-1})` read off the product of the inverted
/// Schur steps `M_k = [[z, α_k], [conj(α_k) z, 1]]`, whose product is
/// `[[z B*, A], [z A*, B]]`, and the residuals of the Pinter–Nevai formulae
/// against `Φ_n` from the Szegő recurrence.
pub fn wall_pinter_nevai(v: &VerblunskySeq, n: usize) -> Result<WallReport> {
    if n == 0 || n > v.len() {
        return Err(Error::InvalidInput(format!("Wall polynomials need 1 ≤ n ≤ {}, got {n}", v.len())));
    }
    let one = vec![Complex64::new(1.0, 0.0)];
    let zpoly = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)];
    // product entries as polynomials
    let mut p = [[one.clone(), vec![]], [vec![], one.clone()]];
    for k in 0..n {
        let a = v.alpha[k];
        let mk = [
            [zpoly.clone(), vec![a]],
            [poly::scale(&zpoly, a.conj()), one.clone()],
        ];
        let mut next: [[Vec<Complex64>; 2]; 2] = Default::default();
        for i in 0..2 {
            for j in 0..2 {
                next[i][j] = poly::add(&poly::mul(&p[i][0], &mk[0][j]), &poly::mul(&p[i][1], &mk[1][j]));
            }
        }
        p = next;
    }
    let mut a_poly = p[0][1].clone();
    let mut b_poly = p[1][1].clone();
    a_poly.resize(n, Complex64::new(0.0, 0.0));
    b_poly.resize(n, Complex64::new(0.0, 0.0));
    let (phi, star) = v.monic_pair(n)?;
    let star_pn = poly::add(&b_poly, &poly::scale(&poly::shift(&a_poly, 1), Complex64::new(-1.0, 0.0)));
    let phi_pn = poly::add(
        &poly::shift(&poly::reverse(&b_poly, n - 1), 1),
        &poly::scale(&poly::reverse(&a_poly, n - 1), Complex64::new(-1.0, 0.0)),
    );
    Ok(WallReport {
        n,
        a: a_poly.iter().map(|c| [c.re, c.im]).collect(),
        b: b_poly.iter().map(|c| [c.re, c.im]).collect(),
        residual_star: poly::max_diff(&star, &star_pn),
        residual_phi: poly::max_diff(&phi, &phi_pn),
    })
}
