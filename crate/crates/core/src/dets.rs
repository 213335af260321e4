//! Determinant identities: one-point functions, relative Hankel/Toeplitz
//! determinants as `t`-integrals, the strong Szegő limit, its Hankel analog
//! and the decay of Toeplitz-inverse errors.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::measures::{self, Contour, MomentData, WeightSpec};
use crate::numeric::exact;
use crate::numeric::quad;
use crate::numeric::{Cx, Dd, Precision};
use crate::opcircle::{self, VerblunskySeq};
use crate::opline::{self, RecurrenceLine};
use crate::{Error, Result};

/// Tolerance for the normalization and Christoffel–Darboux checks.
pub const ONE_POINT_TOL: f64 = 1e-8;

/// `R(x)` (line) or `R(θ)` (circle) on a grid, with its cross-checks.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OnePointFunction {
    pub contour: Contour,
    pub n: usize,
    pub grid: Vec<f64>,
    /// Wronskian form of the first column of `X^{(n+1)}` / `Y^{(n+1)}`.
    pub values: Vec<f64>,
    /// `Σ_{j≤n} p_j² w` or `Σ_{j≤n} |φ_j|² ω`.
    pub christoffel_darboux: Vec<f64>,
    pub cd_residual: f64,
    /// `∫ R dx` or `∫ R dθ/2π`; equals `n + 1`.
    pub integral: f64,
    pub flagged: bool,
}

/// `k_n² (P'_{n+1} P_n - P_{n+1} P'_n)(x)`, i.e.
/// `(1/2πi)(X₁₁ X₂₁' - X₁₁' X₂₁)` for `X = X^{(n+1)}`.
pub fn line_wronskian(rec: &RecurrenceLine, n: usize, x: f64) -> f64 {
    let (mut p0, mut d0) = (0.0, 0.0);
    let (mut p1, mut d1) = (1.0, 0.0);
    for j in 0..=n {
        let b2 = if j > 0 { rec.b[j - 1] * rec.b[j - 1] } else { 0.0 };
        let p2 = (x - rec.a[j]) * p1 - b2 * p0;
        let d2 = p1 + (x - rec.a[j]) * d1 - b2 * d0;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
    }
    rec.k[n] * rec.k[n] * (d1 * p0 - p1 * d0)
}

/// `-κ_n² (Φ_{n+1} Φ*_n' - Φ'_{n+1} Φ*_n) z^{-n}`, i.e.
/// `(Y₁₁ Y₂₁' - Y₁₁' Y₂₁) z^{-n}` for `Y = Y^{(n+1)}`, `' = d/dz`.
pub fn circle_wronskian(v: &VerblunskySeq, n: usize, z: Complex64) -> Complex64 {
    // Φ_j, Φ*_j and their z-derivatives by the Szegő recurrence.
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut p, mut s, mut dp, mut ds) = (one, one, zero, zero);
    let mut prev_star = (one, zero);
    for j in 0..=n {
        let a = v.alpha[j];
        if j == n {
            prev_star = (s, ds);
        }
        let np = z * p - a.conj() * s;
        let ns = s - a * z * p;
        let ndp = p + z * dp - a.conj() * ds;
        let nds = ds - a * (p + z * dp);
        p = np;
        s = ns;
        dp = ndp;
        ds = nds;
    }
    let (sn, dsn) = prev_star;
    let k2 = v.kappa[n] * v.kappa[n];
    -k2 * (p * dsn - dp * sn) * z.powi(-(n as i32))
}

/// Default evaluation grid: 201 points over the bulk of a line weight, 256
/// angles on the circle.
pub fn default_grid(weight: &WeightSpec) -> Result<Vec<f64>> {
    match weight.contour {
        Contour::Circle => Ok(quad::circle_grid(256)),
        Contour::Line => {
            let (a, b) = measures::line_support(weight, 0)?;
            let (a, b) = (0.6 * a, 0.6 * b);
            Ok((0..201).map(|j| a + (b - a) * j as f64 / 200.0).collect())
        }
    }
}

/// The one-point function of the `n+1`-particle ensemble for a weight.
pub fn one_point_fn(weight: &WeightSpec, n: usize, grid: Option<&[f64]>) -> Result<OnePointFunction> {
    let grid = match grid {
        Some(g) => g.to_vec(),
        None => default_grid(weight)?,
    };
    match weight.contour {
        Contour::Line => {
            let (xs, ws) = measures::discretize_line(weight, n + 2)?;
            let rec = opline::recurrence_from_discrete(&xs, &ws, n + 2)?;
            let values: Vec<f64> = grid.iter().map(|&x| line_wronskian(&rec, n, x) * weight.eval(x)).collect();
            let cd: Vec<f64> = grid
                .iter()
                .map(|&x| {
                    let p = opline::eval_opl(&rec, n, x).unwrap();
                    p.iter().map(|v| v * v).sum::<f64>() * weight.eval(x)
                })
                .collect();
            let integral: f64 = xs.iter().zip(&ws).map(|(x, w)| w * line_wronskian(&rec, n, *x)).sum();
            Ok(finish(Contour::Line, n, grid, values, cd, integral))
        }
        Contour::Circle => {
            let m = measures::circle_moments(weight, n + 1)?;
            let v = opcircle::verblunsky_levinson(&m, n + 1)?;
            let at = |th: f64| -> (f64, f64) {
                let z = Complex64::from_polar(1.0, th);
                let w = weight.eval(th);
                let r = circle_wronskian(&v, n, z).re * w;
                let mut cd = 0.0;
                for j in 0..=n {
                    cd += opcircle::szego_eval(&v, j, z).unwrap().0.norm_sqr();
                }
                (r, cd * w)
            };
            let (values, cd): (Vec<f64>, Vec<f64>) = grid.iter().map(|&t| at(t)).unzip();
            let integral = periodic_mean(|th| at(th).0)?;
            Ok(finish(Contour::Circle, n, grid, values, cd, integral))
        }
    }
}

fn finish(contour: Contour, n: usize, grid: Vec<f64>, values: Vec<f64>, cd: Vec<f64>, integral: f64) -> OnePointFunction {
    let cd_residual = values
        .iter()
        .zip(&cd)
        .map(|(a, b)| (a - b).abs() / b.abs().max(1.0))
        .fold(0.0, f64::max);
    let flagged = cd_residual > ONE_POINT_TOL || (integral - (n + 1) as f64).abs() > ONE_POINT_TOL;
    OnePointFunction {
        contour,
        n,
        grid,
        values,
        christoffel_darboux: cd,
        cd_residual,
        integral,
        flagged,
    }
}

/// `∫ f dθ/2π` by the trapezoid rule, doubling until two grids agree.
fn periodic_mean<F: Fn(f64) -> f64>(f: F) -> Result<f64> {
    let mean = |m: usize| quad::circle_grid(m).iter().map(|t| f(*t)).sum::<f64>() / m as f64;
    let mut m = 256;
    let mut prev = mean(m);
    while m < 1 << 16 {
        m *= 2;
        let next = mean(m);
        if (next - prev).abs() <= 1e-14 * next.abs().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::GridUnderresolved("periodic trapezoid rule did not converge".into()))
}

/// A relative determinant computation.
#[derive(Clone, Debug)]
pub struct RelDetJob {
    pub w1: WeightSpec,
    pub w2: WeightSpec,
    pub n: usize,
    pub t_nodes: usize,
}

impl RelDetJob {
    pub fn new(w1: WeightSpec, w2: WeightSpec, n: usize) -> Result<Self> {
        if w1.contour != w2.contour {
            return Err(Error::InvalidInput(format!("{w1} and {w2} live on different contours")));
        }
        Ok(RelDetJob { w1, w2, n, t_nodes: 24 })
    }

    pub fn with_nodes(mut self, t_nodes: usize) -> Self {
        self.t_nodes = t_nodes;
        self
    }
}

/// `{n, lhs, rhs, abs_err, rel_err, nodes}`: `lhs` is the brute-force log
/// ratio of determinants, `rhs` the `t`-integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelDetReport {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub nodes: usize,
}

/// `∫₀¹ dt ∫ R_t (ω₁ - 1)/ω_t`, with `R_t` the one-point function of
/// `ω_t ω₂`, `ω_t = 1 - t + t ω₁`. The factor `ω_t` cancels, leaving the
/// Wronskian times `(ω₁ - 1) ω₂`.
pub fn relative_logdet(job: &RelDetJob) -> Result<f64> {
    let (tn, tw) = quad::gauss_legendre_on(job.t_nodes, 0.0, 1.0);
    let n = job.n;
    let inner: Vec<Result<f64>> = match job.w1.contour {
        Contour::Line => {
            let (xs, qs) = measures::discretize_line(&job.w2, n + 2)?;
            let w1: Vec<f64> = xs.iter().map(|x| job.w1.eval(*x)).collect();
            if w1.iter().any(|v| !(*v > 0.0)) {
                return Err(Error::InvalidInput(format!("{} is not positive on the quadrature grid", job.w1)));
            }
            tn.par_iter()
                .enumerate()
                .map(|(node, &t)| {
                    let wt: Vec<f64> = qs.iter().zip(&w1).map(|(q, a)| q * (1.0 - t + t * a)).collect();
                    let rec = opline::recurrence_from_discrete(&xs, &wt, n + 2).map_err(|e| node_error(node, t, e))?;
                    Ok(xs
                        .iter()
                        .zip(&qs)
                        .zip(&w1)
                        .map(|((x, q), a)| q * line_wronskian(&rec, n, *x) * (a - 1.0))
                        .sum())
                })
                .collect()
        }
        Contour::Circle => {
            let (m2, _) = crate::rhp::weight_series(&job.w2, n + 1)?;
            let prod = WeightSpec::product(job.w1.clone(), job.w2.clone())?;
            let (m12, _) = crate::rhp::weight_series(&prod, n + 1)?;
            let order = m2.order().min(m12.order()).min(n + 1);
            tn.par_iter()
                .enumerate()
                .map(|(node, &t)| {
                    let values: Vec<Cx<Dd>> = (0..=order)
                        .map(|k| {
                            let a = m2.values[k].clone();
                            let b = m12.values[k].clone();
                            let s = Dd::from_f64(1.0 - t);
                            let tt = Dd::from_f64(t);
                            a.scale(&s) + b.scale(&tt)
                        })
                        .collect();
                    let md = MomentData {
                        contour: Contour::Circle,
                        precision: Precision::Extended,
                        values,
                        exact: None,
                    };
                    let v = opcircle::verblunsky_levinson(&md, n + 1).map_err(|e| node_error(node, t, e))?;
                    periodic_mean(|th| {
                        let z = Complex64::from_polar(1.0, th);
                        circle_wronskian(&v, n, z).re * (job.w1.eval(th) - 1.0) * job.w2.eval(th)
                    })
                })
                .collect()
        }
    };
    let mut total = 0.0;
    for (r, w) in inner.into_iter().zip(&tw) {
        total += w * r?;
    }
    Ok(total)
}

fn node_error(node: usize, t: f64, e: Error) -> Error {
    Error::DegenerateMeasure(format!("t-node {node} (t = {t:.6}): {e}"))
}

/// `ln D_n(ω₁ω₂)/D_n(ω₂)` (or the Toeplitz analog) from moment determinants.
pub fn brute_force_logdet(w1: &WeightSpec, w2: &WeightSpec, n: usize) -> Result<f64> {
    let prod = WeightSpec::product(w1.clone(), w2.clone())?;
    match w1.contour {
        Contour::Line => {
            let a = measures::line_moments(&prod, 2 * n)?;
            let b = measures::line_moments(w2, 2 * n)?;
            let tier = if a.exact.is_some() && b.exact.is_some() {
                Precision::Exact
            } else {
                Precision::Extended
            };
            let da = opline::hankel_det(&a, n, tier)?;
            let db = opline::hankel_det(&b, n, tier)?;
            Ok((da.ln - db.ln).to_f64())
        }
        Contour::Circle => {
            let a = measures::circle_moments(&prod, n)?;
            let b = measures::circle_moments(w2, n)?;
            let da = opcircle::toeplitz_det(&a, n, Precision::Extended)?;
            let db = opcircle::toeplitz_det(&b, n, Precision::Extended)?;
            Ok((da.ln - db.ln).to_f64())
        }
    }
}

/// Runs the `t`-integral and the brute-force oracle.
pub fn relative_logdet_report(job: &RelDetJob) -> Result<RelDetReport> {
    let rhs = relative_logdet(job)?;
    let lhs = brute_force_logdet(&job.w1, &job.w2, job.n)?;
    let abs_err = (lhs - rhs).abs();
    Ok(RelDetReport {
        n: job.n,
        lhs,
        rhs,
        abs_err,
        rel_err: abs_err / lhs.abs().max(1e-300),
        nodes: job.t_nodes,
    })
}

/// Predicted `ln Δ_n(e^{-V})`: `-(n+1) V̂₀ + Σ_{k≥1} k |V̂_k|²`, from
/// `V̂_0, V̂_1, …`.
///
/// The constant term carries a minus sign: for `V ≡ c`, `Δ_n = e^{-(n+1)c}`.
pub fn szego_limit_prediction(vhat: &[Complex64], n: usize) -> f64 {
    let v0 = vhat.first().map(|v| v.re).unwrap_or(0.0);
    let tail: f64 = vhat.iter().enumerate().skip(1).map(|(k, v)| k as f64 * v.norm_sqr()).sum();
    -(n as f64 + 1.0) * v0 + tail
}

/// Fourier coefficients `V̂_0..V̂_K` of `V = -log ω` on the circle.
pub fn potential_coefficients(weight: &WeightSpec, count: usize) -> Result<Vec<Complex64>> {
    let m = (8 * count).max(1024).next_power_of_two();
    let vals: Vec<f64> = quad::circle_grid(m)
        .iter()
        .map(|t| {
            let w = weight.eval(*t);
            if w > 0.0 {
                Ok(-w.ln())
            } else {
                Err(Error::DegenerateMeasure(format!("{weight} vanishes at θ = {t}")))
            }
        })
        .collect::<Result<_>>()?;
    let c = measures::fft_coefficients(&vals);
    Ok(c.into_iter().take(count + 1).collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SzegoRow {
    pub n: usize,
    pub ln_delta: f64,
    pub prediction: f64,
    /// `ln Δ_n - prediction`
    pub error: f64,
}

/// Measured `ln Δ_n` against the strong Szegő prediction.
///
/// For `e^{s cos θ}` the Toeplitz minors are computed exactly from Bessel
/// moments rounded to `digits` places, and the error is formed as
/// `ln(1 + (Δ_n e^{-s²/4} - 1))` in rational arithmetic, so it stays
/// resolved long after it drops below double-precision epsilon. Other
/// weights use double-double determinants.
pub fn szego_table(weight: &WeightSpec, ns: &[usize], digits: u32) -> Result<Vec<SzegoRow>> {
    if weight.contour != Contour::Circle {
        return Err(Error::InvalidInput("the strong Szegő limit is a circle statement".into()));
    }
    let top = ns.iter().cloned().max().unwrap_or(0);
    if let (Some(s), Some(m)) = (expcos_parameter(weight), measures::circle_moments_exact(weight, top, digits)) {
        let q: Vec<BigRational> = m.exact.unwrap().into_iter().map(|(r, _)| r).collect();
        let mat: Vec<Vec<BigRational>> = (0..=top)
            .map(|i| (0..=top).map(|j| q[(i as i64 - j as i64).unsigned_abs() as usize].clone()).collect())
            .collect();
        let minors = exact::rational_leading_minors(&mat)
            .map_err(|j| Error::DegenerateMeasure(format!("Toeplitz minor {j} vanishes")))?;
        let sq = exact::rational(s) * exact::rational(s) / BigRational::from_integer(BigInt::from(4));
        let damp = exact::exp_rational(&(-sq.clone()), digits);
        let limit = sq.to_f64().unwrap();
        return Ok(ns
            .iter()
            .map(|&n| {
                let d = &minors[n];
                let rel = d * &damp - BigRational::one();
                SzegoRow {
                    n,
                    ln_delta: exact::ln_rational(d).to_f64(),
                    prediction: limit,
                    error: rel.to_f64().unwrap().ln_1p(),
                }
            })
            .collect());
    }
    let vhat = potential_coefficients(weight, 256)?;
    let m = measures::circle_moments(weight, top)?;
    let dets = opcircle::toeplitz_dets(&m, top, Precision::Extended)?;
    Ok(ns
        .iter()
        .map(|&n| {
            let p = szego_limit_prediction(&vhat, n);
            let l = dets[n].ln.to_f64();
            SzegoRow {
                n,
                ln_delta: l,
                prediction: p,
                error: l - p,
            }
        })
        .collect())
}

fn expcos_parameter(weight: &WeightSpec) -> Option<f64> {
    use crate::measures::{Builtin, WeightKind};
    match (&weight.kind, weight.scale()) {
        (WeightKind::Builtin(Builtin::ExpCos { s }), sc) if sc == 1.0 => Some(*s),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelLimitRow {
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
    /// `√(2(n+1))/π ∫ log ω₁`
    pub leading: f64,
}

/// `ln D_n(ω₁ω₂)/D_n(ω₂)` for `ω₂ = e^{-x²}` against
/// `√(2(n+1))/π ∫ log ω₁ dx + (1/4π) ∫ |k| |f̂(k)|² dk`,
/// `f̂(k) = (2π)^{-1/2} ∫ log ω₁(x) e^{-ikx} dx`.
pub fn hankel_strong_limit_check(w1: &WeightSpec, ns: &[usize]) -> Result<Vec<HankelLimitRow>> {
    if w1.contour != Contour::Line {
        return Err(Error::InvalidInput("the Hankel analog is a line statement".into()));
    }
    let logw = |x: f64| w1.eval(x).ln();
    let (a, b) = log_support(&logw)?;
    let int_log = quad::adaptive_gl(logw, a, b, 1e-14);
    let fhat2 = |k: f64| -> f64 {
        let c = quad::adaptive_gl(|x| logw(x) * (k * x).cos(), a, b, 1e-14);
        let s = quad::adaptive_gl(|x| logw(x) * (k * x).sin(), a, b, 1e-14);
        (c * c + s * s) / (2.0 * PI)
    };
    // |f̂|² is even in k; find where it is negligible.
    let f0 = fhat2(0.0).max(1e-300);
    let mut kmax = 4.0;
    while fhat2(kmax) > 1e-18 * f0 && kmax < 400.0 {
        kmax *= 1.5;
    }
    let second = 2.0 * quad::adaptive_gl(|k| k * fhat2(k), 0.0, kmax, 1e-12) / (4.0 * PI);
    let w2 = WeightSpec::gauss();
    ns.iter()
        .map(|&n| {
            let lhs = brute_force_logdet(w1, &w2, n)?;
            let leading = (2.0 * (n as f64 + 1.0)).sqrt() / PI * int_log;
            let rhs = leading + second;
            Ok(HankelLimitRow {
                n,
                lhs,
                rhs,
                diff: lhs - rhs,
                leading,
            })
        })
        .collect()
}

/// Interval outside which `|log ω₁|` is below `1e-18`.
fn log_support<F: Fn(f64) -> f64>(f: &F) -> Result<(f64, f64)> {
    let mut ends = [0.0f64; 2];
    for (slot, sign) in ends.iter_mut().zip([-1.0, 1.0]) {
        let mut x = 200.0;
        if f(sign * x).abs() > 1e-18 {
            return Err(Error::InsufficientDecay("log ω₁ does not tend to 0 fast enough".into()));
        }
        while x > 0.0 && f(sign * x).abs() <= 1e-18 {
            x -= 0.25;
        }
        *slot = sign * (x + 0.5);
    }
    Ok((ends[0], ends[1]))
}

/// Entrywise error of the finite-section inverse against a larger section.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub n: usize,
    pub reference_size: usize,
    /// `err[j][k] = |(T_n⁻¹)_{jk} - (T⁻¹)_{jk}|`, `0 ≤ j, k ≤ n`
    pub err: Vec<Vec<f64>>,
    pub max_at: (usize, usize),
    pub max_err: f64,
    /// Fitted `r` in `max_{max(j,k) = n+1-d} err ≈ C e^{-r d}`.
    pub rate: f64,
    /// `max |err_{jk} - err_{kj}|`
    pub asymmetry: f64,
}

/// Compares `(T_n(ω))⁻¹` with the top-left block of the inverse of a section
/// of size `max(4(n+1), n + 64)`.
pub fn toeplitz_inverse_decay(weight: &WeightSpec, n: usize) -> Result<DecayReport> {
    let big = (4 * (n + 1)).max(n + 64);
    let m = measures::circle_moments(weight, big)?;
    let section = |size: usize| -> Result<DMatrix<Complex64>> {
        let t = DMatrix::from_fn(size, size, |j, k| m.mu_c64(j as i64 - k as i64));
        t.try_inverse()
            .ok_or_else(|| Error::DegenerateMeasure(format!("Toeplitz section of size {size} is singular")))
    };
    let small = section(n + 1)?;
    let reference = section(big)?;
    let err: Vec<Vec<f64>> = (0..=n)
        .map(|j| (0..=n).map(|k| (small[(j, k)] - reference[(j, k)]).norm()).collect())
        .collect();
    let mut max_at = (0, 0);
    let mut max_err = -1.0;
    let mut asymmetry: f64 = 0.0;
    for j in 0..=n {
        for k in 0..=n {
            if err[j][k] > max_err {
                max_err = err[j][k];
                max_at = (j, k);
            }
            asymmetry = asymmetry.max((err[j][k] - err[k][j]).abs());
        }
    }
    // Least-squares fit of ln(max error on the L-shell max(j, k) = n + 1 - d).
    let floor = 1e-14 * max_err.max(1e-300);
    let pts: Vec<(f64, f64)> = (1..=n + 1)
        .filter_map(|d| {
            let idx = n + 1 - d;
            let e = (0..=idx).map(|j| err[idx][j].max(err[j][idx])).fold(0.0, f64::max);
            (e > floor && e > 1e-15).then(|| (d as f64, e.ln()))
        })
        .collect();
    let rate = if pts.len() >= 2 {
        let np = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / np;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / np;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        -sxy / sxx
    } else {
        0.0
    };
    Ok(DecayReport {
        n,
        reference_size: big,
        err,
        max_at,
        max_err: max_err.max(0.0),
        rate,
        asymmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lebesgue_one_point_is_constant() {
        let r = one_point_fn(&WeightSpec::lebesgue(), 2, None).unwrap();
        assert!(r.values.iter().all(|v| (v - 3.0).abs() < 1e-13));
        assert!((r.integral - 3.0).abs() < 1e-13);
        assert!(!r.flagged);
    }

    #[test]
    fn one_point_functions_match_christoffel_darboux() {
        for w in [WeightSpec::gauss(), WeightSpec::quartic(1.0, 0.0)] {
            for n in [1usize, 5, 10] {
                let r = one_point_fn(&w, n, None).unwrap();
                assert!(r.cd_residual < 1e-8 && (r.integral - (n + 1) as f64).abs() < 1e-8, "{w} n={n}: {r:?}");
                assert!(r.values.iter().all(|v| *v >= -1e-14));
            }
        }
        for w in [WeightSpec::one_plus_cos(), WeightSpec::exp_cos(1.0), WeightSpec::cos(-0.8)] {
            for n in [0usize, 3, 10] {
                let r = one_point_fn(&w, n, None).unwrap();
                assert!(!r.flagged, "{w} n={n}: {} {}", r.cd_residual, r.integral);
            }
        }
    }

    #[test]
    fn trivial_relative_determinant() {
        let job = RelDetJob::new(WeightSpec::lebesgue(), WeightSpec::exp_cos(0.5), 4).unwrap().with_nodes(6);
        assert!(relative_logdet(&job).unwrap().abs() < 1e-15);
        let line = RelDetJob::new(WeightSpec::gauss_bump(0.0), WeightSpec::gauss(), 3).unwrap().with_nodes(6);
        assert!(relative_logdet(&line).unwrap().abs() < 1e-15);
    }

    #[test]
    fn small_relative_determinants_match_brute_force() {
        let c = RelDetJob::new(WeightSpec::one_plus_cos(), WeightSpec::lebesgue(), 3).unwrap();
        let r = relative_logdet_report(&c).unwrap();
        assert!(r.abs_err < 1e-10, "{r:?}");
        let l = RelDetJob::new(WeightSpec::gauss_bump(0.5), WeightSpec::gauss(), 2).unwrap();
        let r = relative_logdet_report(&l).unwrap();
        assert!(r.abs_err < 1e-10, "{r:?}");
    }

    #[test]
    fn szego_prediction_examples() {
        assert_eq!(szego_limit_prediction(&[Complex64::new(0.0, 0.0)], 7), 0.0);
        let v = [Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0)];
        assert_eq!(szego_limit_prediction(&v, 3), 0.25);
        // V ≡ c: Δ_n = e^{-(n+1)c}
        let c = 0.3;
        assert!((szego_limit_prediction(&[Complex64::new(c, 0.0)], 4) + 5.0 * c).abs() < 1e-15);
        let v = potential_coefficients(&WeightSpec::exp_cos(1.0), 8).unwrap();
        assert!(v[0].norm() < 1e-15 && (v[1].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn szego_exact_errors_decrease() {
        let rows = szego_table(&WeightSpec::exp_cos(0.5), &[5, 10, 15], 120).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].error.abs() < w[0].error.abs());
        }
        assert!(rows[2].error.abs() < 1e-20);
        // generic path on the same weight, through its potential
        let gen = szego_table(&WeightSpec::homotopy(1.0, WeightSpec::exp_cos(0.5)), &[10], 0).unwrap();
        assert!((gen[0].ln_delta - rows[1].ln_delta).abs() < 1e-13);
    }

    #[test]
    fn decay_of_identity_symbol_is_zero() {
        let r = toeplitz_inverse_decay(&WeightSpec::lebesgue(), 6).unwrap();
        assert_eq!(r.max_err, 0.0);
        let r = toeplitz_inverse_decay(&WeightSpec::cos(-0.8), 16).unwrap();
        assert!(r.max_at.0 >= 14 && r.max_at.1 >= 14, "{:?}", r.max_at);
        assert!(r.rate > 0.0);
        assert!(r.asymmetry < 1e-12);
    }

    #[test]
    fn hankel_limit_for_trivial_perturbation() {
        let rows = hankel_strong_limit_check(&WeightSpec::gauss_bump(0.0), &[4, 8]).unwrap();
        for r in rows {
            assert!(r.lhs.abs() < 1e-14 && r.rhs.abs() < 1e-14);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn decay_error_matrix_is_symmetric(c in -0.9f64..0.9, n in 4usize..14) {
            let r = toeplitz_inverse_decay(&WeightSpec::cos(c), n).unwrap();
            prop_assert!(r.asymmetry <= 1e-12);
        }

        #[test]
        fn one_point_is_nonnegative_on_random_circle_weights(c in -0.95f64..0.95, n in 0usize..8) {
            let r = one_point_fn(&WeightSpec::cos(c), n, None).unwrap();
            prop_assert!(r.values.iter().all(|v| *v >= -1e-12));
            prop_assert!((r.integral - (n + 1) as f64).abs() <= 1e-8);
        }
    }
}
