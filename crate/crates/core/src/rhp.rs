//! The 2×2 Riemann–Hilbert problems of orthogonal polynomials.
//!
//! On the line, `X^{(n)}` has jump `[[1, w],[0, 1]]` on `ℝ` (left to right)
//! and `X z^{-nσ₃} → I`. On the circle, `Y^{(n)}` has jump
//! `[[1, ω z^{-n}],[0, 1]]` on `|z| = 1` (counterclockwise, `+` side inside)
//! and `Y diag(z^{-n}, z^n) → I`. Both are assembled from the monic
//! polynomials and their Cauchy transforms; the circle problem is also solved
//! directly as a singular integral equation over Fourier modes.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::measures::{self, Contour, MomentData, WeightKind, WeightSpec};
use crate::numeric::poly;
use crate::numeric::quad;
use crate::opcircle;
use crate::opline::{self, RecurrenceLine};
use crate::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Off-contour evaluation closer than this to the real line is refused.
pub const LINE_BOUNDARY_GAP: f64 = 0.05;
/// Distance of the shifted contours used for line boundary values.
pub const LINE_SHIFT: f64 = 0.5;
/// Trapezoid step on the shifted contours.
pub const LINE_SHIFT_STEP: f64 = 0.02;

pub fn identity() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut c = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

pub fn mat_det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Max-entry distance.
pub fn mat_dist(a: &Mat2, b: &Mat2) -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

pub fn mat_norm(a: &Mat2) -> f64 {
    mat_dist(a, &[[ZERO; 2]; 2])
}

fn mat_json(a: &Mat2) -> [[[f64; 2]; 2]; 2] {
    let mut out = [[[0.0; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = [a[i][j].re, a[i][j].im];
        }
    }
    out
}

/// Finite Laurent series `Σ_{k=lo}^{lo+len-1} c_k z^k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Laurent {
    pub lo: i64,
    pub c: Vec<Complex64>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent { lo: 0, c: vec![] }
    }

    pub fn monomial(k: i64, v: Complex64) -> Self {
        Laurent { lo: k, c: vec![v] }
    }

    pub fn from_poly(c: &[Complex64]) -> Self {
        Laurent { lo: 0, c: c.to_vec() }
    }

    /// Highest mode plus one.
    pub fn hi(&self) -> i64 {
        self.lo + self.c.len() as i64
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.lo || k >= self.hi() {
            ZERO
        } else {
            self.c[(k - self.lo) as usize]
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        if self.c.is_empty() {
            return ZERO;
        }
        // Horner in z, then the z^lo factor.
        let mut acc = ZERO;
        for c in self.c.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.lo as i32)
    }

    pub fn add(&self, o: &Laurent) -> Laurent {
        if self.c.is_empty() {
            return o.clone();
        }
        if o.c.is_empty() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        Laurent {
            lo,
            c: (lo..hi).map(|k| self.coeff(k) + o.coeff(k)).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Laurent {
        Laurent {
            lo: self.lo,
            c: self.c.iter().map(|c| c * s).collect(),
        }
    }

    pub fn shift(&self, k: i64) -> Laurent {
        Laurent {
            lo: self.lo + k,
            c: self.c.clone(),
        }
    }

    pub fn mul(&self, o: &Laurent) -> Laurent {
        if self.c.is_empty() || o.c.is_empty() {
            return Laurent::zero();
        }
        let mut c = vec![ZERO; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == ZERO {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Laurent { lo: self.lo + o.lo, c }
    }

    /// Modes in `[lo, hi)` only.
    pub fn window(&self, lo: i64, hi: i64) -> Laurent {
        let lo = lo.max(self.lo);
        let hi = hi.min(self.hi());
        if hi <= lo {
            return Laurent::zero();
        }
        Laurent {
            lo,
            c: (lo..hi).map(|k| self.coeff(k)).collect(),
        }
    }
}

/// Boundary side: `+` is the left of the oriented contour (above the line,
/// inside the circle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

/// Boundary values of the circle Cauchy operator: `C₊` keeps the modes
/// `k ≥ 0`, `C₋` keeps `-h_k` for `k < 0`.
pub fn cauchy_boundary(h: &Laurent, side: Side) -> Laurent {
    match side {
        Side::Plus => h.window(0, i64::MAX),
        Side::Minus => h.window(i64::MIN, 0).scale(-ONE),
    }
}

/// A density for the Cauchy operator `(1/2πi) ∫ h(s)/(s - z) ds`.
pub enum Density<'a> {
    /// Fourier (Laurent) coefficients on the unit circle.
    Circle(&'a Laurent),
    /// Values on the uniform grid `θ_j = 2πj/m`.
    CircleSamples(&'a [Complex64]),
    /// A function on the real line, negligible outside `support`.
    Line {
        f: &'a dyn Fn(f64) -> Complex64,
        support: (f64, f64),
    },
}

/// Off-contour Cauchy transform.
pub fn cauchy_eval(h: &Density, z: Complex64) -> Result<Complex64> {
    match h {
        Density::Circle(l) => {
            let r = z.norm();
            if (r - 1.0).abs() < 1e-12 {
                return Err(Error::UseBoundaryMode(format!("|z| = {r} lies on the circle")));
            }
            let side = if r < 1.0 { Side::Plus } else { Side::Minus };
            Ok(cauchy_boundary(l, side).eval(z))
        }
        Density::CircleSamples(v) => {
            let r = z.norm();
            // Aliasing of the sampled modes decays like r^{±m/2}.
            let m = v.len() as f64;
            if (r - 1.0).abs() < 64.0 / m {
                return Err(Error::UseBoundaryMode(format!(
                    "|z| = {r} is within {} of the circle for {m} samples",
                    64.0 / m
                )));
            }
            let l = samples_to_laurent(v);
            cauchy_eval(&Density::Circle(&l), z)
        }
        Density::Line { f, support } => {
            if z.im.abs() < LINE_BOUNDARY_GAP {
                return Err(Error::UseBoundaryMode(format!(
                    "Im z = {} is within {LINE_BOUNDARY_GAP} of the real line",
                    z.im
                )));
            }
            let g = |s: f64| f(s) / (s - z);
            let (a, b) = *support;
            let re = quad::adaptive_gl(|s| g(s).re, a, b, 1e-14);
            let im = quad::adaptive_gl(|s| g(s).im, a, b, 1e-14);
            Ok(Complex64::new(re, im) / (2.0 * PI * I))
        }
    }
}

fn samples_to_laurent(v: &[Complex64]) -> Laurent {
    use rustfft::FftPlanner;
    let m = v.len();
    let mut buf = v.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let lo = -((m as i64 - 1) / 2);
    let c = (lo..lo + m as i64)
        .map(|k| buf[k.rem_euclid(m as i64) as usize] / m as f64)
        .collect();
    Laurent { lo, c }
}

/// The jump data of the orthogonal-polynomial RHP for a weight.
#[derive(Clone, Debug)]
pub struct RhProblem {
    pub contour: Contour,
    pub n: usize,
    pub weight: WeightSpec,
}

impl RhProblem {
    pub fn new(weight: &WeightSpec, n: usize) -> Self {
        RhProblem {
            contour: weight.contour,
            n,
            weight: weight.clone(),
        }
    }

    /// Jump matrix at a contour point (`z` real on the line, `|z| = 1` on the
    /// circle).
    pub fn jump(&self, z: Complex64) -> Mat2 {
        let corner = match self.contour {
            Contour::Line => Complex64::new(self.weight.eval(z.re), 0.0),
            Contour::Circle => self.weight.eval(z.arg()) * z.powi(-(self.n as i32)),
        };
        [[ONE, corner], [ZERO, ONE]]
    }
}

/// Evaluated solution of an [`RhProblem`].
pub trait RhSolution {
    fn problem(&self) -> &RhProblem;
    /// `m(z)` off the contour.
    fn eval(&self, z: Complex64) -> Result<Mat2>;
    /// Boundary value on the given side at a contour point.
    fn boundary(&self, z: Complex64, side: Side) -> Result<Mat2>;
}

/// Jump and normalization diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JumpCheck {
    /// `max ‖m₊ - m₋ v‖ / max(1, ‖m₊‖)` over the test points
    pub jump_residual: f64,
    /// `‖m(z) z^{-nσ₃} - I‖` at a far point (`|z| = 10³`)
    pub normalization: f64,
    pub far_point: [f64; 2],
}

pub fn verify_jump(sol: &dyn RhSolution, points: &[Complex64]) -> Result<JumpCheck> {
    let p = sol.problem();
    let mut r: f64 = 0.0;
    for &z in points {
        let plus = sol.boundary(z, Side::Plus)?;
        let minus = sol.boundary(z, Side::Minus)?;
        let pred = mat_mul(&minus, &p.jump(z));
        r = r.max(mat_dist(&plus, &pred) / mat_norm(&plus).max(1.0));
    }
    let far = Complex64::new(0.0, 1e3);
    let m = sol.eval(far)?;
    let zn = far.powi(p.n as i32);
    let normed = [[m[0][0] / zn, m[0][1] * zn], [m[1][0] / zn, m[1][1] * zn]];
    Ok(JumpCheck {
        jump_residual: r,
        normalization: mat_dist(&normed, &identity()),
        far_point: [far.re, far.im],
    })
}

/// `max |det m(z) - 1|` over off-contour points and both boundary values at
/// contour points.
pub fn det_residual(sol: &dyn RhSolution, off: &[Complex64], on: &[Complex64]) -> Result<f64> {
    let mut r: f64 = 0.0;
    for &z in off {
        r = r.max((mat_det(&sol.eval(z)?) - 1.0).norm());
    }
    for &z in on {
        for side in [Side::Plus, Side::Minus] {
            r = r.max((mat_det(&sol.boundary(z, side)?) - 1.0).norm());
        }
    }
    Ok(r)
}

/// Default contour test points: midpoints of a uniform angular grid on the
/// circle; on the line, a uniform grid over the bulk of the weight.
pub fn contour_points(weight: &WeightSpec, count: usize) -> Result<Vec<Complex64>> {
    match weight.contour {
        Contour::Circle => Ok((0..count)
            .map(|j| Complex64::from_polar(1.0, 2.0 * PI * (j as f64 + 0.5) / count as f64))
            .collect()),
        Contour::Line => {
            let (a, b) = bulk(weight)?;
            Ok((0..count)
                .map(|j| Complex64::new(a + (b - a) * (j as f64 + 0.5) / count as f64, 0.0))
                .collect())
        }
    }
}

/// Default off-contour test points.
pub fn off_contour_points(weight: &WeightSpec, count: usize) -> Result<Vec<Complex64>> {
    match weight.contour {
        Contour::Circle => Ok((0..count)
            .map(|j| {
                let r = [0.0, 0.3, 0.6, 1.5, 2.5][j % 5];
                Complex64::from_polar(r, 0.7 + 2.0 * PI * j as f64 / count as f64)
            })
            .collect()),
        Contour::Line => {
            let (a, b) = bulk(weight)?;
            let c = 0.5 * (a + b);
            let h = 0.5 * (b - a);
            Ok((0..count)
                .map(|j| {
                    let x = c + h * (2.0 * (j as f64 + 0.5) / count as f64 - 1.0);
                    let y = [0.5, -0.5, 1.0, -1.5][j % 4];
                    Complex64::new(x, y)
                })
                .collect())
        }
    }
}

/// Interval where the weight is within `e^{-6}` of its maximum.
fn bulk(weight: &WeightSpec) -> Result<(f64, f64)> {
    let (a, b) = measures::line_support(weight, 0)?;
    let xs: Vec<f64> = (0..=2000).map(|j| a + (b - a) * j as f64 / 2000.0).collect();
    let peak = xs.iter().map(|x| weight.eval(*x)).fold(0.0, f64::max);
    let inside: Vec<f64> = xs.into_iter().filter(|x| weight.eval(*x) >= peak * (-6.0f64).exp()).collect();
    Ok((inside[0], *inside.last().unwrap()))
}

// ---------------------------------------------------------------------------
// Line

/// `X^{(n)}` assembled from the recurrence of a line weight.
#[derive(Clone, Debug)]
pub struct LineAssembly {
    problem: RhProblem,
    rec: RecurrenceLine,
    support: (f64, f64),
    /// `X₁^{(n)}`
    pub residue: Mat2,
}

/// Builds `X^{(n)} = [[P_n, C(P_n w)], [-2πi k²_{n-1} P_{n-1}, -2πi k²_{n-1} C(P_{n-1} w)]]`
/// and its residue matrix `X₁` (`X z^{-nσ₃} = I + X₁/z + O(z⁻²)`).
pub fn assemble_x(weight: &WeightSpec, n: usize) -> Result<LineAssembly> {
    let rec = opline::recurrence_from_measure(weight, n + 2)?;
    assemble_x_with(weight, n, rec)
}

/// As [`assemble_x`] with a precomputed recurrence of length at least `n + 1`.
pub fn assemble_x_with(weight: &WeightSpec, n: usize, rec: RecurrenceLine) -> Result<LineAssembly> {
    if weight.contour != Contour::Line {
        return Err(Error::InvalidInput(format!("X^(n) needs a line weight, got {weight}")));
    }
    if rec.len() < n + 1 {
        return Err(Error::InvalidInput(format!("X^({n}) needs {} recurrence coefficients", n + 1)));
    }
    let support = measures::line_support(weight, 2 * n + 2)?;
    let monic = rec.monic_coeffs(n)?;
    let k2n = rec.k[n] * rec.k[n];
    let mut x1 = [[ZERO; 2]; 2];
    x1[0][0] = Complex64::new(if n > 0 { monic[n][n - 1] } else { 0.0 }, 0.0);
    x1[0][1] = -1.0 / (2.0 * PI * I * k2n);
    if n > 0 {
        let k2 = rec.k[n - 1] * rec.k[n - 1];
        x1[1][0] = -2.0 * PI * I * k2;
        // k²_{n-1} ∫ s^n P_{n-1}(s) w(s) ds by quadrature
        let (xs, ws) = measures::discretize_line(weight, n + 1)?;
        let m: f64 = xs
            .iter()
            .zip(&ws)
            .map(|(x, w)| w * x.powi(n as i32) * poly_real(&monic[n - 1], *x))
            .sum();
        x1[1][1] = Complex64::new(k2 * m, 0.0);
    }
    Ok(LineAssembly {
        problem: RhProblem::new(weight, n),
        rec,
        support,
        residue: x1,
    })
}

fn poly_real(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, ci| acc * x + ci)
}

/// Monic `(P_n(z), P_{n-1}(z))` by the three-term recurrence.
fn monic_pair(rec: &RecurrenceLine, n: usize, z: Complex64) -> (Complex64, Complex64) {
    let (mut pm, mut p) = (ZERO, ONE);
    for j in 0..n {
        let b2 = if j > 0 { rec.b[j - 1] * rec.b[j - 1] } else { 0.0 };
        let next = (z - rec.a[j]) * p - b2 * pm;
        pm = p;
        p = next;
    }
    (p, pm)
}

impl LineAssembly {
    pub fn n(&self) -> usize {
        self.problem.n
    }

    pub fn recurrence(&self) -> &RecurrenceLine {
        &self.rec
    }

    fn k2_prev(&self) -> f64 {
        let n = self.n();
        if n == 0 {
            0.0
        } else {
            self.rec.k[n - 1] * self.rec.k[n - 1]
        }
    }

    fn compose(&self, z: Complex64, cn: Complex64, cm: Complex64) -> Mat2 {
        let (pn, pm) = monic_pair(&self.rec, self.n(), z);
        let c = -2.0 * PI * I * self.k2_prev();
        if self.n() == 0 {
            return [[ONE, cn], [ZERO, ONE]];
        }
        [[pn, cn], [c * pm, c * cm]]
    }

    /// Density `P_j(s) w(s)` for `j ∈ {n, n-1}`.
    fn density(&self, which: usize) -> impl Fn(Complex64) -> Option<Complex64> + '_ {
        move |s: Complex64| {
            let (pn, pm) = monic_pair(&self.rec, self.n(), s);
            let p = if which == 0 { pn } else { pm };
            let w = if s.im == 0.0 {
                Complex64::new(self.problem.weight.eval(s.re), 0.0)
            } else {
                self.problem.weight.eval_complex(s)?
            };
            Some(p * w)
        }
    }

    /// `C±(P_j w)(x)`.
    fn boundary_transform(&self, which: usize, x: f64, side: Side) -> Result<Complex64> {
        let f = self.density(which);
        let (a, b) = self.support;
        if self.problem.weight.is_analytic() {
            // Shift the contour away from x; the + value sees the contour
            // below the point, the - value above it.
            let d = match side {
                Side::Plus => -LINE_SHIFT,
                Side::Minus => LINE_SHIFT,
            };
            let (lo, hi) = (a - 1.0, b + 1.0);
            let m = ((hi - lo) / LINE_SHIFT_STEP).ceil() as usize;
            let h = (hi - lo) / m as f64;
            let mut acc = ZERO;
            for j in 0..=m {
                let s = Complex64::new(lo + h * j as f64, d);
                let v = f(s).ok_or_else(|| Error::InvalidInput("weight has no analytic continuation".into()))?;
                let wgt = if j == 0 || j == m { 0.5 } else { 1.0 };
                acc += wgt * v / (s - x);
            }
            Ok(acc * h / (2.0 * PI * I))
        } else {
            // Plemelj: C± = ±f/2 + (1/2πi) PV ∫ f(s)/(s - x) ds, with the
            // principal value taken by subtracting f(x).
            let fx = f(Complex64::new(x, 0.0)).unwrap();
            let breaks = line_breaks(&self.problem.weight, a, b, x);
            let (gx, gw) = quad::gauss_legendre(12);
            let mut acc = ZERO;
            for p in breaks.windows(2) {
                let (lo, hi) = (p[0], p[1]);
                let hh = 0.5 * (hi - lo);
                let c = 0.5 * (hi + lo);
                for (t, wt) in gx.iter().zip(&gw) {
                    let s = c + hh * t;
                    let v = f(Complex64::new(s, 0.0)).unwrap();
                    acc += wt * hh * (v - fx) / (s - x);
                }
            }
            if x > a && x < b {
                acc += fx * ((b - x) / (x - a)).ln();
            } else {
                acc += fx * ((b - x) / (a - x)).abs().ln();
            }
            let pv = acc / (2.0 * PI * I);
            let half = fx / 2.0;
            Ok(match side {
                Side::Plus => half + pv,
                Side::Minus => -half + pv,
            })
        }
    }
}

/// Panel breaks for the Plemelj quadrature: the sample grid of a sampled
/// weight (or a uniform grid) plus the singular point.
fn line_breaks(weight: &WeightSpec, a: f64, b: f64, x: f64) -> Vec<f64> {
    let mut br: Vec<f64> = match &weight.kind {
        WeightKind::Sampled(s) => s.grid.iter().cloned().filter(|g| *g >= a && *g <= b).collect(),
        _ => (0..=400).map(|j| a + (b - a) * j as f64 / 400.0).collect(),
    };
    br.push(a);
    br.push(b);
    if x > a && x < b {
        br.push(x);
    }
    br.sort_by(|p, q| p.total_cmp(q));
    br.dedup_by(|p, q| (*p - *q).abs() < 1e-12);
    br
}

impl RhSolution for LineAssembly {
    fn problem(&self) -> &RhProblem {
        &self.problem
    }

    fn eval(&self, z: Complex64) -> Result<Mat2> {
        let cauchy = |which: usize| -> Result<Complex64> {
            let d = self.density(which);
            let f = |s: f64| d(Complex64::new(s, 0.0)).unwrap();
            cauchy_eval(
                &Density::Line {
                    f: &f,
                    support: self.support,
                },
                z,
            )
        };
        let cn = cauchy(0)?;
        let cm = if self.n() > 0 { cauchy(1)? } else { ZERO };
        Ok(self.compose(z, cn, cm))
    }

    fn boundary(&self, z: Complex64, side: Side) -> Result<Mat2> {
        if z.im != 0.0 {
            return Err(Error::InvalidInput(format!("{z} is not on the real line")));
        }
        let cn = self.boundary_transform(0, z.re, side)?;
        let cm = if self.n() > 0 {
            self.boundary_transform(1, z.re, side)?
        } else {
            ZERO
        };
        Ok(self.compose(z, cn, cm))
    }
}

/// Recurrence coefficients read off consecutive residues:
/// `a_n = (X₁^{(n)})₁₁ - (X₁^{(n+1)})₁₁` and
/// `b²_{n-1} = (X₁^{(n)})₁₂ (X₁^{(n)})₂₁`.
///
/// The mixed-index product `(X₁^{(n)})₁₂ (X₁^{(n+1)})₂₁` equals `k²_n/k²_n = 1`
/// identically, so the same-index product is used.
pub fn extract_line(x_n: &Mat2, x_next: &Mat2) -> (f64, f64) {
    let a = (x_n[0][0] - x_next[0][0]).re;
    let b2 = (x_n[0][1] * x_n[1][0]).re;
    (a, b2)
}

/// Residual of `X^{(n+1)} = (zE₁₁ + X₁^{(n+1)}E₁₁ - E₁₁X₁^{(n)}) X^{(n)}` at
/// off-contour points, relative to `max(1, ‖X^{(n+1)}‖)`.
pub fn transfer_identity_line(weight: &WeightSpec, n: usize, points: &[Complex64]) -> Result<f64> {
    let rec = opline::recurrence_from_measure(weight, n + 3)?;
    let x0 = assemble_x_with(weight, n, rec.clone())?;
    let x1 = assemble_x_with(weight, n + 1, rec)?;
    let r0 = x0.residue;
    let r1 = x1.residue;
    let mut worst: f64 = 0.0;
    for &z in points {
        let mut t = [[ZERO; 2]; 2];
        t[0][0] = z + r1[0][0] - r0[0][0];
        t[1][0] = r1[1][0];
        t[0][1] = -r0[0][1];
        let pred = mat_mul(&t, &x0.eval(z)?);
        let got = x1.eval(z)?;
        worst = worst.max(mat_dist(&got, &pred) / mat_norm(&got).max(1.0));
    }
    Ok(worst)
}

// ---------------------------------------------------------------------------
// Circle

/// A circle solution stored as one Laurent series per entry inside and one
/// outside the unit circle.
#[derive(Clone, Debug)]
pub struct CircleSeries {
    problem: RhProblem,
    inside: [[Laurent; 2]; 2],
    outside: [[Laurent; 2]; 2],
    /// Condition number of the linear system, for solver output.
    pub condition: Option<f64>,
}

impl CircleSeries {
    pub fn n(&self) -> usize {
        self.problem.n
    }

    /// `Y(0)`.
    pub fn value_at_zero(&self) -> Mat2 {
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.inside[i][j].coeff(0);
            }
        }
        m
    }

    /// `α_{n-1} = -conj(Y₁₁(0))` and `κ²_{n-1} = -Y₂₁(0)`.
    pub fn extract(&self) -> Result<(Complex64, f64)> {
        if self.n() == 0 {
            return Err(Error::InvalidInput("Y^(0) carries no Verblunsky coefficient".into()));
        }
        let y = self.value_at_zero();
        Ok((-y[0][0].conj(), -y[1][0].re))
    }

    fn series_eval(s: &[[Laurent; 2]; 2], z: Complex64) -> Mat2 {
        let mut m = [[ZERO; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = s[i][j].eval(z);
            }
        }
        m
    }
}

impl RhSolution for CircleSeries {
    fn problem(&self) -> &RhProblem {
        &self.problem
    }

    fn eval(&self, z: Complex64) -> Result<Mat2> {
        let r = z.norm();
        if (r - 1.0).abs() < 1e-12 {
            return Err(Error::UseBoundaryMode(format!("|z| = {r} lies on the circle")));
        }
        Ok(Self::series_eval(if r < 1.0 { &self.inside } else { &self.outside }, z))
    }

    fn boundary(&self, z: Complex64, side: Side) -> Result<Mat2> {
        if (z.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!("{z} is not on the unit circle")));
        }
        Ok(Self::series_eval(
            match side {
                Side::Plus => &self.inside,
                Side::Minus => &self.outside,
            },
            z,
        ))
    }
}

/// Moments of a circle weight through an order where they are negligible,
/// as the Fourier series `ω(θ) = Σ μ̂_k e^{ikθ}`.
pub fn weight_series(weight: &WeightSpec, min_order: usize) -> Result<(MomentData, Laurent)> {
    let mut k = 32usize.max(min_order);
    loop {
        let m = measures::circle_moments(weight, k)?;
        let mu0 = m.re(0).abs();
        let tail = (k / 2..=k).map(|j| m.mu_c64(j as i64).norm()).fold(0.0, f64::max);
        if tail <= 1e-16 * mu0 || k >= 8192 {
            if tail > 1e-13 * mu0 {
                return Err(Error::GridUnderresolved(format!(
                    "Fourier coefficients of {weight} have not decayed by order {k}"
                )));
            }
            let kk = k as i64;
            let l = Laurent {
                lo: -kk,
                c: (-kk..=kk).map(|j| m.mu_c64(j)).collect(),
            };
            return Ok((m, l));
        }
        k *= 2;
    }
}

/// Builds `Y^{(n)} = [[Φ_n, C(Φ_n ω/s^n)], [-κ²_{n-1} Φ*_{n-1}, -κ²_{n-1} C(Φ*_{n-1} ω/s^n)]]`.
///
/// The Cauchy transforms are exact Fourier projections of the (decay-
/// truncated) Laurent series, so boundary values need no extrapolation.
pub fn assemble_y(weight: &WeightSpec, n: usize) -> Result<CircleSeries> {
    if weight.contour != Contour::Circle {
        return Err(Error::InvalidInput(format!("Y^(n) needs a circle weight, got {weight}")));
    }
    let (m, omega) = weight_series(weight, n + 1)?;
    let (v, polys) = opcircle::levinson_polys(&m, n)?;
    let phi: Vec<Complex64> = polys[n].iter().map(|c| c.to_c64()).collect();
    let problem = RhProblem::new(weight, n);
    let w_shift = omega.shift(-(n as i64));
    let g1 = Laurent::from_poly(&phi).mul(&w_shift);
    let p11 = Laurent::from_poly(&phi);
    let (p21, g2) = if n == 0 {
        (Laurent::zero(), Laurent::zero())
    } else {
        let k2 = v.kappa[n - 1] * v.kappa[n - 1];
        let prev: Vec<Complex64> = polys[n - 1].iter().map(|c| c.to_c64()).collect();
        let star = poly::reverse(&prev, n - 1);
        let s = Laurent::from_poly(&star).scale(Complex64::new(-k2, 0.0));
        let g = s.mul(&w_shift);
        (s, g)
    };
    let (p22_in, p22_out) = if n == 0 {
        (Laurent::monomial(0, ONE), Laurent::monomial(0, ONE))
    } else {
        (cauchy_boundary(&g2, Side::Plus), cauchy_boundary(&g2, Side::Minus))
    };
    Ok(CircleSeries {
        problem,
        inside: [
            [p11.clone(), cauchy_boundary(&g1, Side::Plus)],
            [p21.clone(), p22_in],
        ],
        outside: [[p11, cauchy_boundary(&g1, Side::Minus)], [p21, p22_out]],
        condition: None,
    })
}

/// Solves the circle problem as the singular integral equation
/// `(1 - C_w) μ = I` over Fourier modes.
///
/// With `m = Y` inside and `m = Y z^{-nσ₃}` outside, the problem is
/// normalized to `m → I` with jump `J = [[z^n, ω], [0, z^{-n}]]`, which stays
/// bounded and analytic in each region. Taking `w₊ = J - I`, `w₋ = 0`, the
/// unknown `μ = m₋ = I + ν` has `ν` in the modes `[-M, -1]`, and
/// `ν + P₋(ν w₊) = -P₋(w₊)` is solved in least squares over the test modes
/// `[-M-n, -1]`. Then `m = I + C(μ w₊)`.
pub fn solve_rhp_circle(weight: &WeightSpec, n: usize, modes: usize) -> Result<CircleSeries> {
    if weight.contour != Contour::Circle {
        return Err(Error::InvalidInput(format!("the circle solver needs a circle weight, got {weight}")));
    }
    if modes == 0 {
        return Err(Error::InvalidInput("mode cutoff must be positive".into()));
    }
    let (_, omega) = weight_series(weight, modes + n + 1)?;
    let ni = n as i64;
    let mm = modes as i64;
    let l = mm + ni;
    let rows = 2 * l as usize;
    let cols = 2 * modes;
    let col = |mode: i64| (-mode - 1) as usize;
    let row = |t: i64| (-t - 1) as usize;
    let mut a = DMatrix::<Complex64>::zeros(rows, cols);
    for m in -mm..=-1 {
        // component 1: P₋(ν₁ zⁿ)
        let t = m + ni;
        if t <= -1 {
            a[(row(t), col(m))] = ONE;
        }
        // component 2: P₋(ν₁ ω) + P₋(ν₂ z^{-n})
        for t in -l..=-1 {
            a[(l as usize + row(t), col(m))] += omega.coeff(t - m);
        }
        let t2 = m - ni;
        a[(l as usize + row(t2), modes + col(m))] += ONE;
    }
    let mut b = DMatrix::<Complex64>::zeros(rows, 2);
    for t in -l..=-1 {
        b[(l as usize + row(t), 0)] = -omega.coeff(t);
    }
    if n >= 1 {
        b[(l as usize + row(-ni), 1)] = -ONE;
    }
    let sv = SVD::new(a.clone(), false, false).singular_values;
    let cond = sv.max() / sv.min();
    if !(cond < 1e12) {
        return Err(Error::IllConditioned(format!(
            "mode system has condition number {cond:.3e}; increase M or precision"
        )));
    }
    let qr = a.qr();
    let x = qr
        .r()
        .solve_upper_triangular(&(qr.q().adjoint() * b))
        .ok_or_else(|| Error::IllConditioned("singular mode system; increase M or precision".into()))?;
    let unpack = |r: usize, off: usize| Laurent {
        lo: -mm,
        c: (-mm..=-1).map(|mode| x[(off + col(mode), r)]).collect(),
    };
    let zn_minus_one = Laurent::monomial(ni, ONE).add(&Laurent::monomial(0, -ONE));
    let zmn_minus_one = Laurent::monomial(-ni, ONE).add(&Laurent::monomial(0, -ONE));
    let mut inside: [[Laurent; 2]; 2] = Default::default();
    let mut outside: [[Laurent; 2]; 2] = Default::default();
    for r in 0..2 {
        let mut mu1 = unpack(r, 0);
        let mut mu2 = unpack(r, modes);
        if r == 0 {
            mu1 = mu1.add(&Laurent::monomial(0, ONE));
        } else {
            mu2 = mu2.add(&Laurent::monomial(0, ONE));
        }
        let g = [
            mu1.mul(&zn_minus_one),
            mu1.mul(&omega).add(&mu2.mul(&zmn_minus_one)),
        ];
        for c in 0..2 {
            let delta = Laurent::monomial(0, if r == c { ONE } else { ZERO });
            inside[r][c] = delta.add(&cauchy_boundary(&g[c], Side::Plus));
            let out = delta.add(&cauchy_boundary(&g[c], Side::Minus));
            outside[r][c] = out.shift(if c == 0 { ni } else { -ni });
        }
    }
    Ok(CircleSeries {
        problem: RhProblem::new(weight, n),
        inside,
        outside,
        condition: Some(cond),
    })
}

/// Residual of `Y^{(n+1)} diag(1, z) = [[z + â, b̂], [ĉ, 1]] Y^{(n)}` with
/// `â = conj(α_n) α_{n-1}`, `b̂ = conj(α_n)/κ_n²`, `ĉ = κ_n² α_{n-1}`
/// (`α_{-1} = -1`), relative to `max(1, ‖Y^{(n+1)}‖)`.
pub fn transfer_identity_circle(weight: &WeightSpec, n: usize, points: &[Complex64]) -> Result<f64> {
    let y0 = assemble_y(weight, n)?;
    let y1 = assemble_y(weight, n + 1)?;
    let (m, _) = weight_series(weight, n + 2)?;
    let v = opcircle::verblunsky_levinson(&m, n + 1)?;
    let an = v.alpha[n];
    let aprev = if n == 0 { -ONE } else { v.alpha[n - 1] };
    let k2 = v.kappa[n] * v.kappa[n];
    let mut worst: f64 = 0.0;
    for &z in points {
        let t = [[z + an.conj() * aprev, an.conj() / k2], [k2 * aprev, ONE]];
        let pred = mat_mul(&t, &y0.eval(z)?);
        let mut got = y1.eval(z)?;
        got[0][1] *= z;
        got[1][1] *= z;
        worst = worst.max(mat_dist(&got, &pred) / mat_norm(&got).max(1.0));
    }
    Ok(worst)
}

/// Serializable summary of a solved or assembled problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RhReport {
    pub contour: Contour,
    pub n: usize,
    pub alpha_or_residues: Extracted,
    pub jump_residual: f64,
    pub det_residual: f64,
    pub normalization: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub condition: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Extracted {
    /// Line: `X₁^{(n)}`, and `a_n`, `b²_{n-1}` from consecutive residues.
    Residues {
        x1: [[[f64; 2]; 2]; 2],
        a_n: f64,
        b_sq_prev: Option<f64>,
    },
    /// Circle: `Y(0)`, `α_{n-1}` and `κ²_{n-1}`.
    Values {
        y0: [[[f64; 2]; 2]; 2],
        alpha_prev: Option<[f64; 2]>,
        kappa_sq_prev: Option<f64>,
    },
}

/// Assembles (or solves, when `modes` is given on the circle) and verifies
/// the problem with 64 contour points and 16 off-contour points.
pub fn report(weight: &WeightSpec, n: usize, modes: Option<usize>) -> Result<RhReport> {
    let on = contour_points(weight, 64)?;
    let off = off_contour_points(weight, 16)?;
    match weight.contour {
        Contour::Line => {
            if modes.is_some() {
                return Err(Error::InvalidInput(
                    "the line problem is realized by assembly only; drop --modes".into(),
                ));
            }
            let rec = opline::recurrence_from_measure(weight, n + 2)?;
            let x = assemble_x_with(weight, n, rec.clone())?;
            let xn = assemble_x_with(weight, n + 1, rec)?;
            let (a_n, b2) = extract_line(&x.residue, &xn.residue);
            let j = verify_jump(&x, &on)?;
            Ok(RhReport {
                contour: Contour::Line,
                n,
                alpha_or_residues: Extracted::Residues {
                    x1: mat_json(&x.residue),
                    a_n,
                    b_sq_prev: (n > 0).then_some(b2),
                },
                jump_residual: j.jump_residual,
                det_residual: det_residual(&x, &off, &on)?,
                normalization: j.normalization,
                condition: None,
            })
        }
        Contour::Circle => {
            let y = match modes {
                Some(m) => solve_rhp_circle(weight, n, m)?,
                None => assemble_y(weight, n)?,
            };
            let j = verify_jump(&y, &on)?;
            let ex = y.extract().ok();
            Ok(RhReport {
                contour: Contour::Circle,
                n,
                alpha_or_residues: Extracted::Values {
                    y0: mat_json(&y.value_at_zero()),
                    alpha_prev: ex.map(|(a, _)| [a.re, a.im]),
                    kappa_sq_prev: ex.map(|(_, k)| k),
                },
                jump_residual: j.jump_residual,
                det_residual: det_residual(&y, &off, &on)?,
                normalization: j.normalization,
                condition: y.condition,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn circle_cauchy_of_monomials() {
        let z3 = Laurent::monomial(3, ONE);
        let zi = c(0.3, 0.2);
        let zo = c(1.5, -0.7);
        assert!((cauchy_eval(&Density::Circle(&z3), zi).unwrap() - zi.powi(3)).norm() < 1e-15);
        assert_eq!(cauchy_eval(&Density::Circle(&z3), zo).unwrap(), ZERO);
        let zm1 = Laurent::monomial(-1, ONE);
        assert!((cauchy_eval(&Density::Circle(&zm1), zo).unwrap() + 1.0 / zo).norm() < 1e-15);
        assert!(matches!(
            cauchy_eval(&Density::Circle(&z3), c(1.0, 0.0)),
            Err(Error::UseBoundaryMode(_))
        ));
        let z2 = Laurent::monomial(-2, ONE);
        assert_eq!(cauchy_boundary(&z3, Side::Plus), z3);
        assert!(cauchy_boundary(&z3, Side::Minus).c.is_empty());
        assert!(cauchy_boundary(&z2, Side::Plus).c.is_empty());
        assert_eq!(cauchy_boundary(&z2, Side::Minus), z2.scale(-ONE));
    }

    #[test]
    fn sampled_circle_cauchy_matches_coefficients() {
        let h = Laurent {
            lo: -2,
            c: vec![c(0.5, 0.1), ZERO, c(1.0, 0.0), c(0.0, -0.25)],
        };
        let m = 64;
        let samples: Vec<Complex64> = (0..m)
            .map(|j| h.eval(Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64)))
            .collect();
        for z in [c(0.0, 0.0), c(-2.5, 1.0)] {
            let a = cauchy_eval(&Density::CircleSamples(&samples), z).unwrap();
            let b = cauchy_eval(&Density::Circle(&h), z).unwrap();
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn line_cauchy_of_gaussian_at_i() {
        // C(e^{-x²}/√π)(i) = w(i)/(2√π) with w(i) = e·erfc(1)
        let f = |x: f64| Complex64::new((-x * x).exp() / PI.sqrt(), 0.0);
        let got = cauchy_eval(
            &Density::Line {
                f: &f,
                support: (-10.0, 10.0),
            },
            I,
        )
        .unwrap();
        let want = 0.427_583_576_155_807 / (2.0 * PI.sqrt());
        assert!((got - want).norm() < 1e-10, "{got}");
        assert!(matches!(
            cauchy_eval(&Density::Line { f: &f, support: (-10.0, 10.0) }, c(0.0, 0.01)),
            Err(Error::UseBoundaryMode(_))
        ));
    }

    #[test]
    fn gauss_first_assembly() {
        let x = assemble_x(&WeightSpec::gauss(), 1).unwrap();
        let z = c(0.4, 0.9);
        let m = x.eval(z).unwrap();
        assert!((m[0][0] - z).norm() < 1e-14);
        assert!((m[1][0] + 2.0 * PI * I).norm() < 1e-13);
        assert!((mat_det(&m) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn gauss_residues_reproduce_recurrence() {
        let w = WeightSpec::gauss();
        let rec = opline::recurrence_from_measure(&w, 6).unwrap();
        let x2 = assemble_x_with(&w, 2, rec.clone()).unwrap();
        let x3 = assemble_x_with(&w, 3, rec).unwrap();
        let (a2, b1sq) = extract_line(&x2.residue, &x3.residue);
        assert!(a2.abs() < 1e-13);
        assert!((b1sq - 1.0).abs() < 1e-13);
        let k1sq = (-x2.residue[1][0] / (2.0 * PI * I)).re;
        assert!((k1sq - 2.0).abs() < 1e-13);
        // trace zero: (X₁)₂₂ = -(X₁)₁₁
        assert!((x3.residue[0][0] + x3.residue[1][1]).norm() < 1e-12);
        // the printed mixed product is identically 1
        assert!(((x2.residue[0][1] * x3.residue[1][0]).re - 1.0).abs() < 1e-13);
    }

    #[test]
    fn gauss_jump_and_transfer() {
        let w = WeightSpec::gauss();
        let x = assemble_x(&w, 2).unwrap();
        let pts = contour_points(&w, 16).unwrap();
        let j = verify_jump(&x, &pts).unwrap();
        assert!(j.jump_residual < 1e-8, "{}", j.jump_residual);
        assert!(j.normalization < 0.1);
        let off = off_contour_points(&w, 8).unwrap();
        assert!(transfer_identity_line(&w, 1, &off).unwrap() < 1e-8);
        assert!(transfer_identity_line(&w, 0, &off).unwrap() < 1e-8);
    }

    #[test]
    fn lebesgue_assembly_is_exact() {
        let w = WeightSpec::lebesgue();
        for n in [1usize, 4] {
            let y = assemble_y(&w, n).unwrap();
            let (a, k2) = y.extract().unwrap();
            assert_eq!(a, ZERO);
            assert_eq!(k2, 1.0);
            let z = c(0.3, -0.5);
            assert!((y.eval(z).unwrap()[0][0] - z.powi(n as i32)).norm() < 1e-15);
            let j = verify_jump(&y, &contour_points(&w, 64).unwrap()).unwrap();
            assert!(j.jump_residual < 1e-12);
        }
    }

    #[test]
    fn one_plus_cos_extraction() {
        let w = WeightSpec::one_plus_cos();
        let y1 = assemble_y(&w, 1).unwrap();
        assert!((y1.extract().unwrap().0 - c(0.5, 0.0)).norm() < 1e-14);
        let y2 = assemble_y(&w, 2).unwrap();
        assert!((y2.extract().unwrap().1 - 4.0 / 3.0).abs() < 1e-14);
        let s = solve_rhp_circle(&w, 1, 32).unwrap();
        assert!((s.extract().unwrap().0 - c(0.5, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn solver_matches_assembly_for_expcos() {
        let w = WeightSpec::exp_cos(1.0);
        let m = measures::circle_moments(&w, 30).unwrap();
        let schur = opcircle::schur_geronimus(&m, 6).unwrap();
        let s = solve_rhp_circle(&w, 5, 64).unwrap();
        assert!((s.extract().unwrap().0 - schur.alpha[4]).norm() < 1e-8);
        let y = assemble_y(&w, 5).unwrap();
        for z in off_contour_points(&w, 16).unwrap() {
            let d = mat_dist(&s.eval(z).unwrap(), &y.eval(z).unwrap());
            assert!(d < 1e-8, "z={z}: {d}");
        }
        let on = contour_points(&w, 64).unwrap();
        assert!(verify_jump(&s, &on).unwrap().jump_residual < 1e-10);
        assert!(det_residual(&s, &off_contour_points(&w, 16).unwrap(), &on).unwrap() < 1e-10);
    }

    #[test]
    fn lebesgue_solver_is_closed_form() {
        let w = WeightSpec::lebesgue();
        for n in 1..=10 {
            let s = solve_rhp_circle(&w, n, 16).unwrap();
            let (a, k2) = s.extract().unwrap();
            assert!(a.norm() < 1e-12 && (k2 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circle_transfer_identity() {
        let w = WeightSpec::exp_cos(1.0);
        let pts = off_contour_points(&w, 10).unwrap();
        for n in 0..4 {
            assert!(transfer_identity_circle(&w, n, &pts).unwrap() < 1e-9);
        }
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = report(&WeightSpec::one_plus_cos(), 2, Some(32)).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        let back: RhReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn boundary_operators_split_every_mode(
            lo in -6i64..0,
            coeffs in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..12),
        ) {
            let h = Laurent { lo, c: coeffs.into_iter().map(|(a, b)| c(a, b)).collect() };
            let p = cauchy_boundary(&h, Side::Plus);
            let m = cauchy_boundary(&h, Side::Minus);
            let diff = p.add(&m.scale(-ONE));
            for k in lo..h.hi() {
                prop_assert_eq!(diff.coeff(k), h.coeff(k));
            }
            prop_assert!(cauchy_boundary(&p, Side::Minus).c.is_empty());
            prop_assert!(cauchy_boundary(&m, Side::Plus).c.is_empty());
        }
    }
}
