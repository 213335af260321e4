//! Weights on the line and the circle, their moments, and the Carathéodory
//! and Schur functions of circle measures.
//!
//! Circle moments follow `μ̂_k = ∫ e^{-ikθ} ω(θ) dθ/2π`, so the Toeplitz
//! entries are `T_{jk} = μ̂_{j-k}` and `F(z) = μ̂_0 + 2 Σ_{k≥1} μ̂_k z^k`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::numeric::exact;
use crate::numeric::quad;
use crate::numeric::{Cx, Dd, Precision};
use crate::{Error, Result};

/// Decimal digits carried by rational series moments.
pub const SERIES_DIGITS: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Contour {
    Line,
    Circle,
}

impl fmt::Display for Contour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Contour::Line => "line",
            Contour::Circle => "circle",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    Raw,
    Probability,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Builtin {
    /// `ω = 1` on the circle.
    Lebesgue,
    /// `ω = 1 + cos θ`.
    OnePlusCos,
    /// `ω = e^{s cos θ}`.
    ExpCos { s: f64 },
    /// `ω = 1 + c cos θ`, `|c| < 1`.
    Cos { c: f64 },
    /// `w = e^{-x²}/√π`.
    Gauss,
    /// `w = 1 + c e^{-x²}`; a multiplier, not integrable on its own.
    GaussBump { c: f64 },
    /// `w = e^{-(g x⁴ + d x²)}`.
    Quartic { g: f64, d: f64 },
}

/// Tabulated weight. On the line it is piecewise linear and zero outside
/// the grid; on the circle the grid is uniform and the weight is the
/// trigonometric interpolant of the samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Sampled {
    pub source: String,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    coeffs: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightKind {
    Builtin(Builtin),
    Sampled(Sampled),
    /// Pointwise product of two weights on the same contour.
    Product(Box<WeightSpec>, Box<WeightSpec>),
    /// `1 - t + t·target`.
    Homotopy { t: f64, target: Box<WeightSpec> },
    /// `e^{2xt}·base` on the line.
    Tilted { t: f64, base: Box<WeightSpec> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec {
    pub contour: Contour,
    pub kind: WeightKind,
    pub normalization: Normalization,
    /// Multiplier applied to the raw weight (`1/m_0` under probability
    /// normalization).
    scale: f64,
}

impl WeightSpec {
    pub fn builtin(b: Builtin) -> Self {
        let contour = match b {
            Builtin::Lebesgue | Builtin::OnePlusCos | Builtin::ExpCos { .. } | Builtin::Cos { .. } => {
                Contour::Circle
            }
            _ => Contour::Line,
        };
        WeightSpec {
            contour,
            kind: WeightKind::Builtin(b),
            normalization: Normalization::Raw,
            scale: 1.0,
        }
    }

    pub fn lebesgue() -> Self {
        Self::builtin(Builtin::Lebesgue)
    }
    pub fn one_plus_cos() -> Self {
        Self::builtin(Builtin::OnePlusCos)
    }
    pub fn exp_cos(s: f64) -> Self {
        Self::builtin(Builtin::ExpCos { s })
    }
    pub fn cos(c: f64) -> Self {
        Self::builtin(Builtin::Cos { c })
    }
    pub fn gauss() -> Self {
        Self::builtin(Builtin::Gauss)
    }
    pub fn gauss_bump(c: f64) -> Self {
        Self::builtin(Builtin::GaussBump { c })
    }
    pub fn quartic(g: f64, d: f64) -> Self {
        Self::builtin(Builtin::Quartic { g, d })
    }

    pub fn product(a: WeightSpec, b: WeightSpec) -> Result<Self> {
        if a.contour != b.contour {
            return Err(Error::InvalidInput(format!(
                "cannot multiply a {} weight by a {} weight",
                a.contour, b.contour
            )));
        }
        Ok(WeightSpec {
            contour: a.contour,
            kind: WeightKind::Product(Box::new(a), Box::new(b)),
            normalization: Normalization::Raw,
            scale: 1.0,
        })
    }

    /// The interpolating weight `1 - t + t·target`.
    pub fn homotopy(t: f64, target: WeightSpec) -> Self {
        WeightSpec {
            contour: target.contour,
            kind: WeightKind::Homotopy {
                t,
                target: Box::new(target),
            },
            normalization: Normalization::Raw,
            scale: 1.0,
        }
    }

    /// The reweighted line measure `e^{2xt} w(x)`.
    pub fn tilted(t: f64, base: WeightSpec) -> Result<Self> {
        if base.contour != Contour::Line {
            return Err(Error::InvalidInput("tilting applies to line weights".into()));
        }
        Ok(WeightSpec {
            contour: Contour::Line,
            kind: WeightKind::Tilted {
                t,
                base: Box::new(base),
            },
            normalization: Normalization::Raw,
            scale: 1.0,
        })
    }

    /// Returns the same weight rescaled to unit mass.
    pub fn probability(mut self) -> Result<Self> {
        self.scale = 1.0;
        self.normalization = Normalization::Raw;
        let m0 = match self.contour {
            Contour::Line => line_moments(&self, 0)?.re(0),
            Contour::Circle => circle_moments(&self, 0)?.re(0),
        };
        if !(m0 > 0.0) {
            return Err(Error::DegenerateMeasure(format!("total mass {m0} is not positive")));
        }
        self.scale = 1.0 / m0;
        self.normalization = Normalization::Probability;
        Ok(self)
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Parses the weight mini-language. `default_contour` is used for
    /// `sampled:<path>`, whose file does not say which contour it lives on.
    pub fn parse_on(text: &str, default_contour: Contour) -> Result<Self> {
        let text = text.trim();
        let (id, rest) = match text.split_once(':') {
            Some((a, b)) => (a.trim().to_ascii_lowercase(), b.trim()),
            None => (text.to_ascii_lowercase(), ""),
        };
        if id == "sampled" {
            let (path, norm) = match rest.rsplit_once(",norm=") {
                Some((p, n)) => (p, Some(n)),
                None => (rest, None),
            };
            let w = Self::from_samples_file(Path::new(path), default_contour)?;
            return match norm {
                Some(n) => w.with_norm_key(n),
                None => Ok(w),
            };
        }
        let mut params: BTreeMap<String, String> = BTreeMap::new();
        if !rest.is_empty() {
            for item in rest.split(',') {
                let (k, v) = item.split_once('=').ok_or_else(|| {
                    Error::Parse(format!("weight parameter '{item}' is not of the form key=value"))
                })?;
                params.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
            }
        }
        let norm = params.remove("norm");
        let mut take = |key: &str, default: Option<f64>| -> Result<f64> {
            match params.remove(key) {
                Some(v) => v
                    .parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| Error::Parse(format!("parameter {key}='{v}' is not a finite number"))),
                None => default.ok_or_else(|| Error::Parse(format!("weight '{id}' needs parameter {key}"))),
            }
        };
        let b = match id.as_str() {
            "lebesgue" => Builtin::Lebesgue,
            "onepluscos" => Builtin::OnePlusCos,
            "expcos" => Builtin::ExpCos { s: take("s", None)? },
            "cos" => {
                let c = take("c", None)?;
                if c.abs() >= 1.0 {
                    return Err(Error::InvalidInput(format!(
                        "cos:c={c} is not strictly positive on the circle (need |c| < 1)"
                    )));
                }
                Builtin::Cos { c }
            }
            "gauss" => Builtin::Gauss,
            "gaussbump" => {
                let c = take("c", None)?;
                if c <= -1.0 {
                    return Err(Error::InvalidInput(format!("gaussbump:c={c} is not positive (need c > -1)")));
                }
                Builtin::GaussBump { c }
            }
            "quartic" => {
                let g = take("g", Some(1.0))?;
                let d = take("d", Some(0.0))?;
                if g < 0.0 || (g == 0.0 && d <= 0.0) {
                    return Err(Error::InvalidInput(format!("quartic:g={g},d={d} does not decay")));
                }
                Builtin::Quartic { g, d }
            }
            other => return Err(Error::Parse(format!("unknown weight '{other}'"))),
        };
        if let Some(k) = params.keys().next() {
            return Err(Error::Parse(format!("unknown parameter '{k}' for weight '{id}'")));
        }
        let w = Self::builtin(b);
        match norm {
            Some(n) => w.with_norm_key(&n),
            None => Ok(w),
        }
    }

    fn with_norm_key(self, key: &str) -> Result<Self> {
        match key.trim() {
            "raw" => Ok(self),
            "prob" | "probability" => self.probability(),
            other => Err(Error::Parse(format!("norm must be raw or prob, got '{other}'"))),
        }
    }

    /// Reads `grid,value` rows (an optional header line is skipped).
    pub fn from_samples_file(path: &Path, contour: Contour) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidInput(format!("cannot read samples '{}': {e}", path.display())))?;
        let mut grid = Vec::new();
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',');
            let a = parts.next().unwrap_or("").trim();
            let b = parts.next().unwrap_or("").trim();
            match (a.parse::<f64>(), b.parse::<f64>()) {
                (Ok(x), Ok(v)) => {
                    grid.push(x);
                    values.push(v);
                }
                _ if i == 0 => continue,
                _ => return Err(Error::Parse(format!("{}:{}: expected 'grid,value'", path.display(), i + 1))),
            }
        }
        Self::sampled(path.display().to_string(), grid, values, contour)
    }

    pub fn sampled(source: String, grid: Vec<f64>, values: Vec<f64>, contour: Contour) -> Result<Self> {
        if grid.len() < 4 || grid.len() != values.len() {
            return Err(Error::InvalidInput("sampled weight needs at least 4 (grid, value) rows".into()));
        }
        if let Some(v) = values.iter().find(|v| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::DegenerateMeasure(format!("sampled weight has non-positive value {v}")));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidInput("sample grid must be strictly increasing".into()));
        }
        let mut coeffs = Vec::new();
        if contour == Contour::Circle {
            let m = grid.len();
            let h = 2.0 * PI / m as f64;
            let uniform = grid
                .iter()
                .enumerate()
                .all(|(j, &t)| (t - grid[0] - j as f64 * h).abs() < 1e-9 * (1.0 + t.abs()));
            if !uniform {
                return Err(Error::InvalidInput(
                    "circle samples must lie on a uniform grid θ_j = θ_0 + 2πj/M".into(),
                ));
            }
            coeffs = fft_coefficients(&values);
            if grid[0] != 0.0 {
                for (k, c) in coeffs.iter_mut().enumerate() {
                    let kk = signed_mode(k, m) as f64;
                    *c *= Complex64::from_polar(1.0, -kk * grid[0]);
                }
            }
        }
        Ok(WeightSpec {
            contour,
            kind: WeightKind::Sampled(Sampled {
                source,
                grid,
                values,
                coeffs,
            }),
            normalization: Normalization::Raw,
            scale: 1.0,
        })
    }

    /// True when the weight extends to an entire function of `x`.
    pub fn is_analytic(&self) -> bool {
        match &self.kind {
            WeightKind::Builtin(_) => true,
            WeightKind::Sampled(_) => false,
            WeightKind::Product(a, b) => a.is_analytic() && b.is_analytic(),
            WeightKind::Homotopy { target, .. } => target.is_analytic(),
            WeightKind::Tilted { base, .. } => base.is_analytic(),
        }
    }

    /// Weight value at `x` (line) or at angle `x` (circle).
    pub fn eval(&self, x: f64) -> f64 {
        self.scale * self.eval_raw(x)
    }

    fn eval_raw(&self, x: f64) -> f64 {
        match &self.kind {
            WeightKind::Builtin(b) => match *b {
                Builtin::Lebesgue => 1.0,
                Builtin::OnePlusCos => 1.0 + x.cos(),
                Builtin::ExpCos { s } => (s * x.cos()).exp(),
                Builtin::Cos { c } => 1.0 + c * x.cos(),
                Builtin::Gauss => (-x * x).exp() / PI.sqrt(),
                Builtin::GaussBump { c } => 1.0 + c * (-x * x).exp(),
                Builtin::Quartic { g, d } => (-(g * x.powi(4) + d * x * x)).exp(),
            },
            WeightKind::Sampled(s) => match self.contour {
                Contour::Line => interp_linear(&s.grid, &s.values, x),
                Contour::Circle => trig_interp(&s.coeffs, x),
            },
            WeightKind::Product(a, b) => a.eval(x) * b.eval(x),
            WeightKind::Homotopy { t, target } => 1.0 - t + t * target.eval(x),
            WeightKind::Tilted { t, base } => (2.0 * x * t).exp() * base.eval(x),
        }
    }

    /// Analytic continuation of a line weight to complex `z`.
    pub fn eval_complex(&self, z: Complex64) -> Option<Complex64> {
        let v = match &self.kind {
            WeightKind::Builtin(b) => match *b {
                Builtin::Gauss => (-z * z).exp() / PI.sqrt(),
                Builtin::GaussBump { c } => 1.0 + c * (-z * z).exp(),
                Builtin::Quartic { g, d } => (-(g * z.powi(4) + d * z * z)).exp(),
                Builtin::Lebesgue => Complex64::new(1.0, 0.0),
                Builtin::OnePlusCos => 1.0 + z.cos(),
                Builtin::ExpCos { s } => (s * z.cos()).exp(),
                Builtin::Cos { c } => 1.0 + c * z.cos(),
            },
            WeightKind::Sampled(_) => return None,
            WeightKind::Product(a, b) => a.eval_complex(z)? * b.eval_complex(z)?,
            WeightKind::Homotopy { t, target } => 1.0 - t + t * target.eval_complex(z)?,
            WeightKind::Tilted { t, base } => (2.0 * z * t).exp() * base.eval_complex(z)?,
        };
        Some(v * self.scale)
    }

    fn eval_dd(&self, x: Dd) -> Dd {
        let raw = match &self.kind {
            WeightKind::Builtin(b) => match *b {
                Builtin::Gauss => (-(x * x)).exp() / Dd::PI.sqrt(),
                Builtin::GaussBump { c } => Dd::ONE + Dd::from_f64(c) * (-(x * x)).exp(),
                Builtin::Quartic { g, d } => {
                    let x2 = x * x;
                    (-(Dd::from_f64(g) * x2 * x2 + Dd::from_f64(d) * x2)).exp()
                }
                _ => Dd::from_f64(self.eval_raw(x.to_f64())),
            },
            WeightKind::Sampled(_) => Dd::from_f64(self.eval_raw(x.to_f64())),
            WeightKind::Product(a, b) => a.eval_dd(x) * b.eval_dd(x),
            WeightKind::Homotopy { t, target } => {
                let t = Dd::from_f64(*t);
                Dd::ONE - t + t * target.eval_dd(x)
            }
            WeightKind::Tilted { t, base } => (Dd::from_f64(2.0 * t) * x).exp() * base.eval_dd(x),
        };
        raw * Dd::from_f64(self.scale)
    }

    /// Whether the weight carries exactly one `e^{-x²}` factor that a
    /// Gauss–Hermite rule can absorb.
    fn has_gauss_factor(&self) -> bool {
        match &self.kind {
            WeightKind::Builtin(Builtin::Gauss) => true,
            WeightKind::Product(a, b) => a.has_gauss_factor() ^ b.has_gauss_factor(),
            WeightKind::Tilted { base, .. } => base.has_gauss_factor(),
            _ => false,
        }
    }

    /// `w(x) e^{x²}`, for weights with a Gaussian factor.
    fn eval_without_gauss(&self, x: f64) -> f64 {
        let raw = match &self.kind {
            WeightKind::Builtin(Builtin::Gauss) => 1.0 / PI.sqrt(),
            WeightKind::Product(a, b) => {
                if a.has_gauss_factor() {
                    a.eval_without_gauss(x) * b.eval(x)
                } else {
                    a.eval(x) * b.eval_without_gauss(x)
                }
            }
            WeightKind::Tilted { t, base } => (2.0 * x * t).exp() * base.eval_without_gauss(x),
            _ => unreachable!("no Gaussian factor"),
        };
        raw * self.scale
    }

    fn gauss_mix(&self) -> Option<GaussMix> {
        let mix = match &self.kind {
            WeightKind::Builtin(Builtin::Gauss) => GaussMix::single(1, BigRational::one(), 1),
            WeightKind::Builtin(Builtin::GaussBump { c }) => {
                let mut m = GaussMix::single(0, BigRational::one(), 0);
                m.add_term(1, exact::rational(*c));
                m
            }
            WeightKind::Product(a, b) => a.gauss_mix()?.mul(&b.gauss_mix()?),
            WeightKind::Homotopy { t, target } => {
                let tgt = target.gauss_mix()?;
                if tgt.inv_sqrt_pi != 0 {
                    return None;
                }
                let t = exact::rational(*t);
                let mut m = tgt.scaled(&t);
                m.add_term(0, BigRational::one() - t);
                m
            }
            _ => return None,
        };
        if self.scale == 1.0 {
            Some(mix)
        } else {
            Some(mix.scaled(&exact::rational(self.scale)))
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WeightKind::Builtin(b) => match b {
                Builtin::Lebesgue => write!(f, "lebesgue")?,
                Builtin::OnePlusCos => write!(f, "onepluscos")?,
                Builtin::ExpCos { s } => write!(f, "expcos:s={s}")?,
                Builtin::Cos { c } => write!(f, "cos:c={c}")?,
                Builtin::Gauss => write!(f, "gauss")?,
                Builtin::GaussBump { c } => write!(f, "gaussbump:c={c}")?,
                Builtin::Quartic { g, d } => write!(f, "quartic:g={g},d={d}")?,
            },
            WeightKind::Sampled(s) => write!(f, "sampled:{}", s.source)?,
            WeightKind::Product(a, b) => write!(f, "({a})*({b})")?,
            WeightKind::Homotopy { t, target } => write!(f, "1-{t}+{t}*({target})")?,
            WeightKind::Tilted { t, base } => write!(f, "exp(2*{t}*x)*({base})")?,
        }
        if self.normalization == Normalization::Probability {
            write!(f, ",norm=prob")?;
        }
        Ok(())
    }
}

/// `Σ_β c_β e^{-β x²}`, times `π^{-1/2}` raised to `inv_sqrt_pi`.
#[derive(Clone, Debug)]
struct GaussMix {
    inv_sqrt_pi: u32,
    terms: BTreeMap<u32, BigRational>,
}

impl GaussMix {
    fn single(beta: u32, c: BigRational, inv_sqrt_pi: u32) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(beta, c);
        GaussMix { inv_sqrt_pi, terms }
    }

    fn add_term(&mut self, beta: u32, c: BigRational) {
        let e = self.terms.entry(beta).or_insert_with(BigRational::zero);
        *e += c;
    }

    fn scaled(&self, s: &BigRational) -> Self {
        GaussMix {
            inv_sqrt_pi: self.inv_sqrt_pi,
            terms: self.terms.iter().map(|(b, c)| (*b, c * s)).collect(),
        }
    }

    fn mul(&self, other: &GaussMix) -> Self {
        let mut out = GaussMix {
            inv_sqrt_pi: self.inv_sqrt_pi + other.inv_sqrt_pi,
            terms: BTreeMap::new(),
        };
        for (b1, c1) in &self.terms {
            for (b2, c2) in &other.terms {
                out.add_term(b1 + b2, c1 * c2);
            }
        }
        out
    }

    /// Moments `∫ x^j w dx`, `j ≤ order`; irrational `√β` is rounded to
    /// `digits` places.
    fn moments(&self, order: usize, digits: u32) -> Result<Option<Vec<BigRational>>> {
        if self.terms.iter().any(|(b, c)| *b == 0 && !c.is_zero()) {
            return Err(Error::InsufficientDecay(
                "weight tends to a nonzero constant at infinity".into(),
            ));
        }
        if self.inv_sqrt_pi != 1 {
            return Ok(None);
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mut out = vec![BigRational::zero(); order + 1];
        for (beta, c) in &self.terms {
            if c.is_zero() {
                continue;
            }
            let b = BigRational::from_integer(BigInt::from(*beta));
            // ∫ x^{2i} e^{-βx²} dx / √π = (2i-1)!! / (2^i β^{i+1/2})
            let mut term = c / exact::sqrt_rational(&b, digits);
            for (j, slot) in out.iter_mut().enumerate() {
                if j % 2 == 1 {
                    continue;
                }
                let i = j / 2;
                if i > 0 {
                    term = term * BigRational::from_integer(BigInt::from(2 * i - 1)) / (&two * &b);
                }
                *slot += &term;
            }
        }
        Ok(Some(out))
    }
}

/// Moment sequence in double-double precision, with exact rational values
/// when the weight admits them.
#[derive(Clone, Debug)]
pub struct MomentData {
    pub contour: Contour,
    pub precision: Precision,
    /// `m_j` (line, imaginary parts zero) or `μ̂_k` (circle), `0 ≤ k ≤ order`.
    pub values: Vec<Cx<Dd>>,
    /// Exact (or series-rounded) rational values `(re, im)`.
    pub exact: Option<Vec<(BigRational, BigRational)>>,
}

impl MomentData {
    pub fn order(&self) -> usize {
        self.values.len() - 1
    }

    pub fn re(&self, k: usize) -> f64 {
        self.values[k].re.to_f64()
    }

    pub fn line_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re.to_f64()).collect()
    }

    pub fn line_dd(&self) -> Vec<Dd> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn circle_c64(&self) -> Vec<Complex64> {
        self.values.iter().map(|v| v.to_c64()).collect()
    }

    /// `μ̂_k` for any integer `k`, using `μ̂_{-k} = conj(μ̂_k)`.
    pub fn mu(&self, k: i64) -> Cx<Dd> {
        if k >= 0 {
            self.values[k as usize].clone()
        } else {
            self.values[(-k) as usize].conj()
        }
    }

    pub fn mu_c64(&self, k: i64) -> Complex64 {
        self.mu(k).to_c64()
    }

    pub fn with_precision(mut self, p: Precision) -> Self {
        self.precision = p;
        self
    }

    fn from_exact(contour: Contour, exact: Vec<(BigRational, BigRational)>) -> Self {
        let values = exact
            .iter()
            .map(|(re, im)| Cx::new(Dd::from_rational(re), Dd::from_rational(im)))
            .collect();
        MomentData {
            contour,
            precision: Precision::Exact,
            values,
            exact: Some(exact),
        }
    }
}

/// Line moments `m_j = ∫ x^j w(x) dx`, `0 ≤ j ≤ order`.
///
/// Gaussian mixtures get closed-form rational moments; other analytic
/// weights use a double-double trapezoid rule on a truncated interval
/// (spectrally accurate for entire, rapidly decaying integrands) with a
/// step-halving check; sampled weights use composite Gauss–Legendre.
pub fn line_moments(weight: &WeightSpec, order: usize) -> Result<MomentData> {
    if weight.contour != Contour::Line {
        return Err(Error::InvalidInput(format!("line moments requested for the {} weight {weight}", weight.contour)));
    }
    if let Some(mix) = weight.gauss_mix() {
        if let Some(m) = mix.moments(order, SERIES_DIGITS)? {
            let zero = BigRational::zero();
            return Ok(MomentData::from_exact(
                Contour::Line,
                m.into_iter().map(|q| (q, zero.clone())).collect(),
            ));
        }
    }
    let values: Vec<Dd> = match &weight.kind {
        WeightKind::Sampled(s) => sampled_line_moments(weight, s, order)?,
        _ => trapezoid_line_moments(weight, order)?,
    };
    Ok(MomentData {
        contour: Contour::Line,
        precision: Precision::Extended,
        values: values.into_iter().map(Cx::real).collect(),
        exact: None,
    })
}

/// Smallest interval outside which `|x|^order w(x)` is negligible.
pub fn line_support(weight: &WeightSpec, order: usize) -> Result<(f64, f64)> {
    let logf = |x: f64| -> f64 {
        let w = weight.eval(x);
        if w <= 0.0 {
            f64::NEG_INFINITY
        } else {
            order as f64 * x.abs().max(1e-300).ln() + w.ln()
        }
    };
    let step = 0.125;
    let limit = 400.0;
    let mut peak = f64::NEG_INFINITY;
    let mut xs = 0.0;
    while xs <= limit {
        peak = peak.max(logf(xs)).max(logf(-xs)).max(weight.eval(xs).ln()).max(weight.eval(-xs).ln());
        xs += step;
    }
    if !peak.is_finite() {
        return Err(Error::DegenerateMeasure(format!("weight {weight} vanishes on the scan range")));
    }
    let mut ends = [0.0f64; 2];
    for (slot, sign) in ends.iter_mut().zip([-1.0, 1.0]) {
        // Walk inward from the far end while the integrand stays negligible.
        let mut x = limit;
        if logf(sign * x) > peak - 80.0 || weight.eval(sign * x).ln() > peak - 80.0 {
            return Err(Error::InsufficientDecay(format!(
                "weight {weight} times |x|^{order} is not negligible at |x| = {limit}"
            )));
        }
        while x > step && logf(sign * x) < peak - 80.0 && weight.eval(sign * x).ln() < peak - 80.0 {
            x -= step;
        }
        *slot = sign * (x + 2.0 * step);
    }
    Ok((ends[0], ends[1]))
}

fn trapezoid_line_moments(weight: &WeightSpec, order: usize) -> Result<Vec<Dd>> {
    let (a, b) = line_support(weight, order)?;
    // Odd moments of even weights cancel to zero, so convergence is judged
    // against the moments of |x|^k w.
    let run = |h: f64| -> (Vec<Dd>, Vec<f64>) {
        let k0 = (a / h).floor() as i64;
        let k1 = (b / h).ceil() as i64;
        let hd = Dd::from_f64(h);
        let mut acc = vec![Dd::ZERO; order + 1];
        let mut mag = vec![0.0f64; order + 1];
        for k in k0..=k1 {
            let x = Dd::from_i64(k) * hd;
            let w = weight.eval_dd(x) * hd;
            let mut p = w;
            for (slot, m) in acc.iter_mut().zip(mag.iter_mut()) {
                *slot += p;
                *m += p.abs().to_f64();
                p *= x;
            }
        }
        (acc, mag)
    };
    let mut h = 0.125;
    let (mut prev, _) = run(h);
    for _ in 0..6 {
        h *= 0.5;
        let (next, mag) = run(h);
        let converged = prev
            .iter()
            .zip(&next)
            .zip(&mag)
            .all(|((p, q), m)| (*p - *q).abs().to_f64() <= 1e-28 * m);
        prev = next;
        if converged {
            return Ok(prev);
        }
    }
    Err(Error::GridUnderresolved(format!(
        "line moments of {weight} did not settle under step halving (h = {h})"
    )))
}

fn sampled_line_moments(weight: &WeightSpec, s: &Sampled, order: usize) -> Result<Vec<Dd>> {
    let peak = s.values.iter().cloned().fold(0.0, f64::max);
    let ends = [s.values[0], *s.values.last().unwrap()];
    if ends.iter().any(|v| *v > 1e-10 * peak) {
        return Err(Error::InsufficientDecay(format!(
            "sampled weight {} is not negligible at the ends of its grid",
            s.source
        )));
    }
    let (x, w) = sampled_line_rule(s, order / 2 + 2);
    let mut acc = vec![Dd::ZERO; order + 1];
    for (xi, wi) in x.iter().zip(&w) {
        let v = Dd::from_f64(wi * weight.eval(*xi));
        let mut p = v;
        for slot in acc.iter_mut() {
            *slot += p;
            p *= Dd::from_f64(*xi);
        }
    }
    Ok(acc)
}

/// Composite Gauss–Legendre rule over the panels of a sampled grid.
fn sampled_line_rule(s: &Sampled, per_panel: usize) -> (Vec<f64>, Vec<f64>) {
    let (t, tw) = quad::gauss_legendre(per_panel.max(2));
    let mut x = Vec::new();
    let mut w = Vec::new();
    for p in s.grid.windows(2) {
        let h = 0.5 * (p[1] - p[0]);
        let c = 0.5 * (p[1] + p[0]);
        for (ti, wi) in t.iter().zip(&tw) {
            x.push(c + h * ti);
            w.push(h * wi);
        }
    }
    (x, w)
}

/// A positive discrete measure `Σ w_i δ_{x_i}` whose moments through degree
/// `2n + 1` reproduce those of the weight to quadrature accuracy.
pub fn discretize_line(weight: &WeightSpec, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if weight.contour != Contour::Line {
        return Err(Error::InvalidInput(format!("{weight} is not a line weight")));
    }
    if let WeightKind::Sampled(s) = &weight.kind {
        let (x, q) = sampled_line_rule(s, n + 2);
        let w = x.iter().zip(&q).map(|(xi, qi)| qi * weight.eval(*xi)).collect();
        return Ok((x, w));
    }
    let nodes = (4 * n).max(160);
    if weight.has_gauss_factor() {
        let (x, q) = quad::gauss_hermite(nodes);
        let w = x.iter().zip(&q).map(|(xi, qi)| qi * weight.eval_without_gauss(*xi)).collect();
        return Ok((x, w));
    }
    let (a, b) = line_support(weight, 2 * n + 2)?;
    let rule = |m: usize| -> (Vec<f64>, Vec<f64>) {
        let (x, q) = quad::gauss_legendre_on(m, a, b);
        let w = x.iter().zip(&q).map(|(xi, qi)| qi * weight.eval(*xi)).collect();
        (x, w)
    };
    let probe = |x: &[f64], w: &[f64]| -> f64 {
        x.iter().zip(w).map(|(xi, wi)| wi * xi.powi(2 * n as i32 + 1).abs()).sum()
    };
    let mut m = nodes;
    let mut cur = rule(m);
    while m < 8192 {
        let next = rule(2 * m);
        let (p, q) = (probe(&cur.0, &cur.1), probe(&next.0, &next.1));
        if (p - q).abs() <= 1e-13 * q.abs() {
            return Ok(cur);
        }
        m *= 2;
        cur = next;
    }
    Err(Error::GridUnderresolved(format!("Gauss–Legendre discretization of {weight} did not converge")))
}

/// Circle moments `μ̂_k = ∫ e^{-ikθ} ω(θ) dθ/2π`, `0 ≤ k ≤ order`.
///
/// Closed forms are used for the trigonometric builtins and for `e^{s cos θ}`
/// (Bessel series in double-double); everything else goes through a uniform
/// grid FFT whose size is doubled until the top quarter of the spectrum is
/// at the noise floor.
pub fn circle_moments(weight: &WeightSpec, order: usize) -> Result<MomentData> {
    if weight.contour != Contour::Circle {
        return Err(Error::InvalidInput(format!("circle moments requested for the {} weight {weight}", weight.contour)));
    }
    if let Some(v) = closed_form_circle(weight, order) {
        return Ok(MomentData {
            contour: Contour::Circle,
            precision: Precision::Extended,
            values: v,
            exact: None,
        });
    }
    let c = fft_circle_moments(weight, order)?;
    Ok(MomentData {
        contour: Contour::Circle,
        precision: Precision::Double,
        values: c.into_iter().map(Cx::from_c64).collect(),
        exact: None,
    })
}

/// Circle moments as rationals (exact for the trigonometric builtins,
/// rounded to `digits` places for Bessel moments). `None` when the weight
/// has no such representation.
pub fn circle_moments_exact(weight: &WeightSpec, order: usize, digits: u32) -> Option<MomentData> {
    let re = exact_circle_re(weight, order, digits)?;
    let zero = BigRational::zero();
    Some(MomentData::from_exact(
        Contour::Circle,
        re.into_iter().map(|q| (q, zero.clone())).collect(),
    ))
}

fn exact_circle_re(weight: &WeightSpec, order: usize, digits: u32) -> Option<Vec<BigRational>> {
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mut out = vec![BigRational::zero(); order + 1];
    match &weight.kind {
        WeightKind::Builtin(b) => match *b {
            Builtin::Lebesgue => out[0] = BigRational::one(),
            Builtin::OnePlusCos => {
                out[0] = BigRational::one();
                if order >= 1 {
                    out[1] = half;
                }
            }
            Builtin::Cos { c } => {
                out[0] = BigRational::one();
                if order >= 1 {
                    out[1] = exact::rational(c) * half;
                }
            }
            Builtin::ExpCos { s } => {
                let s = exact::rational(s);
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = exact::bessel_i_rational(k as u32, &s, digits);
                }
            }
            _ => return None,
        },
        WeightKind::Homotopy { t, target } => {
            let tq = exact::rational(*t);
            let inner = exact_circle_re(target, order, digits)?;
            for (slot, v) in out.iter_mut().zip(inner) {
                *slot = &tq * v;
            }
            out[0] += BigRational::one() - tq;
        }
        WeightKind::Product(a, b) => {
            // Only products with a constant factor reduce to a closed form.
            let (konst, other) = if matches!(a.kind, WeightKind::Builtin(Builtin::Lebesgue)) {
                (a, b)
            } else if matches!(b.kind, WeightKind::Builtin(Builtin::Lebesgue)) {
                (b, a)
            } else {
                return None;
            };
            let k = exact::rational(konst.scale);
            out = exact_circle_re(other, order, digits)?.into_iter().map(|v| v * &k).collect();
        }
        _ => return None,
    }
    if weight.scale != 1.0 {
        let s = exact::rational(weight.scale);
        for v in out.iter_mut() {
            *v = &*v * &s;
        }
    }
    Some(out)
}

fn closed_form_circle(weight: &WeightSpec, order: usize) -> Option<Vec<Cx<Dd>>> {
    let mut out = vec![Cx::<Dd>::zero(); order + 1];
    match &weight.kind {
        WeightKind::Builtin(b) => match *b {
            Builtin::Lebesgue => out[0] = Cx::one(),
            Builtin::OnePlusCos => {
                out[0] = Cx::one();
                if order >= 1 {
                    out[1] = Cx::real(Dd::from_f64(0.5));
                }
            }
            Builtin::Cos { c } => {
                out[0] = Cx::one();
                if order >= 1 {
                    out[1] = Cx::real(Dd::from_f64(c) * Dd::from_f64(0.5));
                }
            }
            Builtin::ExpCos { s } => {
                for (k, slot) in out.iter_mut().enumerate() {
                    *slot = Cx::real(bessel_i_dd(k, s));
                }
            }
            _ => return None,
        },
        WeightKind::Homotopy { t, target } => {
            let inner = closed_form_circle(target, order)?;
            let td = Dd::from_f64(*t);
            for (slot, v) in out.iter_mut().zip(inner) {
                *slot = v.scale(&td);
            }
            out[0] = out[0].clone() + Cx::real(Dd::ONE - td);
        }
        WeightKind::Product(a, b) => {
            let (konst, other) = if matches!(a.kind, WeightKind::Builtin(Builtin::Lebesgue)) {
                (a, b)
            } else if matches!(b.kind, WeightKind::Builtin(Builtin::Lebesgue)) {
                (b, a)
            } else {
                return None;
            };
            let k = Dd::from_f64(konst.scale);
            out = closed_form_circle(other, order)?.into_iter().map(|v| v.scale(&k)).collect();
        }
        _ => return None,
    }
    if weight.scale != 1.0 {
        let s = Dd::from_f64(weight.scale);
        out = out.into_iter().map(|v| v.scale(&s)).collect();
    }
    Some(out)
}

/// `I_k(s)` by its power series in double-double arithmetic.
pub fn bessel_i_dd(k: usize, s: f64) -> Dd {
    let half = Dd::from_f64(s) * Dd::from_f64(0.5);
    let half_sq = half * half;
    let mut term = Dd::ONE;
    for j in 1..=k {
        term = term * half / Dd::from_f64(j as f64);
    }
    let mut sum = term;
    let mut m = 0u64;
    loop {
        m += 1;
        term = term * half_sq / Dd::from_f64((m * (m + k as u64)) as f64);
        sum += term;
        if term.abs().to_f64() <= 1e-34 * sum.abs().to_f64() || term.hi == 0.0 {
            break;
        }
    }
    sum
}

/// Circle moments by FFT of the weight on a uniform grid.
pub fn fft_circle_moments(weight: &WeightSpec, order: usize) -> Result<Vec<Complex64>> {
    if let WeightKind::Sampled(s) = &weight.kind {
        let m = s.coeffs.len();
        if order >= m / 2 {
            return Err(Error::GridUnderresolved(format!(
                "{m} samples resolve moments only below order {}",
                m / 2
            )));
        }
        check_tail(&s.coeffs, &s.source)?;
        return Ok((0..=order).map(|k| s.coeffs[k] * weight.scale).collect());
    }
    let mut m = (4 * (order + 1)).max(64).next_power_of_two();
    loop {
        let vals: Vec<f64> = quad::circle_grid(m).iter().map(|&t| weight.eval(t)).collect();
        let c = fft_coefficients(&vals);
        if check_tail(&c, &weight.to_string()).is_ok() {
            return Ok(c[..=order].to_vec());
        }
        if m >= 1 << 22 {
            return check_tail(&c, &weight.to_string()).map(|_| Vec::new());
        }
        m *= 2;
    }
}

fn check_tail(c: &[Complex64], label: &str) -> Result<()> {
    let m = c.len();
    let scale = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let tail = (3 * m / 8..=m / 2).map(|k| c[k].norm()).fold(0.0, f64::max);
    // Noise floor of a length-m FFT times a safety factor of 10.
    let floor = 10.0 * f64::EPSILON * (m as f64).log2().max(1.0) * scale;
    if tail > floor {
        return Err(Error::GridUnderresolved(format!(
            "{label}: top-band Fourier coefficient {tail:e} exceeds noise floor {floor:e} on {m} points"
        )));
    }
    Ok(())
}

/// `c_k = (1/M) Σ_j v_j e^{-2πijk/M}`.
pub fn fft_coefficients(values: &[f64]) -> Vec<Complex64> {
    let m = values.len();
    let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let inv = 1.0 / m as f64;
    buf.iter_mut().for_each(|v| *v *= inv);
    buf
}

fn signed_mode(k: usize, m: usize) -> i64 {
    if k <= m / 2 {
        k as i64
    } else {
        k as i64 - m as i64
    }
}

fn trig_interp(coeffs: &[Complex64], theta: f64) -> f64 {
    let m = coeffs.len();
    let mut s = Complex64::new(0.0, 0.0);
    for (k, c) in coeffs.iter().enumerate() {
        let kk = signed_mode(k, m);
        let weight = if m.is_multiple_of(2) && k == m / 2 { 0.5 } else { 1.0 };
        s += c * Complex64::from_polar(weight, kk as f64 * theta);
        if m.is_multiple_of(2) && k == m / 2 {
            s += c * Complex64::from_polar(weight, -(kk as f64) * theta);
        }
    }
    s.re
}

fn interp_linear(grid: &[f64], values: &[f64], x: f64) -> f64 {
    if x < grid[0] || x > *grid.last().unwrap() {
        return 0.0;
    }
    let i = grid.partition_point(|&g| g <= x).clamp(1, grid.len() - 1);
    let (x0, x1) = (grid[i - 1], grid[i]);
    let s = (x - x0) / (x1 - x0);
    values[i - 1] * (1.0 - s) + values[i] * s
}

/// Carathéodory function `F(z) = 1 + 2 Σ_{k≥1} (μ̂_k/μ̂_0) z^k`.
pub fn caratheodory(moments: &MomentData, z: Complex64) -> Result<Complex64> {
    let (s, _) = schur_series_parts(moments, z)?;
    Ok(Complex64::new(1.0, 0.0) + z * s)
}

/// Schur function `f(z) = (F(z) - 1)/(z (F(z) + 1))`, with `f(0) = μ̂_1/μ̂_0`.
pub fn schur_function(moments: &MomentData, z: Complex64) -> Result<Complex64> {
    let (s, _) = schur_series_parts(moments, z)?;
    // F - 1 = z S with S = 2 Σ_{k≥1} μ̂_k z^{k-1}; avoids cancellation near 0.
    let f = s / (Complex64::new(2.0, 0.0) + z * s);
    if f.norm() >= 1.0 {
        return Err(Error::MeasureDegenerate(format!("|f({z})| = {} ≥ 1", f.norm())));
    }
    Ok(f)
}

fn schur_series_parts(moments: &MomentData, z: Complex64) -> Result<(Complex64, f64)> {
    if moments.contour != Contour::Circle {
        return Err(Error::InvalidInput("Carathéodory function needs circle moments".into()));
    }
    let r = z.norm();
    if r >= 1.0 {
        return Err(Error::Domain(format!("|z| = {r} is not inside the unit disk")));
    }
    let mu = moments.circle_c64();
    let m0 = mu[0].re;
    let kmax = mu.len() - 1;
    let mut s = Complex64::new(0.0, 0.0);
    let mut zk = Complex64::new(1.0, 0.0);
    for m in mu.iter().skip(1) {
        s += 2.0 * m / m0 * zk;
        zk *= z;
    }
    // Remaining terms are bounded by the last one times a geometric tail.
    let last = if kmax >= 1 { mu[kmax].norm() / m0 } else { 0.0 };
    let tail = 2.0 * last * r.powi(kmax as i32) / (1.0 - r);
    if tail > 1e-13 && kmax >= 1 {
        return Err(Error::InsufficientMoments(format!(
            "series tail bound {tail:e} at |z| = {r} with {kmax} moments"
        )));
    }
    Ok((s, tail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gauss_moments_are_double_factorials() {
        let m = line_moments(&WeightSpec::gauss(), 4).unwrap();
        let q = |n, d| BigRational::new(BigInt::from(n), BigInt::from(d));
        let ex: Vec<BigRational> = m.exact.unwrap().into_iter().map(|(r, _)| r).collect();
        assert_eq!(ex, vec![q(1, 1), q(0, 1), q(1, 2), q(0, 1), q(3, 4)]);
    }

    #[test]
    fn gauss_moments_match_hermite_quadrature() {
        let m = line_moments(&WeightSpec::gauss(), 12).unwrap();
        let (x, w) = quad::gauss_hermite(40);
        for j in 0..=12 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(j as i32)).sum::<f64>() / PI.sqrt();
            assert!((m.re(j) - q).abs() < 1e-12 * (1.0 + q.abs()), "j={j}");
        }
    }

    #[test]
    fn quartic_odd_moments_vanish_and_even_match_gamma() {
        let m = line_moments(&WeightSpec::quartic(1.0, 0.0), 6).unwrap();
        assert!(m.re(1).abs() < 1e-30);
        assert!(m.re(3).abs() < 1e-30);
        // ∫ e^{-x⁴} dx = Γ(1/4)/2, Γ(1/4) = 3.6256099082219083119...
        assert!((m.re(0) - 3.625_609_908_221_908 / 2.0).abs() < 1e-15);
        // ∫ x² e^{-x⁴} dx = Γ(3/4)/2, Γ(3/4) = 1.2254167024651776451...
        assert!((m.re(2) - 1.225_416_702_465_177_6 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn gauss_bump_alone_does_not_decay() {
        let err = line_moments(&WeightSpec::gauss_bump(0.5), 2).unwrap_err();
        assert!(matches!(err, Error::InsufficientDecay(_)));
    }

    #[test]
    fn bumped_gauss_has_closed_form_moments() {
        let w = WeightSpec::product(WeightSpec::gauss_bump(0.5), WeightSpec::gauss()).unwrap();
        let m = line_moments(&w, 2).unwrap();
        // m_0 = 1 + 0.5/√2, m_2 = 1/2 + 0.5/(4√2)
        assert!((m.re(0) - (1.0 + 0.5 / 2f64.sqrt())).abs() < 1e-15);
        assert!((m.re(2) - (0.5 + 0.125 / 2f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn circle_builtins_have_known_moments() {
        let m = circle_moments(&WeightSpec::lebesgue(), 3).unwrap();
        assert_eq!(m.circle_c64(), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let m = circle_moments(&WeightSpec::one_plus_cos(), 3).unwrap();
        assert_eq!(m.circle_c64()[..2], [c(1.0, 0.0), c(0.5, 0.0)]);
        let m = circle_moments(&WeightSpec::exp_cos(1.0), 2).unwrap();
        assert!((m.re(0) - 1.266_065_877_752_008_4).abs() < 1e-15);
    }

    #[test]
    fn fft_path_reproduces_closed_forms() {
        for w in [WeightSpec::one_plus_cos(), WeightSpec::exp_cos(1.0), WeightSpec::cos(-0.8)] {
            let fft = fft_circle_moments(&w, 10).unwrap();
            let cf = circle_moments(&w, 10).unwrap().circle_c64();
            for k in 0..=10 {
                assert!((fft[k] - cf[k]).norm() < 1e-15, "{w} k={k}");
            }
        }
    }

    #[test]
    fn caratheodory_and_schur_examples() {
        let m = circle_moments(&WeightSpec::one_plus_cos(), 4).unwrap();
        assert!((caratheodory(&m, c(0.5, 0.0)).unwrap() - c(1.5, 0.0)).norm() < 1e-15);
        assert!((schur_function(&m, c(0.0, 0.0)).unwrap() - c(0.5, 0.0)).norm() < 1e-15);
        assert!((schur_function(&m, c(0.5, 0.0)).unwrap() - c(0.4, 0.0)).norm() < 1e-15);
        let leb = circle_moments(&WeightSpec::lebesgue(), 4).unwrap();
        assert_eq!(schur_function(&leb, c(0.3, 0.2)).unwrap(), c(0.0, 0.0));
        assert!(matches!(caratheodory(&leb, c(1.0, 0.0)), Err(Error::Domain(_))));
    }

    #[test]
    fn truncated_series_is_reported() {
        let m = circle_moments(&WeightSpec::cos(0.9), 3).unwrap();
        // cos:c has a single nonzero moment so any order resolves it
        assert!(caratheodory(&m, c(0.9, 0.0)).is_ok());
        let e = circle_moments(&WeightSpec::exp_cos(1.0), 3).unwrap();
        assert!(matches!(caratheodory(&e, c(0.9, 0.0)), Err(Error::InsufficientMoments(_))));
    }

    #[test]
    fn parser_accepts_the_mini_language() {
        let w = WeightSpec::parse_on("expcos:s=0.5", Contour::Line).unwrap();
        assert_eq!(w.contour, Contour::Circle);
        assert_eq!(w.to_string(), "expcos:s=0.5");
        let q = WeightSpec::parse_on("quartic:g=1,d=0.5", Contour::Line).unwrap();
        assert_eq!(q.kind, WeightKind::Builtin(Builtin::Quartic { g: 1.0, d: 0.5 }));
        assert!(WeightSpec::parse_on("nope", Contour::Line).is_err());
        assert!(WeightSpec::parse_on("expcos", Contour::Line).is_err());
        assert!(WeightSpec::parse_on("gauss:zz=1", Contour::Line).is_err());
        let p = WeightSpec::parse_on("expcos:s=1,norm=prob", Contour::Circle).unwrap();
        assert!((circle_moments(&p, 0).unwrap().re(0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampled_circle_weight_interpolates() {
        let m = 32;
        let grid = quad::circle_grid(m);
        let vals: Vec<f64> = grid.iter().map(|t| 1.0 + 0.3 * t.cos()).collect();
        let w = WeightSpec::sampled("mem".into(), grid, vals, Contour::Circle).unwrap();
        assert!((w.eval(0.37) - (1.0 + 0.3 * 0.37f64.cos())).abs() < 1e-14);
        let mo = circle_moments(&w, 3).unwrap();
        assert!((mo.re(1) - 0.15).abs() < 1e-15);
        assert!(matches!(circle_moments(&w, 20), Err(Error::GridUnderresolved(_))));
    }
}
