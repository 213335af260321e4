//! CSV and JSON artifacts, with readers that invert every writer.
//!
//! Doubles are written in shortest round-trip form. Double-double values with
//! a nonzero tail are written with 36 significant digits and read back
//! through an exact rational, which recovers the same pair.

use std::io::{Read, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::measures::{Contour, MomentData};
use crate::numeric::exact;
use crate::numeric::{Cx, Dd, Precision};
use crate::opcircle::VerblunskySeq;
use crate::opline::{DiscreteMeasure, RecurrenceLine};
use crate::rhp::Mat2;
use crate::{Error, Result};

const DD_DIGITS: u32 = 36;

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Parse(format!("json: {e}"))
}

pub fn f64_str(x: f64) -> String {
    format!("{x:?}")
}

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("{what}: '{s}' is not a number")))
}

/// Text form of a double-double.
pub fn dd_str(x: Dd) -> String {
    if x.lo == 0.0 || !x.is_finite() {
        return f64_str(x.hi);
    }
    let q = x.to_rational();
    let neg = q.is_negative();
    let q = q.abs();
    // Find e with 10^e ≤ q < 10^{e+1}, starting from the double estimate.
    let mut e = x.hi.abs().log10().floor() as i32;
    let pow = |k: i32| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
        } else {
            BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(10), (-k) as usize))
        }
    };
    while q < pow(e) {
        e -= 1;
    }
    while q >= pow(e + 1) {
        e += 1;
    }
    let digits = (q * pow(DD_DIGITS as i32 - 1 - e)).round().to_integer().to_string();
    // Rounding can carry into an extra digit.
    let (digits, e) = if digits.len() > DD_DIGITS as usize {
        (digits[..DD_DIGITS as usize].to_string(), e + 1)
    } else {
        (digits, e)
    };
    format!("{}{}.{}e{}", if neg { "-" } else { "" }, &digits[..1], &digits[1..], e)
}

/// Inverse of [`dd_str`].
pub fn parse_dd(s: &str) -> Result<Dd> {
    let s = s.trim();
    let mantissa = s.split(['e', 'E']).next().unwrap_or("");
    let significant = mantissa.chars().filter(|c| c.is_ascii_digit()).count();
    if significant <= 17 {
        return Ok(Dd::from_f64(parse_f64(s, "value")?));
    }
    Ok(Dd::from_rational(&parse_decimal(s)?))
}

/// Exact rational value of a decimal literal such as `-1.25e-3`.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("'{s}' is not a decimal number"));
    let s = s.trim();
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() || !(int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}0").parse().map_err(|_| bad())?;
    let shift = exp - frac.len() as i32 - 1;
    let mut q = BigRational::from_integer(digits);
    let p = BigRational::from_integer(exact::ten_pow(shift.unsigned_abs()));
    if shift >= 0 {
        q *= p;
    } else {
        q /= p;
    }
    Ok(if neg { -q } else { q })
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(false).from_writer(w)
}

fn records<R: Read>(r: R) -> Result<(Vec<String>, Vec<csv::StringRecord>)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let rows = rdr.records().collect::<std::result::Result<Vec<_>, _>>().map_err(csv_err)?;
    Ok((header, rows))
}

fn expect_header(found: &[String], want: &[&str]) -> Result<()> {
    if found.iter().map(String::as_str).eq(want.iter().copied()) {
        Ok(())
    } else {
        Err(Error::Parse(format!("expected header '{}', found '{}'", want.join(","), found.join(","))))
    }
}

/// Moments as `k,re,im` (circle) or `j,m` (line).
pub fn write_moments_csv<W: Write>(m: &MomentData, w: W) -> Result<()> {
    let mut out = writer(w);
    match m.contour {
        Contour::Circle => {
            out.write_record(["k", "re", "im"]).map_err(csv_err)?;
            for (k, v) in m.values.iter().enumerate() {
                out.write_record([k.to_string(), dd_str(v.re), dd_str(v.im)]).map_err(csv_err)?;
            }
        }
        Contour::Line => {
            out.write_record(["j", "m"]).map_err(csv_err)?;
            for (j, v) in m.values.iter().enumerate() {
                out.write_record([j.to_string(), dd_str(v.re)]).map_err(csv_err)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Reads moments back; the contour is taken from the header.
pub fn read_moments_csv<R: Read>(r: R) -> Result<MomentData> {
    let (header, rows) = records(r)?;
    let circle = header.len() == 3;
    if circle {
        expect_header(&header, &["k", "re", "im"])?;
    } else {
        expect_header(&header, &["j", "m"])?;
    }
    let mut values = Vec::with_capacity(rows.len());
    let mut extended = false;
    for (i, row) in rows.iter().enumerate() {
        if parse_f64(&row[0], "index")? as usize != i {
            return Err(Error::Parse(format!("moment rows out of order at row {}", i + 1)));
        }
        let re = parse_dd(&row[1])?;
        let im = if circle { parse_dd(&row[2])? } else { Dd::from_f64(0.0) };
        extended |= re.lo != 0.0 || im.lo != 0.0;
        values.push(Cx::new(re, im));
    }
    if values.is_empty() {
        return Err(Error::Parse("no moment rows".into()));
    }
    Ok(MomentData {
        contour: if circle { Contour::Circle } else { Contour::Line },
        precision: if extended { Precision::Extended } else { Precision::Double },
        values,
        exact: None,
    })
}

/// Recurrence table `n,a_n,b_n,k_n`; the last `b_n` is empty.
pub fn write_recurrence_csv<W: Write>(rec: &RecurrenceLine, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "a_n", "b_n", "k_n"]).map_err(csv_err)?;
    for n in 0..rec.len() {
        let b = rec.b.get(n).map(|b| f64_str(*b)).unwrap_or_default();
        out.write_record([n.to_string(), f64_str(rec.a[n]), b, f64_str(rec.k[n])]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_recurrence_csv<R: Read>(r: R) -> Result<RecurrenceLine> {
    let (header, rows) = records(r)?;
    expect_header(&header, &["n", "a_n", "b_n", "k_n"])?;
    let mut rec = RecurrenceLine {
        a: vec![],
        b: vec![],
        k: vec![],
    };
    for (i, row) in rows.iter().enumerate() {
        rec.a.push(parse_f64(&row[1], "a_n")?);
        if i + 1 < rows.len() {
            rec.b.push(parse_f64(&row[2], "b_n")?);
        }
        rec.k.push(parse_f64(&row[3], "k_n")?);
    }
    Ok(rec)
}

/// `atom,weight` rows.
pub fn write_discrete_measure_csv<W: Write>(mu: &DiscreteMeasure, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["atom", "weight"]).map_err(csv_err)?;
    for (x, q) in mu.atoms.iter().zip(&mu.weights) {
        out.write_record([f64_str(*x), f64_str(*q)]).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_discrete_measure_csv<R: Read>(r: R) -> Result<DiscreteMeasure> {
    let (header, rows) = records(r)?;
    expect_header(&header, &["atom", "weight"])?;
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for row in &rows {
        atoms.push(parse_f64(&row[0], "atom")?);
        weights.push(parse_f64(&row[1], "weight")?);
    }
    DiscreteMeasure::new(atoms, weights)
}

/// `n,re_alpha,im_alpha,rho,kappa`; a final row carries `κ_N` alone.
pub fn write_verblunsky_csv<W: Write>(v: &VerblunskySeq, w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["n", "re_alpha", "im_alpha", "rho", "kappa"]).map_err(csv_err)?;
    for n in 0..v.len() {
        out.write_record([
            n.to_string(),
            f64_str(v.alpha[n].re),
            f64_str(v.alpha[n].im),
            f64_str(v.rho[n]),
            f64_str(v.kappa[n]),
        ])
        .map_err(csv_err)?;
    }
    let last = v.len();
    out.write_record([last.to_string(), String::new(), String::new(), String::new(), f64_str(v.kappa[last])])
        .map_err(csv_err)?;
    out.flush()?;
    Ok(())
}

pub fn read_verblunsky_csv<R: Read>(r: R) -> Result<VerblunskySeq> {
    let (header, rows) = records(r)?;
    expect_header(&header, &["n", "re_alpha", "im_alpha", "rho", "kappa"])?;
    let mut v = VerblunskySeq {
        alpha: vec![],
        rho: vec![],
        kappa: vec![],
    };
    for (i, row) in rows.iter().enumerate() {
        if i + 1 < rows.len() {
            v.alpha.push(Complex64::new(parse_f64(&row[1], "re_alpha")?, parse_f64(&row[2], "im_alpha")?));
            v.rho.push(parse_f64(&row[3], "rho")?);
        }
        v.kappa.push(parse_f64(&row[4], "kappa")?);
    }
    if v.kappa.is_empty() {
        return Err(Error::Parse("no Verblunsky rows".into()));
    }
    Ok(v)
}

/// Error matrix as `j,k,err` rows in row-major order.
pub fn write_decay_csv<W: Write>(err: &[Vec<f64>], w: W) -> Result<()> {
    let mut out = writer(w);
    out.write_record(["j", "k", "err"]).map_err(csv_err)?;
    for (j, row) in err.iter().enumerate() {
        for (k, e) in row.iter().enumerate() {
            out.write_record([j.to_string(), k.to_string(), f64_str(*e)]).map_err(csv_err)?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn read_decay_csv<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    let (header, rows) = records(r)?;
    expect_header(&header, &["j", "k", "err"])?;
    let mut out: Vec<Vec<f64>> = Vec::new();
    for row in &rows {
        let j = parse_f64(&row[0], "j")? as usize;
        let k = parse_f64(&row[1], "k")? as usize;
        if j == out.len() {
            out.push(Vec::new());
        }
        if j + 1 != out.len() || k != out[j].len() {
            return Err(Error::Parse(format!("decay rows out of order at ({j}, {k})")));
        }
        out[j].push(parse_f64(&row[2], "err")?);
    }
    Ok(out)
}

/// Columns of equal length under the given headers, e.g. an `x,y` curve.
pub fn write_series_csv<W: Write>(headers: &[&str], columns: &[&[f64]], w: W) -> Result<()> {
    let len = columns.first().map_or(0, |c| c.len());
    if headers.len() != columns.len() || columns.iter().any(|c| c.len() != len) {
        return Err(Error::InvalidInput("series columns must match the headers and have equal length".into()));
    }
    let mut out = writer(w);
    out.write_record(headers).map_err(csv_err)?;
    for i in 0..len {
        out.write_record(columns.iter().map(|c| f64_str(c[i]))).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Header and columns of a numeric CSV.
pub fn read_series_csv<R: Read>(r: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let (header, rows) = records(r)?;
    let mut cols = vec![Vec::with_capacity(rows.len()); header.len()];
    for row in &rows {
        for (c, field) in cols.iter_mut().zip(row.iter()) {
            c.push(parse_f64(field, "value")?);
        }
    }
    Ok((header, cols))
}

const MATRIX_HEADER: [&str; 10] = [
    "re_z", "im_z", "re_m11", "im_m11", "re_m12", "im_m12", "re_m21", "im_m21", "re_m22", "im_m22",
];

/// 2×2 matrix values at a list of points.
pub fn write_matrix_evals_csv<W: Write>(points: &[Complex64], values: &[Mat2], w: W) -> Result<()> {
    if points.len() != values.len() {
        return Err(Error::InvalidInput("one matrix per point".into()));
    }
    let mut out = writer(w);
    out.write_record(MATRIX_HEADER).map_err(csv_err)?;
    for (z, m) in points.iter().zip(values) {
        let mut rec = vec![f64_str(z.re), f64_str(z.im)];
        for e in m.iter().flatten() {
            rec.push(f64_str(e.re));
            rec.push(f64_str(e.im));
        }
        out.write_record(rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_matrix_evals_csv<R: Read>(r: R) -> Result<(Vec<Complex64>, Vec<Mat2>)> {
    let (header, cols) = read_series_csv(r)?;
    expect_header(&header, &MATRIX_HEADER)?;
    let n = cols[0].len();
    let c = |k: usize, i: usize| Complex64::new(cols[k][i], cols[k + 1][i]);
    let points = (0..n).map(|i| c(0, i)).collect();
    let values = (0..n).map(|i| [[c(2, i), c(4, i)], [c(6, i), c(8, i)]]).collect();
    Ok((points, values))
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value).map_err(json_err)
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(json_err)
}

/// Writes bytes produced by `f` to `path`, creating parent directories.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut Vec<u8>) -> Result<()>,
{
    let mut buf = Vec::new();
    f(&mut buf)?;
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, buf)?;
    Ok(())
}

/// True when two moment tables agree exactly in every stored component.
pub fn moments_equal(a: &MomentData, b: &MomentData) -> bool {
    a.contour == b.contour
        && a.values.len() == b.values.len()
        && a.values.iter().zip(&b.values).all(|(x, y)| {
            let same = |p: Dd, q: Dd| p.hi == q.hi && p.lo == q.lo || (p.hi.is_zero() && q.hi.is_zero());
            same(x.re, y.re) && same(x.im, y.im)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{self, WeightSpec};
    use crate::opcircle;
    use crate::opline;
    use proptest::prelude::*;

    #[test]
    fn circle_moments_round_trip() {
        let m = measures::circle_moments(&WeightSpec::exp_cos(1.0), 12).unwrap();
        assert!(m.values.iter().any(|v| v.re.lo != 0.0));
        let mut buf = Vec::new();
        write_moments_csv(&m, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,re,im\n"));
        let back = read_moments_csv(&buf[..]).unwrap();
        assert!(moments_equal(&m, &back));
    }

    #[test]
    fn line_moments_round_trip() {
        let m = measures::line_moments(&WeightSpec::gauss(), 8).unwrap();
        let mut buf = Vec::new();
        write_moments_csv(&m, &mut buf).unwrap();
        assert!(buf.starts_with(b"j,m\n0,1.0\n1,0.0\n2,0.5\n"));
        assert!(moments_equal(&m, &read_moments_csv(&buf[..]).unwrap()));
    }

    #[test]
    fn tables_round_trip() {
        let rec = opline::recurrence_from_measure(&WeightSpec::gauss(), 6).unwrap();
        let mut buf = Vec::new();
        write_recurrence_csv(&rec, &mut buf).unwrap();
        assert_eq!(read_recurrence_csv(&buf[..]).unwrap(), rec);

        let m = measures::circle_moments(&WeightSpec::one_plus_cos(), 8).unwrap();
        let v = opcircle::verblunsky_levinson(&m, 8).unwrap();
        let mut buf = Vec::new();
        write_verblunsky_csv(&v, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("0,0.5,"));
        assert_eq!(read_verblunsky_csv(&buf[..]).unwrap(), v);

        let mu = DiscreteMeasure::new(vec![-1.0, 0.25, 3.0], vec![0.2, 0.3, 0.5]).unwrap();
        let mut buf = Vec::new();
        write_discrete_measure_csv(&mu, &mut buf).unwrap();
        assert_eq!(read_discrete_measure_csv(&buf[..]).unwrap(), mu);

        let err = vec![vec![0.0, 1e-300], vec![2.5e-17, 0.125]];
        let mut buf = Vec::new();
        write_decay_csv(&err, &mut buf).unwrap();
        assert_eq!(read_decay_csv(&buf[..]).unwrap(), err);
    }

    #[test]
    fn matrix_evaluations_round_trip() {
        let z = vec![Complex64::new(0.5, -2.0), Complex64::new(1e-9, 3.0)];
        let m: Vec<Mat2> = z.iter().map(|z| [[*z, z * z], [z.conj(), Complex64::new(0.1, 0.0)]]).collect();
        let mut buf = Vec::new();
        write_matrix_evals_csv(&z, &m, &mut buf).unwrap();
        assert_eq!(read_matrix_evals_csv(&buf[..]).unwrap(), (z, m));
    }

    #[test]
    fn json_reports_round_trip() {
        let j = opline::JacobiMatrix::new(vec![0.1, -0.2], vec![0.7]).unwrap();
        let text = to_json(&j).unwrap();
        assert!(text.contains("\"diag\""));
        assert_eq!(from_json::<opline::JacobiMatrix>(&text).unwrap(), j);
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(read_moments_csv(&b"k,re\n0,1\n"[..]).is_err());
        assert!(read_moments_csv(&b"j,m\n1,1\n"[..]).is_err());
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("e5").is_err());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("-1.25e-1").unwrap(), BigRational::new((-1).into(), 8.into()));
        assert_eq!(parse_decimal("300").unwrap(), BigRational::from_integer(300.into()));
    }

    proptest! {
        #[test]
        fn double_double_text_round_trips(hi in -1e30f64..1e30, frac in -0.49f64..0.49, e in -300i32..300) {
            prop_assume!(hi != 0.0);
            let hi = hi * 10f64.powi(e / 10);
            let lo = frac * hi.abs() * f64::EPSILON;
            let d = Dd::from_rational(&(Dd::from_f64(hi).to_rational() + Dd::from_f64(lo).to_rational()));
            let back = parse_dd(&dd_str(d)).unwrap();
            prop_assert_eq!((back.hi, back.lo), (d.hi, d.lo));
        }

        #[test]
        fn doubles_round_trip(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO) {
            prop_assert_eq!(parse_dd(&dd_str(Dd::from_f64(x))).unwrap().hi.to_bits(), x.to_bits());
        }
    }
}
