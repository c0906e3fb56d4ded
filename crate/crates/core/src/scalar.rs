//! Numeric backends shared by every module.
//!
//! Identity checks run in exact arithmetic (`Q` for real rational parameters,
//! `GaussQ` for complex rational ones); everything involving transcendental
//! functions runs in `f64` / `Complex64`. The [`Scalar`] trait lets the
//! combinatorial formulas (z-measure weights, Frobenius–Schur expectations,
//! determinants) be written once for all four backends.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational.
pub type Q = BigRational;
/// Exact Gaussian rational `p + q i`.
pub type GaussQ = Complex<BigRational>;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // numerator/denominator individually out of range
        let (n, d) = (x.numer(), x.denom());
        let shift = n.bits().max(d.bits()) as i64 - 900;
        let shift = shift.max(0) as usize;
        let nf = (n >> shift).to_f64().unwrap_or(f64::NAN);
        let df = (d >> shift).to_f64().unwrap_or(f64::NAN);
        nf / df
    })
}

/// Field-like scalar used by the generic combinatorial formulas.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// Converts an exact Gaussian rational; `None` when the backend is real
    /// and the value has a nonzero imaginary part.
    fn from_gauss(z: &GaussQ) -> Option<Self>;

    fn to_c64(&self) -> Complex64;

    /// Magnitude used for pivoting and residual reporting.
    fn magnitude(&self) -> f64;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    fn from_q(x: &Q) -> Self {
        Self::from_gauss(&GaussQ::new(x.clone(), Q::zero())).expect("real value")
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    fn from_i64(n: i64) -> Self {
        qi(n)
    }
    fn from_gauss(z: &GaussQ) -> Option<Self> {
        z.im.is_zero().then(|| z.re.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(self), 0.0)
    }
    fn magnitude(&self) -> f64 {
        q_to_f64(&self.abs())
    }
}

impl Scalar for GaussQ {
    const EXACT: bool = true;
    fn from_i64(n: i64) -> Self {
        GaussQ::new(qi(n), Q::zero())
    }
    fn from_gauss(z: &GaussQ) -> Option<Self> {
        Some(z.clone())
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(q_to_f64(&self.re), q_to_f64(&self.im))
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn from_gauss(z: &GaussQ) -> Option<Self> {
        z.im.is_zero().then(|| q_to_f64(&z.re))
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn from_gauss(z: &GaussQ) -> Option<Self> {
        Some(Complex64::new(q_to_f64(&z.re), q_to_f64(&z.im)))
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Square matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub n: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.n + j]
    }

    /// Determinant by Gaussian elimination with magnitude pivoting. The empty
    /// matrix has determinant 1.
    pub fn det(&self) -> S {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = S::one();
        for col in 0..n {
            let mut pivot = None;
            let mut best = -1.0;
            for row in col..n {
                let v = &a[row * n + col];
                if v.is_zero() {
                    continue;
                }
                let m = v.magnitude();
                if m > best {
                    best = m;
                    pivot = Some(row);
                }
            }
            let Some(p) = pivot else {
                return S::zero();
            };
            if p != col {
                for j in 0..n {
                    a.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = a[col * n + col].clone();
            det = det * piv.clone();
            for row in col + 1..n {
                let factor = a[row * n + col].clone() / piv.clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let upd = a[row * n + j].clone() - factor.clone() * a[col * n + j].clone();
                    a[row * n + j] = upd;
                }
            }
        }
        det
    }
}

pub fn det<S: Scalar>(n: usize, f: impl FnMut(usize, usize) -> S) -> S {
    Matrix::from_fn(n, f).det()
}

/// Parses an exact decimal or fraction: `"1/2"`, `"-3"`, `"0.25"`, `"1e-3"`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not an exact rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_rational(n)?;
        let d = parse_rational(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(n / d);
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut v = Q::from_integer(num);
    if scale >= 0 {
        v *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        v /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -v } else { v })
}

/// Parses an exact complex parameter: `"1/2"`, `"0.5+1i"`, `"-2i"`, `"1/3-0.5i"`.
pub fn parse_gauss(s: &str) -> Result<GaussQ> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = t.strip_suffix('i').or_else(|| t.strip_suffix('j')) else {
        return Ok(GaussQ::new(parse_rational(&t)?, Q::zero()));
    };
    // split at the last sign that is not at position 0 and not after an exponent marker
    let bytes = body.as_bytes();
    let mut split = None;
    for i in (1..bytes.len()).rev() {
        if (bytes[i] == b'+' || bytes[i] == b'-') && !matches!(bytes[i - 1], b'e' | b'E') {
            split = Some(i);
            break;
        }
    }
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    Ok(GaussQ::new(parse_rational(re)?, parse_rational(im)?))
}

/// Renders an exact rational as `"p/q"` (or `"p"` for integers).
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_gauss(z: &GaussQ) -> String {
    if z.im.is_zero() {
        return fmt_q(&z.re);
    }
    let sign = if z.im.is_negative() { "-" } else { "+" };
    format!("{}{}{}i", fmt_q(&z.re), sign, fmt_q(&z.im.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_exact_strings() {
        assert_eq!(parse_rational("1/2").unwrap(), q(1, 2));
        assert_eq!(parse_rational("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_rational("-3").unwrap(), qi(-3));
        assert_eq!(parse_rational("1e-3").unwrap(), q(1, 1000));
        assert_eq!(parse_rational("2.5e1").unwrap(), qi(25));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1/0").is_err());
        let z = parse_gauss("0.5+1i").unwrap();
        assert_eq!(z, GaussQ::new(q(1, 2), qi(1)));
        assert_eq!(parse_gauss("1/2-i").unwrap(), GaussQ::new(q(1, 2), qi(-1)));
        assert_eq!(parse_gauss("-2i").unwrap(), GaussQ::new(qi(0), qi(-2)));
        assert_eq!(parse_gauss("1/3").unwrap(), GaussQ::new(q(1, 3), qi(0)));
        assert_eq!(fmt_gauss(&parse_gauss("1/2-1i").unwrap()), "1/2-1i");
    }

    #[test]
    fn determinants_agree_across_backends() {
        let entries = [[2, -1, 0], [1, 3, 4], [0, 5, -2]];
        let exact: Q = det(3, |i, j| qi(entries[i][j]));
        let float: f64 = det(3, |i, j| entries[i][j] as f64);
        assert_eq!(exact, qi(-54));
        assert!((float + 54.0).abs() < 1e-12);
        let empty: Q = det(0, |_, _| unreachable!());
        assert_eq!(empty, Q::one());
        let singular: Q = det(2, |i, _| qi(i as i64 + 1));
        assert!(singular.is_zero());
    }
}
