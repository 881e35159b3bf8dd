//! Scalar fields used throughout the crate.
//!
//! Everything that builds matrices or Fock vectors is generic over [`Scalar`], which is
//! implemented for double-precision complex numbers ([`C64`]) and for Gaussian rationals
//! ([`GaussRat`], pairs of arbitrary-precision rationals). The exact field is what the
//! identity-level checks run on: every entry of a Gram block is a polynomial in the
//! parameters, so evaluating at rational points gives equality instead of tolerance.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub type C64 = Complex<f64>;
pub type GaussRat = Complex<BigRational>;

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
    /// True for fields where arithmetic is exact.
    const EXACT: bool;

    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_c64(v: C64) -> Self;
    fn to_c64(&self) -> C64;
    /// Modulus as a float; used for pivoting and residuals only.
    fn magnitude(&self) -> f64;
    /// Exact test of `|z| < 1`.
    fn modulus_lt_one(&self) -> bool;
    fn is_real(&self) -> bool;

    fn norm_sqr(&self) -> Self {
        self.clone() * self.conj()
    }

    fn powi(&self, exp: i32) -> Self {
        let mut base = if exp < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

fn canon_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn from_c64(v: C64) -> Self {
        v
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn modulus_lt_one(&self) -> bool {
        self.norm_sqr() < 1.0
    }
    fn is_real(&self) -> bool {
        canon_zero(self.im) == 0.0
    }
}

impl Scalar for GaussRat {
    const EXACT: bool = true;

    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }
    fn from_c64(v: C64) -> Self {
        Complex::new(rational_from_f64(v.re), rational_from_f64(v.im))
    }
    fn to_c64(&self) -> C64 {
        C64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn modulus_lt_one(&self) -> bool {
        let n = &self.re * &self.re + &self.im * &self.im;
        n < BigRational::one()
    }
    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

/// Converts a float to the rational its shortest decimal representation denotes,
/// so `0.3` becomes `3/10` rather than the nearest binary fraction.
pub fn rational_from_f64(x: f64) -> BigRational {
    parse_rational(&format!("{x}")).unwrap_or_else(|| {
        BigRational::from_float(x).unwrap_or_else(BigRational::zero)
    })
}

/// Parses `"p/q"`, integers and plain decimals such as `"-0.125"` or `"1e-3"`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).ok()?;
        let d = BigInt::from_str(d.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(p) => (&s[..p], s[p + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    if !all.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mut num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    if neg {
        num = -num;
    }
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Rendering of a real component for JSON output: floats stay floats, rationals
/// become `"p/q"` strings so no precision is lost.
pub trait RealRepr {
    fn to_json(&self) -> serde_json::Value;
}

impl RealRepr for f64 {
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(canon_zero(*self))
    }
}

impl RealRepr for BigRational {
    fn to_json(&self) -> serde_json::Value {
        if self.is_integer() {
            serde_json::Value::String(self.numer().to_string())
        } else {
            serde_json::Value::String(format!("{}/{}", self.numer(), self.denom()))
        }
    }
}

/// `[re, im]` JSON pair for any scalar.
pub trait ToJsonPair {
    fn to_json_pair(&self) -> serde_json::Value;
}

impl<T: RealRepr> ToJsonPair for Complex<T> {
    fn to_json_pair(&self) -> serde_json::Value {
        serde_json::Value::Array(vec![self.re.to_json(), self.im.to_json()])
    }
}

pub fn gauss(re: (i64, i64), im: (i64, i64)) -> GaussRat {
    Complex::new(
        BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
        BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
    )
}
