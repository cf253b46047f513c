//! Numeric backends.
//!
//! Every algebraic routine is generic over [`Scalar`]. Two backends exist:
//! [`Exact`] (arbitrary-precision rationals, used wherever an identity has to
//! hold with no rounding) and `f64` (used for Monte-Carlo sampling).

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar.
pub type Exact = BigRational;

/// Absolute tolerance for float comparisons.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialOrd
    + Send
    + Sync
    + Signed
    + FromPrimitive
    + ToPrimitive
    + 'static
{
    /// `true` when arithmetic never rounds.
    const EXACT: bool;

    fn from_int(v: i64) -> Self;

    fn from_frac(num: i64, den: i64) -> Self;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn mul_ref(&self, rhs: &Self) -> Self;

    fn add_assign_ref(&mut self, rhs: &Self);

    fn sub_assign_ref(&mut self, rhs: &Self);

    /// `self += sign * a * b`
    fn fma_signed(&mut self, sign: bool, a: &Self, b: &Self) {
        let prod = a.mul_ref(b);
        if sign {
            self.sub_assign_ref(&prod);
        } else {
            self.add_assign_ref(&prod);
        }
    }

    /// Equality for exact scalars, `|a - b| <= tol` otherwise.
    fn near(&self, other: &Self, tol: f64) -> bool;

    /// Exact equality, or `|a - b| <= tol * max(1, |a|, |b|)` for floats.
    fn near_rel(&self, other: &Self, tol: f64) -> bool;
}

impl Scalar for Exact {
    const EXACT: bool = true;

    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn near(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn near_rel(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn sub_assign_ref(&mut self, rhs: &Self) {
        *self -= rhs;
    }

    fn near(&self, other: &Self, tol: f64) -> bool {
        (self - other).abs() <= tol
    }

    fn near_rel(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= tol * scale
    }
}

/// `k!` in the scalar backend.
pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k as i64).fold(S::one(), |acc, i| acc * S::from_int(i))
}

/// Integer power with a possibly negative exponent.
pub fn powi<S: Scalar>(base: &S, exp: i32) -> S {
    let mut out = S::one();
    for _ in 0..exp.unsigned_abs() {
        out = out.mul_ref(base);
    }
    if exp < 0 {
        S::one() / out
    } else {
        out
    }
}

/// Parses `"a"`, `"a/b"` or a finite decimal such as `"-0.25"` or `"1e-3"`
/// into an exact rational.
pub fn parse_exact(text: &str) -> Result<Exact> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim())
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let den = BigInt::from_str(den.trim())
            .map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("{s:?}: zero denominator")));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Ok(i) = BigInt::from_str(s) {
        return Ok(BigRational::from_integer(i));
    }
    parse_decimal(s)
}

fn parse_decimal(s: &str) -> Result<Exact> {
    let bad = || Error::Parse(format!("{s:?} is not a rational or decimal number"));
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut value = BigRational::from_integer(BigInt::from_str(&digits).map_err(|_| bad())?);
    let shift = exponent - frac_part.len() as i32;
    let ten = Exact::from_int(10);
    value *= powi(&ten, shift);
    if negative {
        value = -value;
    }
    Ok(value)
}

/// `"num/den"` (or `"num"` for integers).
pub fn format_exact(value: &Exact) -> String {
    if value.denom().is_one() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Nearest exact rational to a finite float (binary expansion, no rounding).
pub fn exact_from_f64(value: f64) -> Result<Exact> {
    BigRational::from_float(value)
        .ok_or_else(|| Error::InvalidParameter(format!("{value} is not finite")))
}
