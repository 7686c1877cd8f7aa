//! Scalar abstraction: exact rationals and binary64 floats behind one trait.
//!
//! Every geometric routine in this crate is generic over [`Scalar`], so a
//! computation is either entirely exact (structural claims become identity
//! tests) or entirely floating point (comparisons use a relative
//! tolerance). Mixing the two modes in one computation is a compile error.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default relative tolerance for float-mode comparisons.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Which arithmetic a scalar type provides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScalarMode {
    Rational,
    Float,
}

impl fmt::Display for ScalarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarMode::Rational => write!(f, "rational"),
            ScalarMode::Float => write!(f, "float"),
        }
    }
}

/// Field operations plus the handful of mode-aware comparisons the geometry
/// needs. Implemented by [`Rational`] (exact) and `f64` (binary64).
pub trait Scalar:
    Clone
    + PartialEq
    + PartialOrd
    + fmt::Debug
    + fmt::Display
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn mode() -> ScalarMode;
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    /// Exact quotient of two machine integers. `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn abs(&self) -> Self;
    fn to_f64(&self) -> f64;
    /// Exact square root when one exists in the scalar's own field.
    fn try_sqrt(&self) -> Option<Self>;
    /// Mode-aware equality. Exact in rational mode; in float mode
    /// `|a - b| <= tol * (1 + max(|a|, |b|))`.
    fn eq_within(&self, other: &Self, tol: f64) -> bool;
    /// Mode-aware zero test against a squared magnitude scale:
    /// exact in rational mode, `self^2 <= tol^2 * scale_sq` in float mode.
    fn is_zero_vs_scale_sq(&self, scale_sq: &Self, tol: f64) -> bool;
    /// Smallest integer >= self, as a machine integer.
    fn ceil_int(&self) -> i64;
    /// Parse from the serialized form (`"p/q"`/`"p"` for rationals,
    /// decimal text for floats).
    fn parse(text: &str) -> Result<Self>;
    /// Canonical serialized form; parsing it back is exact.
    fn format_exact(&self) -> String;
}

/// Arbitrary-precision rational number, always reduced with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Rational> {
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_exact())
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_exact())
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational(self.0 * rhs.0)
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.0.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

/// Exact integer square root check: returns the root when `n` is a perfect
/// square of a nonnegative integer.
fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let root = n.sqrt();
    if &root.clone() * &root == *n {
        Some(root)
    } else {
        None
    }
}

impl Scalar for Rational {
    fn mode() -> ScalarMode {
        ScalarMode::Rational
    }

    fn zero() -> Self {
        Rational(BigRational::zero())
    }

    fn one() -> Self {
        Rational(BigRational::one())
    }

    fn from_int(v: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    fn try_sqrt(&self) -> Option<Self> {
        let n = perfect_sqrt(self.0.numer())?;
        let d = perfect_sqrt(self.0.denom())?;
        Some(Rational(BigRational::new(n, d)))
    }

    fn eq_within(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn is_zero_vs_scale_sq(&self, _scale_sq: &Self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn ceil_int(&self) -> i64 {
        let ceil = self.0.ceil().to_integer();
        ceil.to_i64().unwrap_or(if ceil.is_negative() {
            i64::MIN
        } else {
            i64::MAX
        })
    }

    fn parse(text: &str) -> Result<Self> {
        parse_rational(text)
    }

    fn format_exact(&self) -> String {
        if self.0.denom().is_one() {
            format!("{}", self.0.numer())
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

/// Accepts `"p/q"`, plain integers, and exact decimal notation (`"0.25"`).
fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim())
            .map_err(|e| Error::Parse(format!("bad numerator {num:?}: {e}")))?;
        let d = BigInt::from_str(den.trim())
            .map_err(|e| Error::Parse(format!("bad denominator {den:?}: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational(BigRational::new(n, d)));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let sign = if int.trim_start().starts_with('-') { -1 } else { 1 };
        let int_part = BigInt::from_str(int.trim())
            .map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal {s:?}")));
        }
        let frac_num = BigInt::from_str(frac)
            .map_err(|e| Error::Parse(format!("bad decimal {s:?}: {e}")))?;
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_rat = BigRational::new(frac_num * sign, den);
        return Ok(Rational(BigRational::from_integer(int_part) + frac_rat));
    }
    let n = BigInt::from_str(s).map_err(|e| Error::Parse(format!("bad rational {s:?}: {e}")))?;
    Ok(Rational(BigRational::from_integer(n)))
}

impl Scalar for f64 {
    fn mode() -> ScalarMode {
        ScalarMode::Float
    }

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn from_int(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        num as f64 / den as f64
    }

    fn is_zero(&self) -> bool {
        *self == 0.0
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn try_sqrt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(f64::sqrt(*self))
        } else {
            None
        }
    }

    fn eq_within(&self, other: &Self, tol: f64) -> bool {
        let diff = f64::abs(self - other);
        diff <= tol * (1.0 + f64::abs(*self).max(f64::abs(*other)))
    }

    fn is_zero_vs_scale_sq(&self, scale_sq: &Self, tol: f64) -> bool {
        self * self <= tol * tol * scale_sq.max(0.0)
    }

    fn ceil_int(&self) -> i64 {
        f64::ceil(*self) as i64
    }

    fn parse(text: &str) -> Result<Self> {
        let s = text.trim();
        // Allow "p/q" in float mode too; handy when reusing rational inputs.
        if let Some((num, den)) = s.split_once('/') {
            let n: f64 = num
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad float {s:?}: {e}")))?;
            let d: f64 = den
                .trim()
                .parse()
                .map_err(|e| Error::Parse(format!("bad float {s:?}: {e}")))?;
            if d == 0.0 {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(n / d);
        }
        s.parse()
            .map_err(|e| Error::Parse(format!("bad float {s:?}: {e}")))
    }

    fn format_exact(&self) -> String {
        format!("{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_form_is_reduced_with_positive_denominator() {
        let x = r(4, -6);
        assert_eq!(x.format_exact(), "-2/3");
        assert_eq!(x, r(-2, 3));
        assert_eq!(r(7, 1).format_exact(), "7");
    }

    #[test]
    fn rational_addition_is_exact() {
        // (a/b) + (c/d) == (ad + bc)/(bd)
        let sum = r(1, 3) + r(1, 6);
        assert_eq!(sum, r(1, 2));
        let sum = r(-7, 12) + r(7, 12);
        assert!(sum.is_zero());
    }

    #[test]
    fn parse_and_format_round_trip() {
        for text in ["3/4", "-3/4", "17", "-17", "0"] {
            let x = Rational::parse(text).unwrap();
            assert_eq!(x.format_exact(), text);
        }
        assert_eq!(Rational::parse("6/8").unwrap().format_exact(), "3/4");
        assert_eq!(Rational::parse("0.25").unwrap(), r(1, 4));
        assert_eq!(Rational::parse("-1.5").unwrap(), r(-3, 2));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("abc").is_err());
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(r(9, 25).try_sqrt(), Some(r(3, 5)));
        assert_eq!(r(4, 1).try_sqrt(), Some(r(2, 1)));
        assert_eq!(r(2, 1).try_sqrt(), None);
        assert_eq!(r(-4, 1).try_sqrt(), None);
    }

    #[test]
    fn float_tolerance_comparison() {
        assert!(1.0f64.eq_within(&(1.0 + 1e-12), 1e-10));
        assert!(!1.0f64.eq_within(&1.001, 1e-10));
        assert!(0.0f64.eq_within(&1e-11, 1e-10));
    }

    #[test]
    fn ceil_int_rounds_up() {
        assert_eq!(r(5, 2).ceil_int(), 3);
        assert_eq!(r(-5, 2).ceil_int(), -2);
        assert_eq!(2.5f64.ceil_int(), 3);
    }
}
