//! Exact rational arithmetic used everywhere values are compared.
//!
//! Decimal output is display-only and rounded outward, so no enclosure
//! ever depends on floating point.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::OrdcloseError;

/// An exact rational number, stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

/// Rounding direction for decimal rendering.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Up,
}

impl Rational {
    /// Builds `num / den`. Rejects a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, OrdcloseError> {
        let den = den.into();
        if den.is_zero() {
            return Err(OrdcloseError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Convenience for test fixtures and small constants.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "ratio with zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Exact integer power; negative exponents invert (zero base rejected).
    pub fn pow(&self, exp: i64) -> Result<Self, OrdcloseError> {
        if exp == 0 {
            return Ok(Self::one());
        }
        if self.is_zero() && exp < 0 {
            return Err(OrdcloseError::DivisionByZero);
        }
        let mag = self.0.pow(exp.unsigned_abs().try_into().expect("exponent fits u32"));
        Ok(if exp < 0 {
            Rational(mag.recip())
        } else {
            Rational(mag)
        })
    }

    pub fn recip(&self) -> Result<Self, OrdcloseError> {
        if self.is_zero() {
            return Err(OrdcloseError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    /// Midpoint of `self` and `other`.
    pub fn midpoint(&self, other: &Self) -> Self {
        Rational((&self.0 + &other.0) / BigRational::from_integer(BigInt::from(2)))
    }

    /// Largest integer `<= self`.
    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Renders `digits` decimal places, rounded in the given direction.
    ///
    /// The printed value is `<= self` for `Down` and `>= self` for `Up`,
    /// so a printed interval always contains the exact one.
    pub fn to_decimal(&self, digits: u32, dir: RoundDir) -> String {
        let scale = BigInt::from(10u32).pow(digits);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let (div, rem) = num::Integer::div_mod_floor(scaled.numer(), scaled.denom());
        // div_mod_floor gives floor semantics; bump for Up when inexact.
        let units = match dir {
            RoundDir::Down => div,
            RoundDir::Up => {
                if rem.is_zero() {
                    div
                } else {
                    div + 1
                }
            }
        };
        let neg = units.sign() == Sign::Minus;
        let mag = units.magnitude().to_string();
        let mut s = String::new();
        if neg {
            s.push('-');
        }
        if digits == 0 {
            s.push_str(&mag);
            return s;
        }
        let d = digits as usize;
        if mag.len() <= d {
            s.push_str("0.");
            for _ in 0..(d - mag.len()) {
                s.push('0');
            }
            s.push_str(&mag);
        } else {
            let (int_part, frac_part) = mag.split_at(mag.len() - d);
            s.push_str(int_part);
            s.push('.');
            s.push_str(frac_part);
        }
        s
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = OrdcloseError;

    /// Accepts `p/q`, integers, plain decimals (`0.25`), and scientific
    /// notation (`1e-9`, `2.5e3`), all parsed exactly.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(OrdcloseError::ParseRational(s.to_string()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let n: BigInt = num
                .trim()
                .parse()
                .map_err(|_| OrdcloseError::ParseRational(s.to_string()))?;
            let d: BigInt = den
                .trim()
                .parse()
                .map_err(|_| OrdcloseError::ParseRational(s.to_string()))?;
            return Rational::new(n, d);
        }
        let (mantissa, exp10) = match s.split_once(['e', 'E']) {
            Some((m, e)) => {
                let exp: i64 = e
                    .parse()
                    .map_err(|_| OrdcloseError::ParseRational(s.to_string()))?;
                (m, exp)
            }
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((i, fr)) => (i, fr),
            None => (mantissa, ""),
        };
        let mut digits = String::new();
        digits.push_str(int_part);
        digits.push_str(frac_part);
        if digits.is_empty() || digits == "-" || digits == "+" {
            return Err(OrdcloseError::ParseRational(s.to_string()));
        }
        let n: BigInt = digits
            .parse()
            .map_err(|_| OrdcloseError::ParseRational(s.to_string()))?;
        let shift = exp10 - frac_part.len() as i64;
        let ten = BigInt::from(10);
        let val = if shift >= 0 {
            BigRational::from_integer(n * ten.pow(shift as u32))
        } else {
            BigRational::new(n, ten.pow((-shift) as u32))
        };
        Ok(Rational(val))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A rational extended with `+inf`, the value range of measures.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn zero() -> Self {
        ExtRational::Finite(Rational::zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }
}

impl From<Rational> for ExtRational {
    fn from(q: Rational) -> Self {
        ExtRational::Finite(q)
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

impl Add for ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl Add<&ExtRational> for &ExtRational {
    type Output = ExtRational;
    fn add(self, rhs: &ExtRational) -> ExtRational {
        match (self, rhs) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => ExtRational::Finite(a + b),
            _ => ExtRational::Infinity,
        }
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(q) => write!(f, "{}", q),
            ExtRational::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s.trim() == "inf" {
            return Ok(ExtRational::Infinity);
        }
        s.parse().map(ExtRational::Finite).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stored_in_lowest_terms_with_positive_denominator() {
        let q = Rational::new(4, -6).unwrap();
        assert_eq!(q.numer(), &BigInt::from(-2));
        assert_eq!(q.denom(), &BigInt::from(3));
        assert_eq!(q.to_string(), "-2/3");
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn parses_fractions_decimals_and_scientific() {
        assert_eq!("3/4".parse::<Rational>().unwrap(), Rational::ratio(3, 4));
        assert_eq!("-7".parse::<Rational>().unwrap(), Rational::int(-7));
        assert_eq!("0.25".parse::<Rational>().unwrap(), Rational::ratio(1, 4));
        assert_eq!(
            "1e-9".parse::<Rational>().unwrap(),
            Rational::new(1, 1_000_000_000).unwrap()
        );
        assert_eq!("2.5e3".parse::<Rational>().unwrap(), Rational::int(2500));
        assert!("".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
    }

    #[test]
    fn pow_handles_negative_exponents() {
        let q = Rational::ratio(2, 3);
        assert_eq!(q.pow(2).unwrap(), Rational::ratio(4, 9));
        assert_eq!(q.pow(-1).unwrap(), Rational::ratio(3, 2));
        assert_eq!(q.pow(0).unwrap(), Rational::one());
        assert!(Rational::zero().pow(-2).is_err());
    }

    #[test]
    fn outward_decimal_rounding() {
        let third = Rational::ratio(1, 3);
        assert_eq!(third.to_decimal(3, RoundDir::Down), "0.333");
        assert_eq!(third.to_decimal(3, RoundDir::Up), "0.334");
        let neg = Rational::ratio(-1, 3);
        assert_eq!(neg.to_decimal(3, RoundDir::Down), "-0.334");
        assert_eq!(neg.to_decimal(3, RoundDir::Up), "-0.333");
        // Exact values print exactly in both directions.
        let exact = Rational::ratio(1, 4);
        assert_eq!(exact.to_decimal(2, RoundDir::Down), "0.25");
        assert_eq!(exact.to_decimal(2, RoundDir::Up), "0.25");
    }

    #[test]
    fn ext_rational_orders_infinity_last() {
        let fin = ExtRational::Finite(Rational::int(1_000_000));
        assert!(fin < ExtRational::Infinity);
        assert_eq!(
            ExtRational::Infinity + ExtRational::Finite(Rational::int(-5)),
            ExtRational::Infinity
        );
    }

    #[test]
    fn serde_round_trips_exactly() {
        let q = Rational::ratio(-22, 7);
        let js = serde_json::to_string(&q).unwrap();
        assert_eq!(js, "\"-22/7\"");
        let back: Rational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, q);
        let inf = ExtRational::Infinity;
        let js = serde_json::to_string(&inf).unwrap();
        let back: ExtRational = serde_json::from_str(&js).unwrap();
        assert_eq!(back, inf);
    }
}
