//! Exact rationals extended with `+∞`.
//!
//! Every submeasure value, hull value and degree in this crate is an
//! [`ExtendedRational`]. There is no `-∞` and no NaN: operations that would
//! need one panic, since they can only arise from a logic error.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::ParseRationalError;

/// Arbitrary-precision rational number.
pub type Rational = BigRational;

/// Builds `num/den` in lowest terms. Panics when `den == 0`.
pub fn ratio(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// An exact rational or `+∞`.
///
/// The derived ordering places every finite value below `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtendedRational {
    Finite(Rational),
    Infinity,
}

impl ExtendedRational {
    pub fn zero() -> Self {
        Self::Finite(Rational::zero())
    }

    pub fn one() -> Self {
        Self::Finite(Rational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::Finite(int(n))
    }

    /// `num/den` in lowest terms. Panics when `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::Finite(ratio(num, den))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Finite(r) if r.is_zero())
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Self::Finite(r) if r.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Self::Finite(r) => r.is_positive(),
            Self::Infinity => true,
        }
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            Self::Finite(r) => Some(r),
            Self::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<Rational> {
        match self {
            Self::Finite(r) => Some(r),
            Self::Infinity => None,
        }
    }

    /// `self - rhs`, or `None` when the result would be `∞ - ∞` or `-∞`.
    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        match (self, rhs) {
            (Self::Finite(a), Self::Finite(b)) => Some(Self::Finite(a - b)),
            (Self::Infinity, Self::Finite(_)) => Some(Self::Infinity),
            (_, Self::Infinity) => None,
        }
    }

    /// `self / rhs` for a positive finite divisor.
    pub fn div_finite(&self, rhs: &Rational) -> Self {
        assert!(rhs.is_positive(), "division by a non-positive rational");
        match self {
            Self::Finite(a) => Self::Finite(a / rhs),
            Self::Infinity => Self::Infinity,
        }
    }

    pub fn mul_finite(&self, rhs: &Rational) -> Self {
        self * &Self::Finite(rhs.clone())
    }
}

impl Default for ExtendedRational {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for ExtendedRational {
    fn from(r: Rational) -> Self {
        Self::Finite(r)
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<usize> for ExtendedRational {
    fn from(n: usize) -> Self {
        Self::Finite(BigRational::from_integer(BigInt::from(n)))
    }
}

impl PartialEq<Rational> for ExtendedRational {
    fn eq(&self, other: &Rational) -> bool {
        matches!(self, Self::Finite(r) if r == other)
    }
}

impl PartialOrd<Rational> for ExtendedRational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(match self {
            Self::Finite(r) => r.cmp(other),
            Self::Infinity => Ordering::Greater,
        })
    }
}

impl Add for &ExtendedRational {
    type Output = ExtendedRational;

    fn add(self, rhs: &ExtendedRational) -> ExtendedRational {
        match (self, rhs) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => ExtendedRational::Finite(a + b),
            _ => ExtendedRational::Infinity,
        }
    }
}

impl Add for ExtendedRational {
    type Output = ExtendedRational;

    fn add(self, rhs: ExtendedRational) -> ExtendedRational {
        match (self, rhs) {
            (ExtendedRational::Finite(a), ExtendedRational::Finite(b)) => ExtendedRational::Finite(a + b),
            _ => ExtendedRational::Infinity,
        }
    }
}

/// `0 · ∞ = 0`, as usual in measure theory.
impl Mul for &ExtendedRational {
    type Output = ExtendedRational;

    fn mul(self, rhs: &ExtendedRational) -> ExtendedRational {
        use ExtendedRational::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Finite(a * b),
            (Finite(a), Infinity) | (Infinity, Finite(a)) => {
                assert!(!a.is_negative(), "negative multiple of infinity");
                if a.is_zero() {
                    ExtendedRational::zero()
                } else {
                    Infinity
                }
            }
            (Infinity, Infinity) => Infinity,
        }
    }
}

impl Sum for ExtendedRational {
    fn sum<I: Iterator<Item = ExtendedRational>>(iter: I) -> Self {
        let mut acc = Rational::zero();
        for x in iter {
            match x {
                ExtendedRational::Finite(r) => acc += r,
                ExtendedRational::Infinity => return ExtendedRational::Infinity,
            }
        }
        ExtendedRational::Finite(acc)
    }
}

impl<'a> Sum<&'a ExtendedRational> for ExtendedRational {
    fn sum<I: Iterator<Item = &'a ExtendedRational>>(iter: I) -> Self {
        let mut acc = Rational::zero();
        for x in iter {
            match x {
                ExtendedRational::Finite(r) => acc += r,
                ExtendedRational::Infinity => return ExtendedRational::Infinity,
            }
        }
        ExtendedRational::Finite(acc)
    }
}

/// Canonical text form: `inf`, an integer `p`, or `p/q` in lowest terms with
/// the sign on the numerator.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => f.write_str(&format_rational(r)),
            Self::Infinity => f.write_str("inf"),
        }
    }
}

/// Parses `p`, `p/q` or `-p/q`. Whitespace, `+` signs and zero denominators
/// are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    fn parse_int(part: &str, whole: &str) -> Result<BigInt, ParseRationalError> {
        let digits = part.strip_prefix('-').unwrap_or(part);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseRationalError::Malformed(whole.to_string()));
        }
        part.parse::<BigInt>()
            .map_err(|_| ParseRationalError::Malformed(whole.to_string()))
    }
    if s.len() > 4096 {
        return Err(ParseRationalError::TooLong(s.len()));
    }
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s, s)?)),
        Some((num, den)) => {
            if den.starts_with('-') {
                return Err(ParseRationalError::Malformed(s.to_string()));
            }
            let num = parse_int(num, s)?;
            let den = parse_int(den, s)?;
            if den.is_zero() {
                return Err(ParseRationalError::ZeroDenominator(s.to_string()));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

impl FromStr for ExtendedRational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "inf" {
            Ok(Self::Infinity)
        } else {
            parse_rational(s).map(Self::Finite)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_places_infinity_last() {
        let mut v = vec![
            ExtendedRational::Infinity,
            ExtendedRational::frac(3, 2),
            ExtendedRational::frac(-1, 4),
            ExtendedRational::zero(),
        ];
        v.sort();
        assert_eq!(
            v,
            vec![
                ExtendedRational::frac(-1, 4),
                ExtendedRational::zero(),
                ExtendedRational::frac(3, 2),
                ExtendedRational::Infinity,
            ]
        );
    }

    #[test]
    fn canonical_strings() {
        assert_eq!(ExtendedRational::frac(6, 4).to_string(), "3/2");
        assert_eq!(ExtendedRational::frac(4, -6).to_string(), "-2/3");
        assert_eq!(ExtendedRational::from_int(5).to_string(), "5");
        assert_eq!(ExtendedRational::Infinity.to_string(), "inf");
    }

    #[test]
    fn parsing() {
        assert_eq!("3/2".parse::<ExtendedRational>().unwrap(), ExtendedRational::frac(3, 2));
        assert_eq!(
            "-4/6".parse::<ExtendedRational>().unwrap(),
            ExtendedRational::frac(-2, 3)
        );
        assert_eq!("inf".parse::<ExtendedRational>().unwrap(), ExtendedRational::Infinity);
        for bad in ["", "1/0", "1/-2", "+1", " 1", "1/", "/2", "a", "1.5", "--1", "Inf"] {
            assert!(bad.parse::<ExtendedRational>().is_err(), "{bad:?} accepted");
        }
    }

    #[test]
    fn infinity_arithmetic() {
        let inf = ExtendedRational::Infinity;
        let two = ExtendedRational::from_int(2);
        assert_eq!(&inf + &two, inf);
        assert_eq!(&inf * &ExtendedRational::zero(), ExtendedRational::zero());
        assert_eq!(&inf * &two, inf);
        assert_eq!(inf.checked_sub(&two), Some(ExtendedRational::Infinity));
        assert_eq!(two.checked_sub(&inf), None);
        assert_eq!(inf.checked_sub(&inf), None);
        let s: ExtendedRational = [two.clone(), ExtendedRational::frac(1, 2)].iter().sum();
        assert_eq!(s, ExtendedRational::frac(5, 2));
    }
}
