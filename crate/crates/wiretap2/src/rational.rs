//! Exact rational scalars.
//!
//! Every rate, capacity and allocation in this crate is a [`Rational`]:
//! arbitrary-precision, always stored reduced with a positive denominator,
//! and compared exactly. Nothing in the crate ever rounds.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

/// An exact rational number.
///
/// Backed by [`num_rational::BigRational`], which keeps the invariants this
/// crate relies on: the stored fraction is reduced and the denominator is
/// positive, so equality and ordering are exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    /// `numer / denom`. Panics if `denom == 0`.
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
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

    /// `self * n`, which must come out an integer (n a multiple of the
    /// denominator). Returns `None` otherwise.
    pub fn scaled_to_integer(&self, n: &BigInt) -> Option<BigInt> {
        let scaled = &self.0 * BigRational::from_integer(n.clone());
        if scaled.is_integer() {
            Some(scaled.to_integer())
        } else {
            None
        }
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.0.to_integer().to_u64()
        } else {
            None
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

impl From<u64> for Rational {
    fn from(n: u64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }
}

/// Least common multiple of the denominators, i.e. the smallest positive
/// integer `n` with `n * x` integral for every `x` in the slice.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(values: I) -> BigInt {
    let mut acc = BigInt::one();
    for v in values {
        acc = acc.lcm(v.denom());
    }
    acc
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Failed to parse a rational from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(pub String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?}: expected \"p\" or \"p/q\"", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    /// Accepts `"p"` or `"p/q"` with optional sign on the numerator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let err = || ParseRationalError(s.to_string());
        match s.split_once('/') {
            None => {
                let n = BigInt::from_str(s).map_err(|_| err())?;
                Ok(Rational::from_bigint(n))
            }
            Some((num, den)) => {
                let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
                let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Rational(BigRational::new(n, d)))
            }
        }
    }
}

// Wire format: a bare JSON number when the value is an integer that fits in
// i64, otherwise the string "p/q". Deserialization accepts either form.
impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integer() {
            if let Some(n) = self.numer().to_i64() {
                return serializer.serialize_i64(n);
            }
        }
        serializer.serialize_str(&self.to_string())
    }
}

struct RationalVisitor;

impl Visitor<'_> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a \"p/q\" string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        v.parse().map_err(|e: ParseRationalError| de::Error::custom(e))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        deserializer.deserialize_any(RationalVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn stored_reduced_with_positive_denominator() {
        let x = r(2, -4);
        assert_eq!(x.numer(), &BigInt::from(-1));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(r(6, 3), Rational::from(2i64));
    }

    #[test]
    fn arithmetic_round_trips_exactly() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..500 {
            let a = r(rng.next_range(2001) as i64 - 1000, 1 + rng.next_range(40) as i64);
            let b = r(rng.next_range(2001) as i64 - 1000, 1 + rng.next_range(40) as i64);
            assert_eq!(&(&a + &b) - &b, a);
            if !b.is_zero() {
                assert_eq!(&(&a * &b) / &b, a);
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("3/2".parse::<Rational>().unwrap(), r(3, 2));
        assert_eq!("-1/3".parse::<Rational>().unwrap(), r(-1, 3));
        assert_eq!("7".parse::<Rational>().unwrap(), Rational::from(7i64));
        assert_eq!(" 4 / 6 ".parse::<Rational>().unwrap(), r(2, 3));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
        assert_eq!(r(-1, 2).to_string(), "-1/2");
        assert_eq!(r(8, 4).to_string(), "2");
    }

    #[test]
    fn json_round_trip() {
        let vals = vec![r(1, 2), Rational::from(5i64), r(-7, 3)];
        let js = serde_json::to_string(&vals).unwrap();
        assert_eq!(js, r#"["1/2",5,"-7/3"]"#);
        let back: Vec<Rational> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, vals);
    }

    #[test]
    fn denominator_lcm_is_minimal() {
        let vals = vec![r(1, 2), r(2, 3), Rational::from(4i64)];
        assert_eq!(denominator_lcm(&vals), BigInt::from(6));
        assert_eq!(denominator_lcm([].iter()), BigInt::one());
    }

    #[test]
    fn scaled_to_integer() {
        assert_eq!(r(2, 3).scaled_to_integer(&BigInt::from(3)), Some(BigInt::from(2)));
        assert_eq!(r(2, 3).scaled_to_integer(&BigInt::from(2)), None);
    }
}
