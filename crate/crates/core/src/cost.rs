//! Exact rational cost arithmetic.
//!
//! Every quantitative guarantee in the pipelines (cover bounds, thinning
//! bounds, approximation ratios) is asserted with zero tolerance, so costs
//! are big rationals end to end and never touch floating point.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Sub, SubAssign};
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Cost(BigRational);

impl Default for Cost {
    fn default() -> Self {
        Cost::zero()
    }
}

impl Cost {
    pub fn zero() -> Self {
        Cost(BigRational::zero())
    }

    pub fn one() -> Self {
        Cost(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Cost(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Cost(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Exact integer power, used for cost-class boundaries (1+lambda)^i.
    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Cost::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
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

    /// Lossy conversion for report output only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Cost {
    fn from(r: BigRational) -> Self {
        Cost(r)
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Cost {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let n = BigInt::from_str(num.trim()).map_err(|e| e.to_string())?;
            let d = BigInt::from_str(den.trim()).map_err(|e| e.to_string())?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            Ok(Cost(BigRational::new(n, d)))
        } else {
            let n = BigInt::from_str(s).map_err(|e| e.to_string())?;
            Ok(Cost(BigRational::from_integer(n)))
        }
    }
}

impl Add for &Cost {
    type Output = Cost;
    fn add(self, rhs: &Cost) -> Cost {
        Cost(&self.0 + &rhs.0)
    }
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost(self.0 + rhs.0)
    }
}

impl AddAssign<&Cost> for Cost {
    fn add_assign(&mut self, rhs: &Cost) {
        self.0 += &rhs.0;
    }
}

impl Sub for &Cost {
    type Output = Cost;
    fn sub(self, rhs: &Cost) -> Cost {
        Cost(&self.0 - &rhs.0)
    }
}

impl SubAssign<&Cost> for Cost {
    fn sub_assign(&mut self, rhs: &Cost) {
        self.0 -= &rhs.0;
    }
}

impl Mul for &Cost {
    type Output = Cost;
    fn mul(self, rhs: &Cost) -> Cost {
        Cost(&self.0 * &rhs.0)
    }
}

impl Mul<i64> for &Cost {
    type Output = Cost;
    fn mul(self, rhs: i64) -> Cost {
        Cost(&self.0 * BigRational::from_integer(BigInt::from(rhs)))
    }
}

impl Div for &Cost {
    type Output = Cost;
    fn div(self, rhs: &Cost) -> Cost {
        assert!(!rhs.is_zero(), "division by zero cost");
        Cost(&self.0 / &rhs.0)
    }
}

impl Sum for Cost {
    fn sum<I: Iterator<Item = Cost>>(iter: I) -> Cost {
        let mut acc = Cost::zero();
        for c in iter {
            acc += &c;
        }
        acc
    }
}

impl<'a> Sum<&'a Cost> for Cost {
    fn sum<I: Iterator<Item = &'a Cost>>(iter: I) -> Cost {
        let mut acc = Cost::zero();
        for c in iter {
            acc += c;
        }
        acc
    }
}

impl Serialize for Cost {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            if let Some(v) = self.0.numer().to_i64() {
                return serializer.serialize_i64(v);
            }
        }
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Cost {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct CostVisitor;
        impl de::Visitor<'_> for CostVisitor {
            type Value = Cost;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a \"p/q\" rational string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Cost, E> {
                Ok(Cost::from_int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Cost, E> {
                Ok(Cost(BigRational::from_integer(BigInt::from(v))))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Cost, E> {
                Cost::from_str(v).map_err(de::Error::custom)
            }
        }
        deserializer.deserialize_any(CostVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3", "3/2", "-7/5", "0"] {
            let c: Cost = s.parse().unwrap();
            assert_eq!(c.to_string(), s);
        }
    }

    #[test]
    fn exact_arithmetic() {
        let third = Cost::ratio(1, 3);
        let sum: Cost = (0..3).map(|_| third.clone()).sum();
        assert_eq!(sum, Cost::one());
        assert_eq!(Cost::ratio(7, 6).pow(2), Cost::ratio(49, 36));
    }

    #[test]
    fn serde_accepts_numbers_and_strings() {
        let c: Cost = serde_json::from_str("5").unwrap();
        assert_eq!(c, Cost::from_int(5));
        let c: Cost = serde_json::from_str("\"5/2\"").unwrap();
        assert_eq!(c, Cost::ratio(5, 2));
        assert_eq!(serde_json::to_string(&Cost::from_int(5)).unwrap(), "5");
        assert_eq!(serde_json::to_string(&Cost::ratio(5, 2)).unwrap(), "\"5/2\"");
    }
}
