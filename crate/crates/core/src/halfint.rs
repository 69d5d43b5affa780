//! Exponents measured in half-units.

use core::fmt;
use core::ops::{Add, Neg, Sub};
use core::str::FromStr;

use crate::error::Error;

/// A rational number with denominator 1 or 2, stored as twice its value.
///
/// Spinor weights are half sums of torus weights, so the exponent of a
/// circle character is in general only a half-integer.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_halves(halves: i64) -> Self {
        HalfInt(halves)
    }

    pub const fn from_int(value: i64) -> Self {
        HalfInt(2 * value)
    }

    /// Twice the value.
    pub const fn halves(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// The value, if it is an integer.
    pub const fn to_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.0 / 2)
        } else {
            None
        }
    }

    /// Exact division by a positive integer. Integers must stay integers, so
    /// `3 / 2` is rejected while `6 / 2` and `(3/2) / 3` are not.
    pub fn checked_div(self, divisor: i64) -> Option<Self> {
        if divisor <= 0 || self.0 % divisor != 0 {
            return None;
        }
        let quotient = self.0 / divisor;
        if self.is_integer() && quotient % 2 != 0 {
            return None;
        }
        Some(HalfInt(quotient))
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl From<i64> for HalfInt {
    fn from(value: i64) -> Self {
        HalfInt::from_int(value)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_integer() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.0),
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `n`, `-n`, `n/2` and `-n/2`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse {
            position: 0,
            message: alloc::format!("`{s}` is not an integer or a half-integer"),
        };
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt::from_int(num)),
                    "2" => Ok(HalfInt(num)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn display_and_parse() {
        assert_eq!(HalfInt::from_halves(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_halves(-4).to_string(), "-2");
        assert_eq!("3/2".parse::<HalfInt>().unwrap(), HalfInt::from_halves(3));
        assert_eq!("-7".parse::<HalfInt>().unwrap(), HalfInt::from_int(-7));
        assert_eq!("4/2".parse::<HalfInt>().unwrap(), HalfInt::from_int(2));
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("x".parse::<HalfInt>().is_err());
    }

    #[test]
    fn division() {
        assert_eq!(HalfInt::from_int(6).checked_div(2), Some(HalfInt::from_int(3)));
        assert_eq!(HalfInt::from_int(3).checked_div(2), None);
        assert_eq!(HalfInt::from_halves(3).checked_div(3), Some(HalfInt::from_halves(1)));
        assert_eq!(HalfInt::from_halves(3).checked_div(2), None);
    }
}
