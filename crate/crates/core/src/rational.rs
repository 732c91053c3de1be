//! Exact rationals and strict thresholds.

use alloc::string::{String, ToString};
use core::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Arbitrary precision rational used for every exact value in the crate.
pub type Rational = BigRational;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn integer(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `a/b` or a bare integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::InvalidAlpha(text.to_string());
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Always `num/den`, including integers (`3/1`).
pub fn format_rational(value: &Rational) -> String {
    alloc::format!("{}/{}", value.numer(), value.denom())
}

pub fn to_f64(value: &Rational) -> f64 {
    match (value.numer().to_f64(), value.denom().to_f64()) {
        (Some(n), Some(d)) => n / d,
        _ => f64::NAN,
    }
}

/// A level `alpha` in the open interval (0, 1) together with a machine-word
/// form for fast comparisons of `hits / size` against it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Threshold {
    value: Rational,
    num: u64,
    den: u64,
}

impl Threshold {
    pub fn new(alpha: &Rational) -> Result<Self> {
        let invalid = || Error::InvalidAlpha(format_rational(alpha));
        if !alpha.is_positive() || *alpha >= Rational::one() {
            return Err(invalid());
        }
        let num = alpha.numer().to_u64().ok_or_else(invalid)?;
        let den = alpha.denom().to_u64().ok_or_else(invalid)?;
        Ok(Self { value: alpha.clone(), num, den })
    }

    pub fn from_ratio(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidAlpha(alloc::format!("{num}/{den}")));
        }
        Self::new(&ratio(num, den))
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    /// `hits / size > alpha`, exactly.
    #[inline]
    pub fn exceeded_by(&self, hits: u64, size: u64) -> bool {
        (hits as u128) * (self.den as u128) > (self.num as u128) * (size as u128)
    }

    pub fn exceeded_by_rational(&self, value: &Rational) -> bool {
        value.cmp(&self.value) == Ordering::Greater
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        let r = parse_rational(" 6/8 ").unwrap();
        assert_eq!(r, ratio(3, 4));
        assert_eq!(format_rational(&r), "3/4");
        assert_eq!(format_rational(&parse_rational("3").unwrap()), "3/1");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn threshold_is_strict() {
        let t = Threshold::from_ratio(1, 2).unwrap();
        assert!(!t.exceeded_by(1, 2));
        assert!(t.exceeded_by(2, 3));
        assert!(!t.exceeded_by(1, 3));
        assert!(Threshold::from_ratio(1, 1).is_err());
        assert!(Threshold::from_ratio(0, 1).is_err());
        assert!(Threshold::new(&integer(-1)).is_err());
    }
}
