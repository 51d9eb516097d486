//! Exact rational helpers shared by every module that compares weights or
//! densities.

use num::bigint::BigInt;
use num::{BigRational, Integer, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: u128) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"3/10"`, `"7"` or `"-1/2"`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational: {text:?}"));
    let text = text.trim();
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

pub fn format_rational(value: &Rational) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Smallest integer `>= value`, clamped at zero.
pub fn ceil_usize(value: &Rational) -> usize {
    if value.is_negative() {
        return 0;
    }
    value.ceil().to_integer().to_usize().unwrap_or(usize::MAX)
}

/// The desk-scale reading of a linear threshold `c·n`: `max(1, ⌈c·n⌉)`.
pub fn desk_threshold(c: &Rational, n: usize) -> usize {
    ceil_usize(&(c * int(n as u128))).max(1)
}

pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// True iff `value` is an integer multiple of `1/r`.
pub fn is_multiple_of_inverse(value: &Rational, r: u64) -> bool {
    (value * int(r as u128)).is_integer()
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Serializes a rational as its `"p/q"` string.
pub fn ser_rational<S: serde::Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(v))
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("3/10").unwrap(), ratio(3, 10));
        assert_eq!(parse_rational(" 4 ").unwrap(), ratio(4, 1));
        assert_eq!(parse_rational("2/4").unwrap(), ratio(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&ratio(6, 3)), "2");
        assert_eq!(format_rational(&ratio(1, 3)), "1/3");
    }

    #[test]
    fn thresholds() {
        assert_eq!(desk_threshold(&ratio(1, 50), 30), 1);
        assert_eq!(desk_threshold(&ratio(3, 50), 30), 2);
        assert_eq!(desk_threshold(&ratio(0, 1), 30), 1);
        assert_eq!(ceil_usize(&ratio(-1, 2)), 0);
        assert!(is_multiple_of_inverse(&ratio(1, 3), 6));
        assert!(!is_multiple_of_inverse(&ratio(1, 3), 2));
    }
}
