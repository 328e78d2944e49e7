//! Exact rational helpers: decimal parsing, formatting, float views.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;
use thiserror::Error;

pub type Rational = BigRational;

/// Largest decimal exponent accepted when parsing, to keep numbers at desk scale.
pub const MAX_DECIMAL_EXPONENT: i64 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("not a decimal number: {0:?}")]
    Malformed(String),
    #[error("decimal exponent out of range: {0}")]
    ExponentRange(String),
}

/// Parses a decimal literal such as `1`, `-0.25` or `3.5e-2` into an exact rational.
pub fn parse_decimal(text: &str) -> Result<Rational, DecimalError> {
    let malformed = || DecimalError::Malformed(text.to_string());
    let s = text.trim();
    let (negative, s) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], Some(&s[pos + 1..])),
        None => (s, None),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(malformed());
    }
    let mut exp: i64 = match exponent {
        Some(e) => {
            let digits = e.strip_prefix(['+', '-']).unwrap_or(e);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(malformed());
            }
            if digits.len() > 6 {
                return Err(DecimalError::ExponentRange(text.to_string()));
            }
            e.parse::<i64>().map_err(|_| malformed())?
        }
        None => 0,
    };
    if exp.abs() > MAX_DECIMAL_EXPONENT {
        return Err(DecimalError::ExponentRange(text.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits.is_empty() { "0" } else { &digits };
    let mut value = BigInt::parse_bytes(digits.as_bytes(), 10).ok_or_else(malformed)?;
    exp -= frac_part.len() as i64;
    if negative {
        value = -value;
    }
    let ten = BigInt::from(10u32);
    Ok(if exp >= 0 {
        Rational::from_integer(value * num_traits::pow(ten, exp as usize))
    } else {
        Rational::new(value, num_traits::pow(ten, (-exp) as usize))
    })
}

/// Exact decimal text for rationals whose denominator divides a power of ten.
pub fn to_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let two = BigInt::from(2u32);
    let five = BigInt::from(5u32);
    let (mut twos, mut fives) = (0usize, 0usize);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if !den.is_one() {
        return None;
    }
    let places = twos.max(fives);
    let scaled = r * Rational::from_integer(num_traits::pow(BigInt::from(10u32), places));
    let digits = scaled.to_integer().abs().to_string();
    let sign = if r.is_negative() { "-" } else { "" };
    if places == 0 {
        return Some(format!("{sign}{digits}"));
    }
    let padded = format!("{digits:0>width$}", width = places + 1);
    let (int_part, frac_part) = padded.split_at(padded.len() - places);
    Some(format!("{sign}{int_part}.{frac_part}"))
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Decimal digit count of the larger of numerator and denominator (upper estimate).
pub fn decimal_digits(r: &Rational) -> u64 {
    let bits = r.numer().bits().max(r.denom().bits());
    (bits as f64 * std::f64::consts::LOG10_2).ceil() as u64
}

pub fn is_positive(r: &Rational) -> bool {
    r.numer().sign() == Sign::Plus
}

pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn serialize_rationals<S: Serializer>(rs: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(rs.iter().map(format_rational))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
