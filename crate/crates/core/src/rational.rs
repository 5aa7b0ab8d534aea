//! Exact rationals and their text form.
//!
//! Accepted literals are `p/q`, plain integers and finite decimals
//! (`0.125`, `-3.5`). Output uses `p/q`, or `p` when the denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse(text: &str) -> Result<Rational> {
    let bad = || Error::BadRational(text.to_string());
    let s = text.trim();
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_int(p.trim()).ok_or_else(bad)?;
        let q: BigInt = parse_int(q.trim()).ok_or_else(bad)?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (negative, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (whole, frac) = match body.split_once('.') {
        Some((w, f)) => (w, f),
        None => (body, ""),
    };
    let digits = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if !digits(whole) || !digits(frac) || (whole.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    if body.ends_with('.') {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let numer: BigInt = joined.parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    let value = Rational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

fn parse_int(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if body.is_empty() || !body.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

pub fn format(value: &Rational) -> String {
    value.to_string()
}

pub fn in_unit_interval(value: &Rational) -> bool {
    !value.is_negative() && *value <= Rational::one()
}

/// Lossy conversion for reporting and sampling.
pub fn to_f64(value: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    value.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse("3/5").unwrap(), ratio(3, 5));
        assert_eq!(parse("6/10").unwrap(), ratio(3, 5));
        assert_eq!(parse("0.7").unwrap(), ratio(7, 10));
        assert_eq!(parse("-1.25").unwrap(), ratio(-5, 4));
        assert_eq!(parse(".5").unwrap(), ratio(1, 2));
        assert_eq!(parse("1").unwrap(), int(1));
    }

    #[test]
    fn rejects_malformed() {
        for s in ["0.1.2", "", "1/0", "a", "1/", "/2", "1.", "--1", "1e3"] {
            assert!(parse(s).is_err(), "{s:?} should fail");
        }
    }

    #[test]
    fn formats_as_ratio() {
        assert_eq!(format(&ratio(3, 10)), "3/10");
        assert_eq!(format(&int(1)), "1");
        assert_eq!(parse(&format(&ratio(-7, 3))).unwrap(), ratio(-7, 3));
    }
}
