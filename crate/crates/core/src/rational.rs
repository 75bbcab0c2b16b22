//! Exact rational helpers: construction, decimal parsing and rendering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parses a decimal literal such as `"-12.375"`, `"3"`, `".5"` or `"1e-3"`
/// into the exact rational it denotes.
pub fn parse_decimal(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], i32::from_str(&text[pos + 1..]).ok()?),
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = match digits.split_once('.') {
        Some((w, f)) => (w, f),
        None => (digits, ""),
    };
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all_digits = format!("{whole}{frac}");
    let numer = BigInt::from_str(if all_digits.is_empty() { "0" } else { &all_digits }).ok()?;
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        Rational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Some(value)
}

/// Parses `"p/q"` or a decimal literal.
pub fn parse_rational(text: &str) -> Option<Rational> {
    match text.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).ok()?;
            let d = BigInt::from_str(d.trim()).ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => parse_decimal(text),
    }
}

/// Always renders as `p/q`, including integers (`2/1`).
pub fn fmt_exact(value: &Rational) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// Rounds half away from zero to `places` decimals, computed exactly.
pub fn fmt_decimal(value: &Rational, places: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled = value.abs() * Rational::from_integer(scale.clone());
    let rounded = (scaled + ratio(1, 2)).floor().to_integer();
    let (whole, frac) = rounded.div_rem(&scale);
    let sign = if value.is_negative() && !rounded.is_zero() { "-" } else { "" };
    if places == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{:0>width$}", frac.to_string(), width = places)
    }
}

pub fn to_f64(value: &Rational) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Returns the decimal expansion when it terminates (denominator of the
/// form 2^a 5^b), otherwise `None`.
pub fn terminating_decimal(value: &Rational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0usize, 0usize);
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    Some(fmt_decimal(value, twos.max(fives)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimals_parse_exactly() {
        assert_eq!(parse_decimal("0.5"), Some(ratio(1, 2)));
        assert_eq!(parse_decimal("-12.375"), Some(ratio(-99, 8)));
        assert_eq!(parse_decimal("3"), Some(int(3)));
        assert_eq!(parse_decimal(".25"), Some(ratio(1, 4)));
        assert_eq!(parse_decimal("1e-3"), Some(ratio(1, 1000)));
        assert_eq!(parse_decimal("2.5E2"), Some(int(250)));
        assert_eq!(parse_decimal("0.1"), Some(ratio(1, 10)));
        assert_eq!(parse_decimal(""), None);
        assert_eq!(parse_decimal("1.2.3"), None);
        assert_eq!(parse_decimal("abc"), None);
    }

    #[test]
    fn fractions_parse() {
        assert_eq!(parse_rational("2/6"), Some(ratio(1, 3)));
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn rendering() {
        assert_eq!(fmt_exact(&int(2)), "2/1");
        assert_eq!(fmt_exact(&ratio(2, 4)), "1/2");
        assert_eq!(fmt_decimal(&ratio(1, 2), 6), "0.500000");
        assert_eq!(fmt_decimal(&ratio(2, 3), 6), "0.666667");
        assert_eq!(fmt_decimal(&ratio(-1, 3), 3), "-0.333");
        assert_eq!(fmt_decimal(&int(1001), 2), "1001.00");
        assert_eq!(terminating_decimal(&ratio(3, 8)), Some("0.375".into()));
        assert_eq!(terminating_decimal(&int(7)), Some("7".into()));
        assert_eq!(terminating_decimal(&ratio(1, 3)), None);
    }
}
