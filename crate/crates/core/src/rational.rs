//! Exact rational arithmetic helpers.
//!
//! Engagement ratios, improvement factors, and the epsilon threshold are all
//! kept as exact fractions so that boundary comparisons never depend on
//! floating-point rounding.

use num_rational::Ratio;
use thiserror::Error;

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RatioParseError {
    #[error("empty rational value")]
    Empty,
    #[error("invalid rational `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("`{0}` carries more decimal places than can be represented exactly")]
    TooPrecise(String),
}

/// Parses `"p/q"`, a plain integer, or a decimal such as `"0.5"` into an
/// exact rational. Decimals are converted without rounding, so `"0.1"`
/// really is one tenth.
pub fn parse_ratio(input: &str) -> Result<Rational, RatioParseError> {
    let s = input.trim();
    if s.is_empty() {
        return Err(RatioParseError::Empty);
    }
    if let Some((numer, denom)) = s.split_once('/') {
        let n: u64 = numer
            .trim()
            .parse()
            .map_err(|_| RatioParseError::Invalid(input.to_owned()))?;
        let d: u64 = denom
            .trim()
            .parse()
            .map_err(|_| RatioParseError::Invalid(input.to_owned()))?;
        if d == 0 {
            return Err(RatioParseError::ZeroDenominator(input.to_owned()));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if !frac.is_empty() && !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(RatioParseError::Invalid(input.to_owned()));
        }
        if whole.is_empty() && frac.is_empty() {
            return Err(RatioParseError::Invalid(input.to_owned()));
        }
        let whole: u64 = if whole.is_empty() {
            0
        } else {
            whole
                .parse()
                .map_err(|_| RatioParseError::Invalid(input.to_owned()))?
        };
        if frac.len() > 18 {
            return Err(RatioParseError::TooPrecise(input.to_owned()));
        }
        let scale = 10u64.pow(frac.len() as u32);
        let frac_digits: u64 = if frac.is_empty() {
            0
        } else {
            frac.parse()
                .map_err(|_| RatioParseError::Invalid(input.to_owned()))?
        };
        let numer = whole
            .checked_mul(scale)
            .and_then(|w| w.checked_add(frac_digits))
            .ok_or_else(|| RatioParseError::TooPrecise(input.to_owned()))?;
        return Ok(Rational::new(numer, scale));
    }
    let n: u64 = s
        .parse()
        .map_err(|_| RatioParseError::Invalid(input.to_owned()))?;
    Ok(Rational::from_integer(n))
}

/// Serde adapter rendering rationals as strings: `"1/2"`, `"3"`.
pub mod ratio_string {
    use super::{parse_ratio, Rational};
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Rational, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(value)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(deserializer)?;
        parse_ratio(&raw).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions() {
        assert_eq!(parse_ratio("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_ratio("6/4").unwrap(), Rational::new(3, 2));
        assert_eq!(parse_ratio(" 7 / 10 ").unwrap(), Rational::new(7, 10));
    }

    #[test]
    fn parses_integers_and_decimals() {
        assert_eq!(parse_ratio("3").unwrap(), Rational::from_integer(3));
        assert_eq!(parse_ratio("0.5").unwrap(), Rational::new(1, 2));
        assert_eq!(parse_ratio("0.1").unwrap(), Rational::new(1, 10));
        assert_eq!(parse_ratio(".25").unwrap(), Rational::new(1, 4));
        assert_eq!(parse_ratio("1.").unwrap(), Rational::from_integer(1));
    }

    #[test]
    fn rejects_junk() {
        assert_eq!(parse_ratio(""), Err(RatioParseError::Empty));
        assert!(matches!(
            parse_ratio("1/0"),
            Err(RatioParseError::ZeroDenominator(_))
        ));
        assert!(matches!(
            parse_ratio("-1/2"),
            Err(RatioParseError::Invalid(_))
        ));
        assert!(matches!(parse_ratio("a/b"), Err(RatioParseError::Invalid(_))));
        assert!(matches!(parse_ratio("."), Err(RatioParseError::Invalid(_))));
        assert!(matches!(
            parse_ratio("0.1234567890123456789"),
            Err(RatioParseError::TooPrecise(_))
        ));
    }

    #[test]
    fn display_round_trips_through_parse() {
        for r in [
            Rational::new(1, 2),
            Rational::from_integer(5),
            Rational::new(9, 10),
        ] {
            assert_eq!(parse_ratio(&r.to_string()).unwrap(), r);
        }
    }
}
