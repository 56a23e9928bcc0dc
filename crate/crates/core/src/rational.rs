//! Exact rational numbers used for every rate and time in the engine.
//!
//! Rates and times print as `num/den` (or a bare integer when the
//! denominator is one) and parse from `num/den`, integers, or finite
//! decimals such as `3.5`, which are converted exactly.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn parse(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::param(format!("cannot parse `{text}` as a rational number"));
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::param(format!("zero denominator in `{text}`")));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(whole).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac = BigInt::from_str(frac).map_err(|_| bad())?;
        let magnitude = whole.abs() * &scale + frac;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(text)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

pub fn format(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Largest integer `k` with `k <= r`.
pub fn floor_to_i64(r: &Rational) -> Option<i64> {
    r.floor().to_integer().to_i64()
}

/// Exact binary value of a finite non-negative float, rounded down onto
/// the dyadic grid with `bits` fractional bits.
pub(crate) fn dyadic_floor(x: f64, bits: u32) -> Rational {
    let scale = BigInt::one() << bits;
    let scaled = Rational::from_float(x).unwrap_or_else(Rational::zero) * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_fraction_integer_and_decimal() {
        assert_eq!(parse("7/2").unwrap(), ratio(7, 2));
        assert_eq!(parse("14").unwrap(), int(14));
        assert_eq!(parse("3.5").unwrap(), ratio(7, 2));
        assert_eq!(parse("0.125").unwrap(), ratio(1, 8));
        assert_eq!(parse("-1.5").unwrap(), ratio(-3, 2));
        assert_eq!(parse(" 4/6 ").unwrap(), ratio(2, 3));
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse("1/0").is_err());
        assert!(parse("abc").is_err());
        assert!(parse("1.").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn formats_reduced() {
        assert_eq!(format(&ratio(8, 14)), "4/7");
        assert_eq!(format(&int(3)), "3");
    }

    #[test]
    fn dyadic_floor_never_exceeds_value() {
        let r = dyadic_floor(0.1, 20);
        assert!(r <= Rational::from_float(0.1).unwrap());
        assert!(to_f64(&r) > 0.0999);
    }

    proptest! {
        #[test]
        fn format_parse_roundtrip(num in -10_000i64..10_000, den in 1i64..10_000) {
            let r = ratio(num, den);
            prop_assert_eq!(parse(&format(&r)).unwrap(), r);
        }
    }
}
