//! Exact rational scalars and string conversions.
//!
//! Every scalar in the construction (similarity exponents, series
//! coefficients, monomial exponents) is an arbitrary-precision rational,
//! stored in lowest terms with a positive denominator. Floating point
//! appears only at the evaluation boundary.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always reduced, denominator > 0.
pub type Rational = num_rational::BigRational;

/// Rational from a small numerator/denominator pair.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Rational from an integer.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from an unsigned numerator/denominator pair.
pub fn rat_usize(numer: usize, denom: usize) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Parse a rational from "p/q", an integer, or a plain decimal string.
///
/// Decimal strings convert exactly: "0.25" becomes 1/4. Scientific
/// notation is rejected.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let numer: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {:?}", s)))?;
        let denom: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {:?}", s)))?;
        if denom.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {:?}", s)));
        }
        return Ok(Rational::new(numer, denom));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" {
            // allow ".5" and "-.5"
            format!("{}0", whole)
        } else {
            whole.to_string()
        };
        let whole_int: BigInt = whole
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal in {:?}", s)))?;
        if frac.is_empty() {
            return Ok(Rational::from_integer(whole_int));
        }
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal fraction in {:?}", s)));
        }
        let frac_int: BigInt = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal fraction in {:?}", s)))?;
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = Rational::new(frac_int, scale);
        let whole_part = Rational::from_integer(whole_int);
        return Ok(if negative {
            whole_part - frac_part
        } else {
            whole_part + frac_part
        });
    }
    let n: BigInt = s
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational literal {:?}", s)))?;
    Ok(Rational::from_integer(n))
}

/// Nearest f64 to the exact value.
pub fn to_f64(r: &Rational) -> f64 {
    // ToPrimitive on Ratio<BigInt> rounds to nearest.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational equal to the given finite float (every finite f64 is
/// a dyadic rational). None for NaN or infinities.
pub fn from_f64_exact(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

/// True for 0, -1, -2, ...
pub fn is_nonpositive_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_positive()
}

/// True for 1, 2, 3, ...
pub fn is_positive_integer(r: &Rational) -> bool {
    r.is_integer() && r.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fraction_and_integers() {
        assert_eq!(parse_rational("-1/3").unwrap(), rat(-1, 3));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(parse_rational(" -12 ").unwrap(), int(-12));
    }

    #[test]
    fn parse_decimal_exactly() {
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        assert_eq!(parse_rational("-0.125").unwrap(), rat(-1, 8));
        assert_eq!(parse_rational("2.").unwrap(), int(2));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_rational("").is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1e-3").is_err());
        assert!(parse_rational("a/b").is_err());
    }

    #[test]
    fn display_is_slash_form() {
        assert_eq!(rat(-1, 3).to_string(), "-1/3");
        assert_eq!(int(4).to_string(), "4");
        assert_eq!(rat(2, 4).to_string(), "1/2");
    }

    #[test]
    fn float_round_trip_is_exact() {
        for x in [0.5, -0.125, 3.0, 1.0 / 3.0] {
            let r = from_f64_exact(x).unwrap();
            assert_eq!(to_f64(&r), x);
        }
    }

    #[test]
    fn integer_classification() {
        assert!(is_nonpositive_integer(&int(0)));
        assert!(is_nonpositive_integer(&int(-3)));
        assert!(!is_nonpositive_integer(&rat(-1, 2)));
        assert!(is_positive_integer(&int(2)));
        assert!(!is_positive_integer(&int(0)));
        assert!(!is_positive_integer(&rat(3, 2)));
    }
}
