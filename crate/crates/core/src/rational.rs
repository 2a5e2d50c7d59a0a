//! The coefficient field. Rationals are always kept reduced with a positive
//! denominator by `num_rational`; the textual form is `p/q`, or `p` when
//! `q = 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Renders `p/q` (or `p` for integers).
pub fn to_text(r: &Rational) -> String {
    r.to_string()
}

/// Parses `p/q` or `p`. The input must already be reduced with `q > 0`,
/// so that text and value correspond one-to-one.
pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (
            n.parse::<BigInt>().map_err(|_| bad())?,
            d.parse::<BigInt>().map_err(|_| bad())?,
        ),
        None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den <= BigInt::zero() {
        return Err(bad());
    }
    let r = Rational::new(num.clone(), den.clone());
    if r.numer() != &num || r.denom() != &den || (den.is_one() && s.contains('/')) {
        return Err(Error::Parse(format!(
            "rational {s:?} is not in reduced form"
        )));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form() {
        assert_eq!(to_text(&frac(-22, 11520)), "-11/5760");
        assert_eq!(to_text(&int(3)), "3");
        assert_eq!(to_text(&zero()), "0");
    }

    #[test]
    fn parse_rejects_unreduced() {
        assert_eq!(parse("-11/5760").unwrap(), frac(-11, 5760));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("2/4").is_err());
        assert!(parse("1/-3").is_err());
        assert!(parse("3/1").is_err());
        assert!(parse("x").is_err());
    }
}
