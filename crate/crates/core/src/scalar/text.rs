//! Textual forms: `a/b + c/d*sqrt2` for exact values and
//! `[lo, hi]@precision` for enclosures.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Deserialize;

use super::{Enclosure, QSqrt2, Rational, Scalar};
use crate::error::{Error, Result};

pub(super) fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let int_part: BigInt = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            int.parse().map_err(|_| bad())?
        };
        if frac.is_empty() || !frac.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let frac_num: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac_q = Rational::new(frac_num, scale);
        let whole = Rational::from_integer(int_part.abs()) + frac_q;
        return Ok(if neg { -whole } else { whole });
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

fn parse_exact(s: &str) -> Result<QSqrt2> {
    let s = s.trim();
    let Some(body) = s.strip_suffix("*sqrt2") else {
        if s == "sqrt2" {
            return Ok(QSqrt2::sqrt2());
        }
        return Ok(QSqrt2::rational(parse_rational(s)?));
    };
    // the rational part may itself start with '-', so split on the last " + "
    match body.rsplit_once(" + ") {
        Some((a, b)) => Ok(QSqrt2::new(parse_rational(a)?, parse_rational(b)?)),
        None => Ok(QSqrt2::new(Rational::zero(), parse_rational(body)?)),
    }
}

fn parse_enclosure(s: &str) -> Result<Enclosure> {
    let bad = || Error::Parse(format!("not an enclosure: {s:?}"));
    let (body, prec) = s.trim().rsplit_once("]@").ok_or_else(bad)?;
    let body = body.strip_prefix('[').ok_or_else(bad)?;
    let (lo, hi) = body.split_once(',').ok_or_else(bad)?;
    let precision: u32 = prec.trim().parse().map_err(|_| bad())?;
    Enclosure::from_dyadic(parse_rational(lo)?, parse_rational(hi)?, precision)
}

pub(super) fn parse_scalar(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.starts_with('[') {
        parse_enclosure(t).map(Scalar::Interval)
    } else {
        parse_exact(t).map(Scalar::Exact)
    }
}

/// Accepted JSON shapes for a scalar: a string in either textual form, or
/// an object `{"a": "...", "b": "..."}` for `a + b√2`.
#[derive(Deserialize)]
#[serde(untagged)]
pub(super) enum ScalarRepr {
    Text(String),
    Parts {
        a: String,
        #[serde(default)]
        b: Option<String>,
    },
}

impl ScalarRepr {
    pub(super) fn into_scalar(self) -> Result<Scalar> {
        match self {
            ScalarRepr::Text(s) => parse_scalar(&s),
            ScalarRepr::Parts { a, b } => {
                let b = match b {
                    Some(b) => parse_rational(&b)?,
                    None => Rational::zero(),
                };
                Ok(Scalar::Exact(QSqrt2::new(parse_rational(&a)?, b)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_forms() {
        assert_eq!(parse_rational("3/6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), Rational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational(" 7 ").unwrap(), Rational::from_integer(7.into()));
        for bad in ["", "1/0", "x", "1.", "1.2.3", "--1"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn exact_forms() {
        assert_eq!(parse_exact("sqrt2").unwrap(), QSqrt2::sqrt2());
        assert_eq!(
            parse_exact("-1/2 + -3*sqrt2").unwrap(),
            QSqrt2::new(Rational::new((-1).into(), 2.into()), Rational::from_integer((-3).into()))
        );
        assert_eq!(
            parse_exact("1/2*sqrt2").unwrap(),
            QSqrt2::new(Rational::zero(), Rational::new(1.into(), 2.into()))
        );
    }

    #[test]
    fn enclosure_must_be_dyadic_and_ordered() {
        assert!(parse_enclosure("[1/3, 1]@8").is_err());
        assert!(parse_enclosure("[1, 1/2]@8").is_err());
        assert!(parse_enclosure("[1/2, 3/4]@8").is_ok());
    }
}
