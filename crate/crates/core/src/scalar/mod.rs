//! Exact arithmetic in ℚ(√2) and outward-rounded interval enclosures.
//!
//! Points, distances and thresholds are [`Scalar`]s. A scalar is either an
//! exact field element, for which sign and rationality are decidable, or a
//! dyadic [`Enclosure`] of a real number outside the field (for instance
//! `2^(1/n)`). Comparisons between scalars are three-valued and never claim
//! more than the enclosures certify.

mod enclosure;
mod qsqrt2;
mod text;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

pub use enclosure::{exact_root, root_enclosure, Enclosure};
pub use qsqrt2::QSqrt2;

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Working precision, in bits, used when an exact value first meets an
/// enclosure and no other precision is in scope.
pub const DEFAULT_PRECISION: u32 = 96;

/// `2^k` as a rational.
pub fn pow2(k: i64) -> Rational {
    let p = BigInt::one() << (k.unsigned_abs() as usize);
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Parses `"3/2"`, `"-7"` or `"0.125"` into a rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    text::parse_rational(s)
}

/// Three-valued answer of a certified query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Truth {
    True,
    False,
    Unknown,
}

impl Truth {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth::True
        } else {
            Truth::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Truth::True
    }

    pub fn is_false(self) -> bool {
        self == Truth::False
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Abs,
}

/// A real number, either exact in ℚ(√2) or enclosed by a dyadic interval.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Exact(QSqrt2),
    Interval(Enclosure),
}

impl Scalar {
    pub fn integer(n: i64) -> Self {
        Scalar::Exact(QSqrt2::integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar::Exact(QSqrt2::ratio(num, den))
    }

    pub fn rational(q: Rational) -> Self {
        Scalar::Exact(QSqrt2::rational(q))
    }

    pub fn sqrt2() -> Self {
        Scalar::Exact(QSqrt2::sqrt2())
    }

    pub fn zero() -> Self {
        Scalar::integer(0)
    }

    pub fn one() -> Self {
        Scalar::integer(1)
    }

    pub fn as_exact(&self) -> Option<&QSqrt2> {
        match self {
            Scalar::Exact(x) => Some(x),
            Scalar::Interval(_) => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Scalar::Exact(_) => None,
            Scalar::Interval(e) => Some(e.precision()),
        }
    }

    /// Embeds the value into an enclosure. Exact values are enclosed at
    /// `precision`; enclosures are returned as they are.
    pub fn enclosure(&self, precision: u32) -> Enclosure {
        match self {
            Scalar::Exact(x) => Enclosure::from_qsqrt2(x, precision),
            Scalar::Interval(e) => e.clone(),
        }
    }

    /// A rational certified to be `≤` the value.
    pub fn lower_bound(&self) -> Rational {
        self.enclosure(DEFAULT_PRECISION).lo().clone()
    }

    /// A rational certified to be `≥` the value.
    pub fn upper_bound(&self) -> Rational {
        self.enclosure(DEFAULT_PRECISION).hi().clone()
    }

    fn interval_pair(&self, rhs: &Scalar) -> (Enclosure, Enclosure) {
        let p = self
            .precision()
            .into_iter()
            .chain(rhs.precision())
            .max()
            .unwrap_or(DEFAULT_PRECISION);
        (self.enclosure(p), rhs.enclosure(p))
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Scalar::Interval(a.add(&b))
            }
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a - b),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Scalar::Interval(a.sub(&b))
            }
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Scalar::Interval(a.mul(&b))
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Result<Scalar> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a.checked_div(b)?)),
            (_, Scalar::Exact(b)) if b.is_zero() => Err(Error::DivisionByZero),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Ok(Scalar::Interval(a.div(&b)?))
            }
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(-a),
            Scalar::Interval(e) => Scalar::Interval(e.neg()),
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.abs()),
            Scalar::Interval(e) => Scalar::Interval(e.abs()),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        match self {
            Scalar::Exact(a) => Scalar::Exact(a.pow(e)),
            Scalar::Interval(x) => Scalar::Interval(x.pow(e)),
        }
    }

    /// Real cube root; exact when the value is a cube in ℚ(√2).
    pub fn cbrt(&self) -> Scalar {
        self.cbrt_at(DEFAULT_PRECISION)
    }

    /// As [`Scalar::cbrt`], enclosing inexact roots of exact values at
    /// `precision` bits.
    pub fn cbrt_at(&self, precision: u32) -> Scalar {
        match self {
            Scalar::Exact(x) => match exact_cbrt(x) {
                Some(r) => Scalar::Exact(r),
                None => Scalar::Interval(Enclosure::from_qsqrt2(x, precision).cbrt()),
            },
            Scalar::Interval(e) => Scalar::Interval(e.cbrt()),
        }
    }

    /// Pointwise maximum.
    pub fn max(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.clone().max(b.clone())),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Scalar::Interval(a.max(&b))
            }
        }
    }

    pub fn min(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a.clone().min(b.clone())),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                Scalar::Interval(a.min(&b))
            }
        }
    }

    /// Certified ordering, `None` when enclosures overlap.
    pub fn certain_cmp(&self, rhs: &Scalar) -> Option<Ordering> {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => {
                let (a, b) = self.interval_pair(rhs);
                a.certain_cmp(&b)
            }
        }
    }

    /// `a > b`, answered only when certified.
    pub fn cmp_gt(&self, rhs: &Scalar) -> Truth {
        match self.certain_cmp(rhs) {
            Some(Ordering::Greater) => Truth::True,
            Some(_) => Truth::False,
            None => {
                // overlapping enclosures can still certify `a ≤ b`
                let (a, b) = self.interval_pair(rhs);
                if a.hi() <= b.lo() {
                    Truth::False
                } else {
                    Truth::Unknown
                }
            }
        }
    }

    pub fn is_positive(&self) -> Truth {
        self.cmp_gt(&Scalar::zero())
    }

    /// Rationality of the value: decided for exact values and degenerate
    /// enclosures, unknown otherwise.
    pub fn is_rational(&self) -> Truth {
        match self {
            Scalar::Exact(x) => Truth::from_bool(x.is_rational()),
            Scalar::Interval(e) if e.is_degenerate() => Truth::True,
            Scalar::Interval(_) => Truth::Unknown,
        }
    }

    /// Certified `self == rhs`: only exact values can be certified equal.
    pub fn certainly_equal(&self, rhs: &Scalar) -> bool {
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Interval(a), Scalar::Interval(b)) => {
                a.is_degenerate() && b.is_degenerate() && a.lo() == b.lo()
            }
            _ => false,
        }
    }

    pub fn is_zero_exact(&self) -> bool {
        self.as_exact().is_some_and(QSqrt2::is_zero)
    }

    /// Does the real number `x` lie in this scalar's enclosure?
    pub fn contains(&self, x: &QSqrt2) -> bool {
        match self {
            Scalar::Exact(a) => a == x,
            Scalar::Interval(e) => e.contains(x),
        }
    }

    /// Smallest power of two strictly above the value's upper bound; used
    /// as a ball radius that provably contains a given distance.
    pub fn dyadic_ceiling(&self) -> Scalar {
        let hi = self.upper_bound();
        let mut k: i64 = if hi.is_positive() {
            hi.numer().bits() as i64 - hi.denom().bits() as i64 - 1
        } else {
            -64
        };
        while pow2(k) <= hi {
            k += 1;
        }
        Scalar::rational(pow2(k))
    }
}

/// The cube root of `x` when it lies in ℚ(√2).
///
/// If `x = (p + q√2)³` then the conjugate is `(p − q√2)³`, so `p` and `q`
/// are enclosed by sums and differences of the two real cube roots. The
/// simplest rationals in those enclosures are then confirmed by cubing.
fn exact_cbrt(x: &QSqrt2) -> Option<QSqrt2> {
    if let Some(q) = x.as_rational() {
        return exact_root(q, 3).map(QSqrt2::rational);
    }
    // the norm is multiplicative, so a cube has a cube norm
    exact_root(&x.norm(), 3)?;
    let two = Rational::from_integer(BigInt::from(2));
    for bits in [128u32, 320] {
        let r1 = Enclosure::from_qsqrt2(x, bits).cbrt();
        let r2 = Enclosure::from_qsqrt2(&x.conjugate(), bits).cbrt();
        let p_lo = (r1.lo() + r2.lo()) / &two;
        let p_hi = (r1.hi() + r2.hi()) / &two;
        // q = (r1 − r2) / (2√2), with √2 replaced by its rational bounds
        let (s_lo, s_hi) = qsqrt2::sqrt2_bounds(bits);
        let d_lo = (r1.lo() - r2.hi()) / &two;
        let d_hi = (r1.hi() - r2.lo()) / &two;
        let cands = [&d_lo / &s_lo, &d_lo / &s_hi, &d_hi / &s_lo, &d_hi / &s_hi];
        let q_lo = cands.iter().min().expect("four candidates").clone();
        let q_hi = cands.iter().max().expect("four candidates").clone();
        let guess = QSqrt2::new(simplest_between(&p_lo, &p_hi), simplest_between(&q_lo, &q_hi));
        if &guess.pow(3) == x {
            return Some(guess);
        }
    }
    None
}

/// The rational with least denominator in `[lo, hi]`.
fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    let zero = Rational::from_integer(BigInt::from(0));
    if lo <= &zero && &zero <= hi {
        return zero;
    }
    if hi < &zero {
        return -simplest_between(&-hi, &-lo);
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + Rational::one();
    if &next <= hi {
        return next;
    }
    let inner = simplest_between(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + inner.recip()
}

/// Applies one arithmetic operation; unary operations ignore `b`.
pub fn arith(op: ArithOp, a: &Scalar, b: &Scalar) -> Result<Scalar> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
        ArithOp::Neg => a.neg(),
        ArithOp::Abs => a.abs(),
    })
}

/// Free-standing form of [`Scalar::cmp_gt`].
pub fn cmp_gt(a: &Scalar, b: &Scalar) -> Truth {
    a.cmp_gt(b)
}

impl From<QSqrt2> for Scalar {
    fn from(x: QSqrt2) -> Self {
        Scalar::Exact(x)
    }
}

impl From<Rational> for Scalar {
    fn from(q: Rational) -> Self {
        Scalar::rational(q)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::integer(n)
    }
}

impl From<Enclosure> for Scalar {
    fn from(e: Enclosure) -> Self {
        Scalar::Interval(e)
    }
}

impl fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a())
        } else if !self.a().is_zero() {
            write!(f, "{} + {}*sqrt2", self.a(), self.b())
        } else if self.b().is_one() {
            f.write_str("sqrt2")
        } else {
            write!(f, "{}*sqrt2", self.b())
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(x) => x.fmt(f),
            Scalar::Interval(e) => e.fmt(f),
        }
    }
}

impl std::str::FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        text::parse_scalar(s)
    }
}

impl std::str::FromStr for QSqrt2 {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match text::parse_scalar(s)? {
            Scalar::Exact(x) => Ok(x),
            Scalar::Interval(_) => Err(Error::Parse(format!("expected an exact value: {s}"))),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        text::ScalarRepr::deserialize(d)?
            .into_scalar()
            .map_err(serde::de::Error::custom)
    }
}

impl Serialize for QSqrt2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QSqrt2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match text::ScalarRepr::deserialize(d)?
            .into_scalar()
            .map_err(serde::de::Error::custom)?
        {
            Scalar::Exact(x) => Ok(x),
            Scalar::Interval(e) => Err(serde::de::Error::custom(format!(
                "expected an exact value, found {e}"
            ))),
        }
    }
}

/// Rationals travel as strings so no binary float touches them.
pub mod rational_serde {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(q)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugates_multiply_to_minus_one() {
        let a: Scalar = "1 + 1*sqrt2".parse().unwrap();
        let b: Scalar = "1 + -1*sqrt2".parse().unwrap();
        assert_eq!(arith(ArithOp::Mul, &a, &b).unwrap(), Scalar::integer(-1));
    }

    #[test]
    fn usual_metric_value() {
        let d = arith(ArithOp::Sub, &Scalar::zero(), &Scalar::ratio(3, 2)).unwrap();
        let d = arith(ArithOp::Abs, &d, &Scalar::zero()).unwrap();
        assert_eq!(d, Scalar::ratio(3, 2));
    }

    #[test]
    fn three_minus_two_sqrt2_is_positive() {
        let two_sqrt2 = Scalar::sqrt2().mul(&Scalar::integer(2));
        let v = Scalar::integer(3).sub(&two_sqrt2);
        assert_eq!(v.is_positive(), Truth::True);
        // oracle: 2√2 enclosed to 1e-6 lies in [2.828426, 2.828428] < 3
        let e = two_sqrt2.enclosure(24);
        assert!(e.lo() >= &Rational::new(2_828_426.into(), 1_000_000.into()));
        assert!(e.hi() <= &Rational::new(2_828_428.into(), 1_000_000.into()));
        assert_eq!(cmp_gt(&v, &Scalar::zero()), Truth::True);
    }

    #[test]
    fn cmp_gt_cases() {
        assert_eq!(cmp_gt(&Scalar::sqrt2(), &Scalar::one()), Truth::True);
        let a = Scalar::Interval(Enclosure::new(
            &Rational::new(140.into(), 100.into()),
            &Rational::new(142.into(), 100.into()),
            32,
        ));
        let b = Scalar::Interval(Enclosure::new(
            &Rational::new(141.into(), 100.into()),
            &Rational::new(143.into(), 100.into()),
            32,
        ));
        assert_eq!(cmp_gt(&a, &b), Truth::Unknown);
        assert_eq!(cmp_gt(&Scalar::one(), &Scalar::sqrt2()), Truth::False);
    }

    #[test]
    fn division_errors() {
        assert_eq!(
            arith(ArithOp::Div, &Scalar::one(), &Scalar::zero()),
            Err(Error::DivisionByZero)
        );
        let z = Scalar::Interval(Enclosure::new(
            &Rational::new((-1).into(), 8.into()),
            &Rational::new(1.into(), 8.into()),
            16,
        ));
        assert!(matches!(
            arith(ArithOp::Div, &Scalar::one(), &z),
            Err(Error::PossiblyZeroDivisor(_))
        ));
    }

    #[test]
    fn rationality_queries() {
        assert_eq!(Scalar::ratio(1, 3).is_rational(), Truth::True);
        assert_eq!(Scalar::sqrt2().is_rational(), Truth::False);
        let e = Scalar::Interval(root_enclosure(&Rational::from_integer(2.into()), 2, 30));
        assert_eq!(e.is_rational(), Truth::Unknown);
    }

    #[test]
    fn text_roundtrip() {
        let x: Scalar = "-3/7 + 5/2*sqrt2".parse().unwrap();
        assert_eq!(x.to_string(), "-3/7 + 5/2*sqrt2");
        assert_eq!(x.to_string().parse::<Scalar>().unwrap(), x);
        let e = Scalar::Interval(root_enclosure(&Rational::from_integer(2.into()), 3, 16));
        let back: Scalar = e.to_string().parse().unwrap();
        assert_eq!(back, e);
        assert_eq!("0.125".parse::<Scalar>().unwrap(), Scalar::ratio(1, 8));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn json_forms() {
        let x: Scalar = serde_json::from_str(r#"{"a":"0","b":"1/2"}"#).unwrap();
        assert_eq!(x, Scalar::sqrt2().mul(&Scalar::ratio(1, 2)));
        let y: Scalar = serde_json::from_str(r#""1/3""#).unwrap();
        assert_eq!(y, Scalar::ratio(1, 3));
        assert_eq!(serde_json::to_string(&y).unwrap(), r#""1/3""#);
        assert!(serde_json::from_str::<Scalar>("0.5").is_err());
    }

    #[test]
    fn cube_roots_inside_the_field() {
        let y: Scalar = "1/3 + -5/7*sqrt2".parse().unwrap();
        assert_eq!(y.pow(3).cbrt(), y);
        assert_eq!(Scalar::integer(-27).cbrt(), Scalar::integer(-3));
        let two = Scalar::integer(2).cbrt();
        assert!(!two.is_exact());
        assert!(two.pow(3).contains(&QSqrt2::integer(2)));
        assert!(!Scalar::sqrt2().cbrt().is_exact());
    }

    #[test]
    fn dyadic_ceiling_is_strictly_above() {
        for (n, d) in [(3, 4), (1, 1), (5, 1), (1, 1000)] {
            let s = Scalar::ratio(n, d);
            let c = s.dyadic_ceiling();
            assert_eq!(cmp_gt(&c, &s), Truth::True);
            assert_eq!(cmp_gt(&c, &s.mul(&Scalar::integer(2))), Truth::False);
        }
    }
}
