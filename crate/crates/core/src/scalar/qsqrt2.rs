use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{pow2, Rational};
use crate::error::{Error, Result};

/// An element `a + b·√2` of the quadratic field ℚ(√2).
///
/// The pair `(a, b)` is unique for every field element because √2 is
/// irrational, so derived equality and hashing are structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSqrt2 {
    a: Rational,
    b: Rational,
}

impl QSqrt2 {
    pub fn new(a: Rational, b: Rational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: Rational) -> Self {
        Self::new(a, Rational::zero())
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `num/den` as a rational element. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn sqrt2() -> Self {
        Self::new(Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    /// Rational part.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Sign of `a + b√2`, decided by comparing `a²` with `2b²` when the
    /// two parts disagree in sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Rational::zero());
        let sb = self.b.cmp(&Rational::zero());
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (sa, sb) => {
                let a2 = &self.a * &self.a;
                let two_b2 = &self.b * &self.b * Rational::from_integer(BigInt::from(2));
                // a² = 2b² is impossible for (a, b) ≠ (0, 0)
                if a2 > two_b2 {
                    sa
                } else {
                    sb
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.signum() == Ordering::Less
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Field norm `a² − 2b²`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * Rational::from_integer(BigInt::from(2))
    }

    pub fn conjugate(&self) -> Self {
        Self::new(self.a.clone(), -&self.b)
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm();
        Ok(Self::new(&self.a / &n, -&self.b / &n))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self::new(&self.a * k, &self.b * k)
    }

    /// Rational bounds `lo ≤ self ≤ hi` with `hi − lo ≤ |b|·2^(1−bits)`.
    pub fn bounds(&self, bits: u32) -> (Rational, Rational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (s_lo, s_hi) = sqrt2_bounds(bits);
        let x = &self.a + &self.b * &s_lo;
        let y = &self.a + &self.b * &s_hi;
        if x <= y {
            (x, y)
        } else {
            (y, x)
        }
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.b.is_zero() {
            return self.a.floor().to_integer();
        }
        // irrational, so refinement eventually isolates the floor
        let mut bits = 32;
        loop {
            let (lo, hi) = self.bounds(bits);
            let fl = lo.floor().to_integer();
            if fl == hi.floor().to_integer() {
                return fl;
            }
            bits *= 2;
        }
    }

    /// Representative in `[0, 1)` of the class modulo 1.
    pub fn fract(&self) -> Self {
        let fl = Rational::from_integer(self.floor());
        Self::new(&self.a - fl, self.b.clone())
    }
}

/// Tight dyadic bounds on √2 from the integer square root of `2·4^bits`.
pub(crate) fn sqrt2_bounds(bits: u32) -> (Rational, Rational) {
    let scaled = BigInt::from(2) << (2 * bits as usize);
    let r = scaled.sqrt();
    let den = pow2(-(bits as i64));
    let lo = Rational::from_integer(r.clone()) * &den;
    let hi = Rational::from_integer(r + 1) * &den;
    (lo, hi)
}

impl Ord for QSqrt2 {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for QSqrt2 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Rational> for QSqrt2 {
    fn from(a: Rational) -> Self {
        Self::rational(a)
    }
}

impl From<i64> for QSqrt2 {
    fn from(n: i64) -> Self {
        Self::integer(n)
    }
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = Rational::from_integer(BigInt::from(2));
        QSqrt2::new(
            &self.a * &rhs.a + &self.b * &rhs.b * two,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2::new(-&self.a, -&self.b)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QSqrt2 {
            type Output = QSqrt2;
            fn $m(self, rhs: QSqrt2) -> QSqrt2 {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> QSqrt2 {
        QSqrt2::ratio(n, d)
    }

    #[test]
    fn conjugate_product_is_norm() {
        let x = QSqrt2::new(Rational::one(), Rational::one());
        let y = x.conjugate();
        assert_eq!(&x * &y, QSqrt2::integer(-1));
    }

    #[test]
    fn sign_of_three_minus_two_sqrt2() {
        let v = &QSqrt2::integer(3) - &QSqrt2::sqrt2().scale(&Rational::from_integer(2.into()));
        assert!(v.is_positive());
        let w = &QSqrt2::integer(2) - &QSqrt2::sqrt2().scale(&Rational::from_integer(2.into()));
        assert!(w.is_negative());
    }

    #[test]
    fn recip_roundtrip() {
        let x = QSqrt2::new(Rational::new(3.into(), 7.into()), Rational::new((-2).into(), 5.into()));
        assert_eq!(&x * &x.recip().unwrap(), QSqrt2::one());
        assert_eq!(QSqrt2::zero().recip(), Err(Error::DivisionByZero));
    }

    #[test]
    fn floor_and_fract() {
        assert_eq!(QSqrt2::sqrt2().floor(), BigInt::from(1));
        assert_eq!((-QSqrt2::sqrt2()).floor(), BigInt::from(-2));
        assert_eq!(q(-1, 3).floor(), BigInt::from(-1));
        assert_eq!(q(7, 2).fract(), q(1, 2));
        let f = QSqrt2::sqrt2().fract();
        assert!(f.is_positive() && f < QSqrt2::one());
    }

    #[test]
    fn sqrt2_bounds_bracket() {
        let (lo, hi) = sqrt2_bounds(20);
        let two = Rational::from_integer(2.into());
        assert!(&lo * &lo < two && &hi * &hi > two);
        assert!(hi - lo <= Rational::new(1.into(), BigInt::from(1) << 20usize));
    }
}
