use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{pow2, QSqrt2, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Round {
    Down,
    Up,
}

/// Round `q` to a dyadic number carrying roughly `precision` significant
/// bits, towards −∞ or +∞.
fn round_dyadic(q: &Rational, precision: u32, dir: Round) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let e = q.numer().bits() as i64 - q.denom().bits() as i64;
    let k = precision as i64 - e;
    let scaled = q * pow2(k);
    let m = match dir {
        Round::Down => scaled.floor(),
        Round::Up => scaled.ceil(),
    };
    m * pow2(-k)
}

/// A closed interval `[lo, hi]` with dyadic endpoints.
///
/// Every operation rounds the lower endpoint down and the upper endpoint up,
/// so the result encloses the exact result for every choice of operands in
/// the input intervals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Enclosure {
    lo: Rational,
    hi: Rational,
    precision: u32,
}

impl Enclosure {
    /// Outward-rounded enclosure of `[lo, hi]`. Panics if `lo > hi`.
    pub fn new(lo: &Rational, hi: &Rational, precision: u32) -> Self {
        assert!(lo <= hi, "enclosure endpoints out of order");
        Self {
            lo: round_dyadic(lo, precision, Round::Down),
            hi: round_dyadic(hi, precision, Round::Up),
            precision,
        }
    }

    /// Builds an enclosure from endpoints that are already dyadic. Used when
    /// parsing serialized intervals; no rounding is applied.
    pub fn from_dyadic(lo: Rational, hi: Rational, precision: u32) -> Result<Self> {
        let dyadic = |q: &Rational| q.denom().magnitude().count_ones() == 1;
        if lo > hi || !dyadic(&lo) || !dyadic(&hi) {
            return Err(Error::Parse(format!("not a dyadic enclosure: [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi, precision })
    }

    pub fn point(q: &Rational, precision: u32) -> Self {
        Self::new(q, q, precision)
    }

    pub fn from_qsqrt2(x: &QSqrt2, precision: u32) -> Self {
        let (lo, hi) = x.bounds(precision + 8);
        Self::new(&lo, &hi, precision)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains_rational(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }

    pub fn contains(&self, x: &QSqrt2) -> bool {
        let lo = QSqrt2::rational(self.lo.clone());
        let hi = QSqrt2::rational(self.hi.clone());
        &lo <= x && x <= &hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains_rational(&Rational::zero())
    }

    /// `true` when `self` lies inside `other`.
    pub fn subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    fn from_candidates(cands: [Rational; 4], precision: u32) -> Self {
        let lo = cands.iter().min().expect("nonempty").clone();
        let hi = cands.iter().max().expect("nonempty").clone();
        Self::new(&lo, &hi, precision)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let p = self.precision.max(rhs.precision);
        Self::new(&(&self.lo + &rhs.lo), &(&self.hi + &rhs.hi), p)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let p = self.precision.max(rhs.precision);
        Self::new(&(&self.lo - &rhs.hi), &(&self.hi - &rhs.lo), p)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let p = self.precision.max(rhs.precision);
        Self::from_candidates(
            [
                &self.lo * &rhs.lo,
                &self.lo * &rhs.hi,
                &self.hi * &rhs.lo,
                &self.hi * &rhs.hi,
            ],
            p,
        )
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        if rhs.contains_zero() {
            return Err(Error::PossiblyZeroDivisor(rhs.to_string()));
        }
        let p = self.precision.max(rhs.precision);
        Ok(Self::from_candidates(
            [
                &self.lo / &rhs.lo,
                &self.lo / &rhs.hi,
                &self.hi / &rhs.lo,
                &self.hi / &rhs.hi,
            ],
            p,
        ))
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
            precision: self.precision,
        }
    }

    pub fn abs(&self) -> Self {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            self.neg()
        } else {
            let m = (-&self.lo).max(self.hi.clone());
            Self {
                lo: Rational::zero(),
                hi: m,
                precision: self.precision,
            }
        }
    }

    /// Smallest enclosure of both operands' pointwise maximum.
    pub fn max(&self, rhs: &Self) -> Self {
        Self {
            lo: self.lo.clone().max(rhs.lo.clone()),
            hi: self.hi.clone().max(rhs.hi.clone()),
            precision: self.precision.max(rhs.precision),
        }
    }

    pub fn min(&self, rhs: &Self) -> Self {
        Self {
            lo: self.lo.clone().min(rhs.lo.clone()),
            hi: self.hi.clone().min(rhs.hi.clone()),
            precision: self.precision.max(rhs.precision),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Enclosure::point(&Rational::one(), self.precision);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Enclosure of the real cube root, which is monotone on ℝ.
    pub fn cbrt(&self) -> Self {
        let lo = signed_root_bound(&self.lo, 3, self.precision, Round::Down);
        let hi = signed_root_bound(&self.hi, 3, self.precision, Round::Up);
        Self {
            lo,
            hi,
            precision: self.precision,
        }
    }

    /// Compares two enclosures; `None` when they overlap.
    pub fn certain_cmp(&self, rhs: &Self) -> Option<Ordering> {
        if self.lo > rhs.hi {
            Some(Ordering::Greater)
        } else if self.hi < rhs.lo {
            Some(Ordering::Less)
        } else if self.is_degenerate() && rhs.is_degenerate() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

impl std::fmt::Display for Enclosure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]@{}", self.lo, self.hi, self.precision)
    }
}

/// Floor of `log2` from below: an integer `e` with `2^e ≤ q` for `q > 0`.
fn log2_floor_bound(q: &Rational) -> i64 {
    q.numer().bits() as i64 - 1 - q.denom().bits() as i64
}

/// Dyadic bracket `lo ≤ q^(1/n) ≤ hi` at scale `2^-k`, with a flag telling
/// whether the root is exactly `lo`.
fn nth_root_bracket(q: &Rational, n: u32, k: i64) -> (Rational, Rational, bool) {
    debug_assert!(!q.is_negative());
    debug_assert!(k >= 0);
    let shift = (k as usize) * (n as usize);
    let scaled_num = q.numer() << shift;
    let m: BigInt = &scaled_num / q.denom();
    let r = m.nth_root(n);
    let exact = num_traits::pow(r.clone(), n as usize) * q.denom() == scaled_num;
    let unit = pow2(-k);
    let lo = Rational::from_integer(r.clone()) * &unit;
    let hi = if exact {
        lo.clone()
    } else {
        Rational::from_integer(r + 1) * &unit
    };
    (lo, hi, exact)
}

/// Scale exponent giving relative width `2^-precision` for `q^(1/n)`.
fn root_scale(q: &Rational, n: u32, precision: u32) -> i64 {
    let e = log2_floor_bound(q).div_euclid(n as i64);
    (precision as i64 - e).max(1)
}

fn signed_root_bound(q: &Rational, n: u32, precision: u32, dir: Round) -> Rational {
    if q.is_zero() {
        return Rational::zero();
    }
    let mag = q.abs();
    let k = root_scale(&mag, n, precision);
    let (lo, hi, _) = nth_root_bracket(&mag, n, k);
    match (q.is_negative(), dir) {
        (false, Round::Down) => lo,
        (false, Round::Up) => hi,
        (true, Round::Down) => -hi,
        (true, Round::Up) => -lo,
    }
}

/// Enclosure of `base^(1/n)` for a positive rational `base`.
///
/// The width is at most `2^(2 - precision)` times the root, and raising
/// `precision` yields nested intervals.
pub fn root_enclosure(base: &Rational, n: u32, precision: u32) -> Enclosure {
    assert!(n >= 1, "root index must be positive");
    assert!(base.is_positive(), "root base must be positive");
    let k = root_scale(base, n, precision);
    let (lo, hi, _) = nth_root_bracket(base, n, k);
    Enclosure { lo, hi, precision }
}

/// Exact rational `n`-th root when `q` is a perfect `n`-th power.
pub fn exact_root(q: &Rational, n: u32) -> Option<Rational> {
    if q.is_negative() && n.is_multiple_of(2) {
        return None;
    }
    let mag = q.abs();
    let rn = mag.numer().nth_root(n);
    let rd = mag.denom().nth_root(n);
    let ok = num_traits::pow(rn.clone(), n as usize) == *mag.numer()
        && num_traits::pow(rd.clone(), n as usize) == *mag.denom();
    ok.then(|| {
        let r = Rational::new(rn, rd);
        if q.is_negative() {
            -r
        } else {
            r
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// Independent oracle: bisection on `t^n = base` over rationals.
    fn bisect_root(base: &Rational, n: u32, steps: u32) -> (Rational, Rational) {
        let mut lo = Rational::zero();
        let mut hi = base.clone().max(Rational::one());
        for _ in 0..steps {
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            if num_traits::pow(mid.clone(), n as usize) <= *base {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo, hi)
    }

    #[test]
    fn root_of_two_index_one_is_exact() {
        for p in [4, 20, 64] {
            let e = root_enclosure(&r(2, 1), 1, p);
            assert_eq!(e.lo(), &r(2, 1));
            assert_eq!(e.hi(), &r(2, 1));
        }
    }

    #[test]
    fn square_and_tenth_roots_match_bisection() {
        let tol = r(1, 100_000);
        for n in [2u32, 10] {
            let e = root_enclosure(&r(2, 1), n, 20);
            let (blo, bhi) = bisect_root(&r(2, 1), n, 60);
            assert!(e.lo() <= &blo && &bhi <= e.hi(), "n={n}: {e}");
            assert!(e.width() < tol, "n={n}: width {}", e.width());
        }
        // 1.0717734... for n = 10
        let e = root_enclosure(&r(2, 1), 10, 20);
        assert!(e.contains_rational(&r(10_717_734, 10_000_000)));
    }

    #[test]
    fn refinement_is_nested() {
        for n in 1..12u32 {
            let mut prev = root_enclosure(&r(3, 7), n, 4);
            for p in 5..80 {
                let cur = root_enclosure(&r(3, 7), n, p);
                assert!(cur.subset_of(&prev), "n={n} p={p}");
                prev = cur;
            }
        }
    }

    #[test]
    fn width_bound_holds_for_small_bases() {
        for (num, den) in [(1, 1000), (2, 1), (1_000_000, 3), (5, 8)] {
            for n in 1..8u32 {
                let p = 30;
                let e = root_enclosure(&r(num, den), n, p);
                let bound = e.lo() * pow2(2 - p as i64);
                assert!(e.width() <= bound, "{num}/{den} n={n}");
            }
        }
    }

    #[test]
    fn division_by_interval_containing_zero() {
        let a = Enclosure::point(&r(1, 1), 32);
        let b = Enclosure::new(&r(-1, 2), &r(1, 2), 32);
        assert!(matches!(a.div(&b), Err(Error::PossiblyZeroDivisor(_))));
    }

    #[test]
    fn cube_root_brackets() {
        let e = Enclosure::new(&r(-9, 1), &r(2, 1), 40).cbrt();
        let lo3 = num_traits::pow(e.lo().clone(), 3);
        let hi3 = num_traits::pow(e.hi().clone(), 3);
        assert!(lo3 <= r(-9, 1) && hi3 >= r(2, 1));
        assert_eq!(exact_root(&r(-27, 8), 3), Some(r(-3, 2)));
        assert_eq!(exact_root(&r(2, 1), 3), None);
    }

    #[test]
    fn sqrt2_embedding_contains_value() {
        let e = Enclosure::from_qsqrt2(&QSqrt2::sqrt2(), 24);
        assert!(e.lo() >= &r(1_414_213, 1_000_000) && e.hi() <= &r(1_414_214, 1_000_000));
        assert!(e.contains(&QSqrt2::sqrt2()));
    }
}
