//! Metric spaces, points and exactly-queryable subsets of the line.

mod sample;
mod set;

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use sample::sample_ball;
pub use set::StructuredSet;

use crate::error::{Error, Result};
use crate::scalar::{Enclosure, QSqrt2, Rational, Scalar};

/// A point of a space, stored as its line coordinates.
///
/// Line and circle points have one coordinate, torus points two, and
/// product points the coordinates of the left factor followed by those of
/// the right factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(Vec<Scalar>);

impl Point {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Point(coords)
    }

    pub fn line(x: impl Into<Scalar>) -> Self {
        Point(vec![x.into()])
    }

    pub fn pair(x: impl Into<Scalar>, y: impl Into<Scalar>) -> Self {
        Point(vec![x.into(), y.into()])
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_exact(&self) -> bool {
        self.0.iter().all(Scalar::is_exact)
    }

    /// The coordinate of a one-dimensional exact point.
    pub fn exact_line(&self) -> Option<&QSqrt2> {
        match self.0.as_slice() {
            [x] => x.as_exact(),
            _ => None,
        }
    }

    pub fn split_at(&self, k: usize) -> (Point, Point) {
        let (a, b) = self.0.split_at(k);
        (Point(a.to_vec()), Point(b.to_vec()))
    }

    pub fn concat(a: &Point, b: &Point) -> Point {
        Point(a.0.iter().chain(&b.0).cloned().collect())
    }
}

impl From<Scalar> for Point {
    fn from(x: Scalar) -> Self {
        Point::line(x)
    }
}

impl From<QSqrt2> for Point {
    fn from(x: QSqrt2) -> Self {
        Point::line(x)
    }
}

impl From<i64> for Point {
    fn from(n: i64) -> Self {
        Point::line(n)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [x] => x.fmt(f),
            cs => {
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    c.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.as_slice() {
            [x] => x.serialize(s),
            cs => cs.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Many(Vec<Scalar>),
            One(Scalar),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Many(v) if v.is_empty() => {
                return Err(serde::de::Error::custom("a point needs at least one coordinate"))
            }
            Repr::Many(v) => Point(v),
            Repr::One(x) => Point(vec![x]),
        })
    }
}

/// Bounded, increasing reshaping of a distance, `γ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GammaFn {
    /// `t ↦ t / (1 + t)`.
    RatioBound,
    /// `t ↦ min(t, c)`.
    Capped { c: QSqrt2 },
}

impl GammaFn {
    pub fn apply(&self, t: &Scalar) -> Scalar {
        match (self, t) {
            (GammaFn::RatioBound, Scalar::Exact(t)) => {
                let one = QSqrt2::one();
                Scalar::Exact(t.checked_div(&(&one + t)).expect("1 + t > 0 for distances"))
            }
            (GammaFn::RatioBound, Scalar::Interval(e)) => {
                let g = |q: &Rational| {
                    let q = q.clone().max(Rational::zero());
                    &q / (Rational::one() + &q)
                };
                Scalar::Interval(Enclosure::new(&g(e.lo()), &g(e.hi()), e.precision()))
            }
            (GammaFn::Capped { c }, t) => t.min(&Scalar::Exact(c.clone())),
        }
    }

    /// Least upper bound of the values of γ.
    pub fn sup(&self) -> QSqrt2 {
        match self {
            GammaFn::RatioBound => QSqrt2::one(),
            GammaFn::Capped { c } => c.clone(),
        }
    }

    /// Radius `ρ` with `{t : γ(t) < s} = [0, ρ)`, or `None` when every
    /// distance qualifies. Enclosed `s` is replaced by its lower bound, which
    /// yields a smaller ball.
    pub fn preimage_radius(&self, s: &Scalar) -> Option<QSqrt2> {
        let s = match s {
            Scalar::Exact(x) => x.clone(),
            Scalar::Interval(e) => QSqrt2::rational(e.lo().clone()),
        };
        match self {
            GammaFn::RatioBound if s < QSqrt2::one() => {
                Some(s.checked_div(&(&QSqrt2::one() - &s)).expect("s < 1"))
            }
            GammaFn::Capped { c } if s <= *c => Some(s),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GammaFn::Capped { c } if !c.is_positive() => {
                Err(Error::InvalidArgument(format!("cap must be positive, got {c}")))
            }
            _ => Ok(()),
        }
    }
}

/// The carriers on which orbits are measured.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricSpace {
    RealLine,
    /// ℝ/ℤ with the arc distance.
    Circle,
    /// ℝ²/ℤ² with the maximum of the two arc distances.
    Torus2,
    Product {
        left: Box<MetricSpace>,
        right: Box<MetricSpace>,
        gamma: GammaFn,
    },
    BoundedTransform {
        inner: Box<MetricSpace>,
        gamma: GammaFn,
    },
}

/// The part of the line covered by a ball, for spaces built on the line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineBall {
    Radius(QSqrt2),
    Everything,
}

impl MetricSpace {
    pub fn product(left: MetricSpace, right: MetricSpace, gamma: GammaFn) -> Self {
        MetricSpace::Product { left: Box::new(left), right: Box::new(right), gamma }
    }

    pub fn bounded(inner: MetricSpace, gamma: GammaFn) -> Self {
        MetricSpace::BoundedTransform { inner: Box::new(inner), gamma }
    }

    pub fn dim(&self) -> usize {
        match self {
            MetricSpace::RealLine | MetricSpace::Circle => 1,
            MetricSpace::Torus2 => 2,
            MetricSpace::Product { left, right, .. } => left.dim() + right.dim(),
            MetricSpace::BoundedTransform { inner, .. } => inner.dim(),
        }
    }

    /// Is every coordinate taken modulo 1?
    pub fn is_periodic(&self) -> bool {
        matches!(self, MetricSpace::Circle | MetricSpace::Torus2)
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if p.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() })
        }
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Result<Scalar> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.distance_unchecked(p.coords(), q.coords()))
    }

    fn distance_unchecked(&self, p: &[Scalar], q: &[Scalar]) -> Scalar {
        match self {
            MetricSpace::RealLine => p[0].sub(&q[0]).abs(),
            MetricSpace::Circle => arc(&p[0].sub(&q[0])),
            MetricSpace::Torus2 => arc(&p[0].sub(&q[0])).max(&arc(&p[1].sub(&q[1]))),
            MetricSpace::Product { left, right, gamma } => {
                let k = left.dim();
                let d1 = left.distance_unchecked(&p[..k], &q[..k]);
                let d2 = right.distance_unchecked(&p[k..], &q[k..]);
                gamma.apply(&d1).max(&gamma.apply(&d2))
            }
            MetricSpace::BoundedTransform { inner, gamma } => {
                gamma.apply(&inner.distance_unchecked(p, q))
            }
        }
    }

    /// Canonical representative of a point: coordinates reduced into
    /// `[0, 1)` on periodic factors.
    pub fn normalize(&self, p: &Point) -> Point {
        let mut out = Vec::with_capacity(p.dim());
        self.normalize_into(p.coords(), &mut out);
        Point(out)
    }

    fn normalize_into(&self, p: &[Scalar], out: &mut Vec<Scalar>) {
        match self {
            MetricSpace::RealLine => out.extend_from_slice(p),
            MetricSpace::Circle | MetricSpace::Torus2 => out.extend(p.iter().map(|c| match c {
                Scalar::Exact(x) => Scalar::Exact(x.fract()),
                other => other.clone(),
            })),
            MetricSpace::Product { left, right, .. } => {
                let k = left.dim();
                left.normalize_into(&p[..k], out);
                right.normalize_into(&p[k..], out);
            }
            MetricSpace::BoundedTransform { inner, .. } => inner.normalize_into(p, out),
        }
    }

    /// For spaces whose metric is an increasing function of `|x − y|` on
    /// the line, the line radius of the ball of radius `r`. `None` for
    /// other spaces or for an enclosed radius.
    pub fn line_ball(&self, r: &Scalar) -> Option<LineBall> {
        match self {
            MetricSpace::RealLine => r.as_exact().map(|r| LineBall::Radius(r.clone())),
            MetricSpace::BoundedTransform { inner, gamma } => {
                r.as_exact()?;
                match gamma.preimage_radius(r) {
                    Some(rho) => inner.line_ball(&Scalar::Exact(rho)),
                    None => matches!(**inner, MetricSpace::RealLine).then_some(LineBall::Everything),
                }
            }
            _ => None,
        }
    }
}

/// Arc distance `min(t, 1 − t)` of the fractional part `t` of `d`.
fn arc(d: &Scalar) -> Scalar {
    match d {
        Scalar::Exact(x) => {
            let t = x.fract();
            let u = &QSqrt2::one() - &t;
            Scalar::Exact(t.min(u))
        }
        Scalar::Interval(e) => {
            let k = Rational::from_integer(e.lo().floor().to_integer());
            let half = Rational::new(1.into(), 2.into());
            let (lo, hi) = (e.lo() - &k, e.hi() - &k);
            if hi > Rational::one() {
                return Scalar::Interval(Enclosure::new(&Rational::zero(), &half, e.precision()));
            }
            let tent = |t: &Rational| t.clone().min(Rational::one() - t);
            let (a, b) = (tent(&lo), tent(&hi));
            let top = if lo <= half && half <= hi { half } else { a.clone().max(b.clone()) };
            Scalar::Interval(Enclosure::new(&a.min(b), &top, e.precision()))
        }
    }
}
