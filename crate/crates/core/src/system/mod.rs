//! Orbit evaluation `O_n(x)` for the systems the verdict engine consumes.
//!
//! Every system evaluates forward orbits only. Iterated maps and their
//! constructions start at `O_0(x) = x`. A time-varying family evaluates
//! `O_n = f_n ∘ … ∘ f_0`, so `O_0 = f_0` already applies one map. Direct
//! rules give `O_n` without composing anything.

mod bounds;
mod modulus;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use bounds::{expansion_bounds, ExpansionBounds, Rate};
pub use modulus::ModulusFn;

use crate::error::{Error, Result};
use crate::scalar::{exact_root, root_enclosure, QSqrt2, Rational, Scalar, Truth, DEFAULT_PRECISION};
use crate::space::{GammaFn, Point, StructuredSet};

fn zero() -> Scalar {
    Scalar::zero()
}

/// A single self-map of the line, circle or torus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MapExpr {
    /// `x ↦ λx + c`.
    Affine {
        lambda: Scalar,
        #[serde(default = "zero")]
        c: Scalar,
    },
    /// Chooses a branch by the rationality of an exact input.
    RationalityBranch { rational: Box<MapExpr>, irrational: Box<MapExpr> },
    /// `x ↦ kx mod 1`.
    CircleLinear { k: i64 },
    /// `v ↦ Mv mod 1` for an integer matrix with `|det M| = 1`.
    TorusLinear { m: [[i64; 2]; 2] },
    /// `x ↦ x³`.
    Cubic,
    /// `x ↦ ∛x`.
    CubeRoot,
    Constant { v: Scalar },
}

impl MapExpr {
    pub fn affine(lambda: impl Into<Scalar>, c: impl Into<Scalar>) -> Self {
        MapExpr::Affine { lambda: lambda.into(), c: c.into() }
    }

    pub fn linear(lambda: impl Into<Scalar>) -> Self {
        MapExpr::affine(lambda, 0)
    }

    pub fn identity() -> Self {
        MapExpr::linear(1)
    }

    pub fn constant(v: impl Into<Scalar>) -> Self {
        MapExpr::Constant { v: v.into() }
    }

    pub fn branch(rational: MapExpr, irrational: MapExpr) -> Self {
        MapExpr::RationalityBranch { rational: Box::new(rational), irrational: Box::new(irrational) }
    }

    pub fn dim(&self) -> usize {
        match self {
            MapExpr::TorusLinear { .. } => 2,
            _ => 1,
        }
    }

    /// Is the output taken modulo 1?
    pub fn is_periodic(&self) -> bool {
        matches!(self, MapExpr::CircleLinear { .. } | MapExpr::TorusLinear { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MapExpr::CircleLinear { k } if *k < 2 => {
                Err(Error::InvalidArgument(format!("circle map needs k ≥ 2, got {k}")))
            }
            MapExpr::TorusLinear { m } => {
                let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
                if det.abs() == 1 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("torus matrix {m:?} has determinant {det}")))
                }
            }
            MapExpr::RationalityBranch { rational, irrational } => {
                rational.validate()?;
                irrational.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn apply(&self, x: &Point) -> Result<Point> {
        self.apply_at(x, DEFAULT_PRECISION)
    }

    /// Evaluates the map; inexact results are enclosed at `precision` bits.
    pub fn apply_at(&self, x: &Point, precision: u32) -> Result<Point> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        let c = x.coords();
        Ok(match self {
            MapExpr::TorusLinear { m } => {
                let row = |r: [i64; 2]| {
                    reduce(&Scalar::integer(r[0]).mul(&c[0]).add(&Scalar::integer(r[1]).mul(&c[1])))
                };
                Point::new(vec![row(m[0]), row(m[1])])
            }
            _ => Point::line(self.apply_scalar(&c[0], precision)?),
        })
    }

    fn apply_scalar(&self, x: &Scalar, precision: u32) -> Result<Scalar> {
        Ok(match self {
            MapExpr::Affine { lambda, c } => lambda.mul(x).add(c),
            MapExpr::RationalityBranch { rational, irrational } => match x.is_rational() {
                Truth::True => rational.apply_scalar(x, precision)?,
                Truth::False => irrational.apply_scalar(x, precision)?,
                Truth::Unknown => return Err(Error::RationalityUndecidable(x.to_string())),
            },
            MapExpr::CircleLinear { k } => reduce(&Scalar::integer(*k).mul(x)),
            MapExpr::Cubic => x.pow(3),
            MapExpr::CubeRoot => x.cbrt_at(precision),
            MapExpr::Constant { v } => v.clone(),
            MapExpr::TorusLinear { .. } => unreachable!("two-dimensional map"),
        })
    }

    /// `self^m` for a torus automorphism, by integer matrix powers.
    fn torus_power(m: &[[i64; 2]; 2], e: u32) -> [[i64; 2]; 2] {
        let mul = |a: [[i64; 2]; 2], b: [[i64; 2]; 2]| {
            let mut c = [[0i64; 2]; 2];
            for i in 0..2 {
                for j in 0..2 {
                    c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
                }
            }
            c
        };
        (0..e).fold([[1, 0], [0, 1]], |acc, _| mul(acc, *m))
    }
}

/// Representative in `[0, 1)` for exact values; enclosures are left as
/// they are since the arc distance reduces them anyway.
fn reduce(x: &Scalar) -> Scalar {
    match x {
        Scalar::Exact(q) => Scalar::Exact(q.fract()),
        other => other.clone(),
    }
}

/// The maps `f_n` of a time-varying system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Family {
    /// `f_n = maps[n mod len]`.
    Periodic { maps: Vec<MapExpr> },
    /// `f_n(x) = s_n` on rationals and `s_n·x` on irrationals, `s_n = a·n + b`.
    BranchLinear { a: Scalar, b: Scalar },
    /// `f_n(x) = s_n·x`, `s_n = a·n + b`.
    AffineLinear { a: Scalar, b: Scalar },
}

impl Family {
    pub fn map(&self, n: u64) -> MapExpr {
        match self {
            Family::Periodic { maps } => maps[(n % maps.len() as u64) as usize].clone(),
            Family::BranchLinear { a, b } => {
                let s = slope(a, b, n);
                MapExpr::branch(MapExpr::constant(s.clone()), MapExpr::linear(s))
            }
            Family::AffineLinear { a, b } => MapExpr::linear(slope(a, b, n)),
        }
    }

    fn dim(&self) -> usize {
        match self {
            Family::Periodic { maps } => maps.first().map_or(1, MapExpr::dim),
            _ => 1,
        }
    }
}

fn slope(a: &Scalar, b: &Scalar, n: u64) -> Scalar {
    a.mul(&Scalar::rational(Rational::from_integer(BigInt::from(n)))).add(b)
}

/// Rules that give `O_n(x)` directly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DirectRule {
    /// `O_0(x) = x` and `O_n(x) = base^(1/n)·x` for `n ≥ 1`.
    RootScale {
        #[serde(with = "crate::scalar::rational_serde")]
        base: Rational,
    },
}

impl DirectRule {
    fn eval(&self, n: u64, x: &Point, precision: u32) -> Result<Point> {
        match self {
            DirectRule::RootScale { base } => {
                if n == 0 {
                    return Ok(x.clone());
                }
                let [c] = x.coords() else {
                    return Err(Error::DimensionMismatch { expected: 1, found: x.dim() });
                };
                let e = u32::try_from(n).map_err(|_| Error::InvalidArgument(format!("horizon {n} too large")))?;
                Ok(Point::line(root_factor(base, e, precision).mul(c)))
            }
        }
    }
}

/// `base^(1/n)` at `precision`, shared across calls.
fn root_factor(base: &Rational, n: u32, precision: u32) -> Scalar {
    type Key = (Rational, u32, u32);
    static CACHE: OnceLock<Mutex<HashMap<Key, Scalar>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (base.clone(), n, precision);
    if let Some(f) = cache.lock().expect("root cache poisoned").get(&key) {
        return f.clone();
    }
    let factor = match exact_root(base, n) {
        Some(r) => Scalar::rational(r),
        None => Scalar::Interval(root_enclosure(base, n, precision)),
    };
    cache.lock().expect("root cache poisoned").insert(key, factor.clone());
    factor
}

/// Anything that evaluates a forward orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum OrbitSystem {
    Iterated { map: MapExpr },
    TimeVarying { family: Family },
    DirectIterate { rule: DirectRule },
    Product { left: Box<OrbitSystem>, right: Box<OrbitSystem>, gamma: GammaFn },
    /// `g ∘ inner ∘ g⁻¹`.
    Conjugated { g: MapExpr, inner: Box<OrbitSystem>, g_inv: MapExpr, modulus: ModulusFn },
    /// `O_r = inner.O_{r·m}`.
    Power { inner: Box<OrbitSystem>, m: u32 },
    /// `inner` on an invariant carrier; evaluation fails once an orbit
    /// leaves it.
    Restricted { inner: Box<OrbitSystem>, carrier: StructuredSet },
}

impl OrbitSystem {
    pub fn iterated(map: MapExpr) -> Self {
        OrbitSystem::Iterated { map }
    }

    pub fn dim(&self) -> usize {
        match self {
            OrbitSystem::Iterated { map } => map.dim(),
            OrbitSystem::TimeVarying { family } => family.dim(),
            OrbitSystem::DirectIterate { .. } => 1,
            OrbitSystem::Product { left, right, .. } => left.dim() + right.dim(),
            OrbitSystem::Conjugated { inner, .. }
            | OrbitSystem::Power { inner, .. }
            | OrbitSystem::Restricted { inner, .. } => inner.dim(),
        }
    }

    /// Does `O_n` evolve a state, so that equal states at one step force
    /// equal states at every later step?
    pub fn is_autonomous_state(&self) -> bool {
        match self {
            OrbitSystem::Iterated { .. } | OrbitSystem::TimeVarying { .. } => true,
            OrbitSystem::DirectIterate { .. } => false,
            OrbitSystem::Product { left, right, .. } => {
                left.is_autonomous_state() && right.is_autonomous_state()
            }
            OrbitSystem::Conjugated { inner, .. }
            | OrbitSystem::Power { inner, .. }
            | OrbitSystem::Restricted { inner, .. } => inner.is_autonomous_state(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            OrbitSystem::Iterated { map } => map.validate(),
            OrbitSystem::TimeVarying { family: Family::Periodic { maps } } => {
                if maps.is_empty() {
                    return Err(Error::InvalidArgument("periodic family has no maps".into()));
                }
                let d = maps[0].dim();
                for m in maps {
                    m.validate()?;
                    if m.dim() != d {
                        return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
                    }
                }
                Ok(())
            }
            OrbitSystem::TimeVarying { .. } => Ok(()),
            OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base } } => {
                if base.is_positive() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("root base must be positive, got {base}")))
                }
            }
            OrbitSystem::Product { left, right, gamma } => {
                gamma.validate()?;
                left.validate()?;
                right.validate()
            }
            OrbitSystem::Conjugated { g, inner, g_inv, .. } => {
                g.validate()?;
                g_inv.validate()?;
                inner.validate()?;
                for m in [g, g_inv] {
                    if m.dim() != inner.dim() {
                        return Err(Error::DimensionMismatch { expected: inner.dim(), found: m.dim() });
                    }
                }
                Ok(())
            }
            OrbitSystem::Power { inner, m } => {
                if *m == 0 {
                    return Err(Error::InvalidArgument("power needs m ≥ 1".into()));
                }
                inner.validate()
            }
            OrbitSystem::Restricted { inner, carrier } => {
                carrier.validate()?;
                if inner.dim() != 1 {
                    return Err(Error::DimensionMismatch { expected: 1, found: inner.dim() });
                }
                inner.validate()
            }
        }
    }

    pub fn iterate(&self, n: u64, x: &Point) -> Result<Point> {
        self.iterate_at(n, x, DEFAULT_PRECISION)
    }

    pub fn iterate_at(&self, n: u64, x: &Point, precision: u32) -> Result<Point> {
        let mut prefix = self.orbit_prefix_at(x, n, precision)?;
        Ok(prefix.pop().expect("prefix has n + 1 entries"))
    }

    /// `[O_0 x, …, O_N x]`.
    pub fn orbit_prefix(&self, x: &Point, n: u64) -> Result<Vec<Point>> {
        self.orbit_prefix_at(x, n, DEFAULT_PRECISION)
    }

    pub fn orbit_prefix_at(&self, x: &Point, n: u64, precision: u32) -> Result<Vec<Point>> {
        self.orbit(x, precision).take(n as usize + 1).collect()
    }

    /// The lazy orbit `O_0 x, O_1 x, …`. After an error the iterator
    /// yields nothing further.
    pub fn orbit<'a>(&'a self, x: &Point, precision: u32) -> Orbit<'a> {
        let inner = if x.dim() == self.dim() {
            self.raw_orbit(x.clone(), precision)
        } else {
            let e = Error::DimensionMismatch { expected: self.dim(), found: x.dim() };
            Box::new(std::iter::once(Err(e)))
        };
        Orbit { inner, failed: false }
    }

    fn raw_orbit<'a>(&'a self, x: Point, precision: u32) -> Steps<'a> {
        match self {
            OrbitSystem::Iterated { map } => Box::new(std::iter::successors(Some(Ok(x)), move |p| {
                p.as_ref().ok().map(|p| map.apply_at(p, precision))
            })),
            OrbitSystem::TimeVarying { family } => Box::new((0u64..).scan(x, move |cur, k| {
                Some(family.map(k).apply_at(cur, precision).inspect(|p| *cur = p.clone()))
            })),
            OrbitSystem::DirectIterate { rule } => {
                Box::new((0u64..).map(move |k| rule.eval(k, &x, precision)))
            }
            OrbitSystem::Product { left, right, .. } => {
                let (a, b) = x.split_at(left.dim());
                let pairs = left.raw_orbit(a, precision).zip(right.raw_orbit(b, precision));
                Box::new(pairs.map(|(p, q)| Ok(Point::concat(&p?, &q?))))
            }
            OrbitSystem::Conjugated { g, inner, g_inv, .. } => match g_inv.apply_at(&x, precision) {
                Ok(start) => Box::new(
                    inner.raw_orbit(start, precision).map(move |p| g.apply_at(&p?, precision)),
                ),
                Err(e) => Box::new(std::iter::once(Err(e))),
            },
            OrbitSystem::Power { inner, m } => {
                Box::new(inner.raw_orbit(x, precision).step_by(*m as usize))
            }
            OrbitSystem::Restricted { inner, carrier } => {
                let start = x.clone();
                Box::new(inner.raw_orbit(x, precision).map(move |p| {
                    let p = p?;
                    check_in_carrier(carrier, &start, &p)?;
                    Ok(p)
                }))
            }
        }
    }
}

type Steps<'a> = Box<dyn Iterator<Item = Result<Point>> + Send + 'a>;

/// Lazily evaluated forward orbit; see [`OrbitSystem::orbit`].
pub struct Orbit<'a> {
    inner: Steps<'a>,
    failed: bool,
}

impl Iterator for Orbit<'_> {
    type Item = Result<Point>;

    fn next(&mut self) -> Option<Result<Point>> {
        if self.failed {
            return None;
        }
        let item = self.inner.next()?;
        self.failed = item.is_err();
        Some(item)
    }
}

fn check_in_carrier(carrier: &StructuredSet, start: &Point, p: &Point) -> Result<()> {
    let inside = p.exact_line().is_some_and(|q| carrier.contains(q));
    if inside {
        Ok(())
    } else {
        Err(Error::NotInvariant { point: start.to_string(), image: p.to_string() })
    }
}

const INVERSE_PROBES: usize = 100;
const INVERSE_SEED: u64 = 0x6a09_e667;

/// `g ∘ inner ∘ g⁻¹`, after checking `g(g⁻¹(y)) = y` on seeded points.
pub fn conjugate(inner: OrbitSystem, g: MapExpr, g_inv: MapExpr, modulus: ModulusFn) -> Result<OrbitSystem> {
    let sys = OrbitSystem::Conjugated { g, inner: Box::new(inner), g_inv, modulus };
    sys.validate()?;
    let OrbitSystem::Conjugated { g, g_inv, .. } = &sys else { unreachable!() };
    let mut rng = ChaCha8Rng::seed_from_u64(INVERSE_SEED);
    let half_root = QSqrt2::new(Rational::from_integer(0.into()), Rational::new(1.into(), 2.into()));
    for i in 0..INVERSE_PROBES {
        let coords = (0..g.dim())
            .map(|_| {
                let num = rng.random_range(-(1i64 << 18)..(1i64 << 18));
                let q = QSqrt2::ratio(num, 1 << 16);
                Scalar::Exact(if i % 2 == 0 { q } else { &q * &half_root })
            })
            .collect();
        let y = Point::new(coords);
        let back = g.apply(&g_inv.apply(&y)?)?;
        if !same_point(&back, &y, g.is_periodic()) {
            return Err(Error::NotInverse(y.to_string()));
        }
    }
    Ok(sys)
}

fn same_point(a: &Point, b: &Point, periodic: bool) -> bool {
    a.coords().iter().zip(b.coords()).all(|(p, q)| {
        let q = q.as_exact().expect("probe points are exact");
        let q = if periodic { q.fract() } else { q.clone() };
        match p {
            Scalar::Exact(p) if periodic => p.fract() == q,
            other => other.contains(&q),
        }
    })
}

/// `(F × G)_n(x, y) = (F_n x, G_n y)`.
pub fn product(f: OrbitSystem, g: OrbitSystem, gamma: GammaFn) -> OrbitSystem {
    OrbitSystem::Product { left: Box::new(f), right: Box::new(g), gamma }
}

/// `r ↦ F_{r·m}` for a single iterated map.
pub fn power(f: OrbitSystem, m: u32) -> Result<OrbitSystem> {
    if m == 0 {
        return Err(Error::InvalidArgument("power needs m ≥ 1".into()));
    }
    match f {
        OrbitSystem::Iterated { .. } => Ok(OrbitSystem::Power { inner: Box::new(f), m }),
        other => Err(Error::UnsupportedSystemKind(format!(
            "power applies to iterated maps, not {}",
            other.kind_name()
        ))),
    }
}

/// `F` restricted to `carrier`, after checking on `probe_budget` points of
/// the carrier that `O_0` and `O_1` stay inside it.
pub fn restrict(f: OrbitSystem, carrier: StructuredSet, probe_budget: usize) -> Result<OrbitSystem> {
    carrier.validate()?;
    if f.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: f.dim() });
    }
    for x in carrier.elements(probe_budget) {
        let p = Point::line(x);
        for image in f.orbit_prefix(&p, 1)? {
            check_in_carrier(&carrier, &p, &image)?;
        }
    }
    Ok(OrbitSystem::Restricted { inner: Box::new(f), carrier })
}

impl OrbitSystem {
    pub fn kind_name(&self) -> &'static str {
        match self {
            OrbitSystem::Iterated { .. } => "iterated",
            OrbitSystem::TimeVarying { .. } => "time-varying",
            OrbitSystem::DirectIterate { .. } => "direct-iterate",
            OrbitSystem::Product { .. } => "product",
            OrbitSystem::Conjugated { .. } => "conjugated",
            OrbitSystem::Power { .. } => "power",
            OrbitSystem::Restricted { .. } => "restricted",
        }
    }

    /// For `Power` of a torus automorphism, the equivalent single map.
    pub fn flattened_map(&self) -> Option<MapExpr> {
        match self {
            OrbitSystem::Iterated { map } => Some(map.clone()),
            OrbitSystem::Power { inner, m } => match inner.flattened_map()? {
                MapExpr::TorusLinear { m: a } => Some(MapExpr::TorusLinear { m: MapExpr::torus_power(&a, *m) }),
                MapExpr::CircleLinear { k } => Some(MapExpr::CircleLinear { k: k.checked_pow(*m)? }),
                _ => None,
            },
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    fn doubling() -> OrbitSystem {
        OrbitSystem::iterated(MapExpr::linear(2))
    }

    fn time_varying_branch() -> OrbitSystem {
        OrbitSystem::TimeVarying { family: Family::BranchLinear { a: Scalar::one(), b: Scalar::one() } }
    }

    fn branch_collapse() -> OrbitSystem {
        OrbitSystem::iterated(MapExpr::branch(MapExpr::constant(2), MapExpr::linear(2)))
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(doubling().iterate(3, &Point::line(1)).unwrap(), Point::line(8));
        let r = time_varying_branch().iterate(3, &Point::line(Scalar::sqrt2())).unwrap();
        assert_eq!(r, Point::line(Scalar::sqrt2().mul(&Scalar::integer(24))));
        assert_eq!(branch_collapse().iterate(5, &Point::line(s(1, 3))).unwrap(), Point::line(2));
    }

    #[test]
    fn time_varying_recursion() {
        let family = Family::BranchLinear { a: Scalar::one(), b: Scalar::one() };
        let f = OrbitSystem::TimeVarying { family: family.clone() };
        for x in [Point::line(Scalar::sqrt2().mul(&s(1, 3))), Point::line(s(2, 7))] {
            let prefix = f.orbit_prefix(&x, 64).unwrap();
            assert_eq!(prefix[0], family.map(0).apply(&x).unwrap());
            for n in 1..=64usize {
                assert_eq!(prefix[n], family.map(n as u64).apply(&prefix[n - 1]).unwrap());
            }
        }
    }

    #[test]
    fn prefixes() {
        let id = OrbitSystem::iterated(MapExpr::identity());
        assert_eq!(id.orbit_prefix(&Point::line(5), 3).unwrap(), vec![Point::line(5); 4]);
        let d = doubling().orbit_prefix(&Point::line(s(1, 100)), 7).unwrap();
        assert_eq!(d[7], Point::line(s(128, 100)));
        let e41 = OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base: Rational::from_integer(2.into()) } };
        let p = e41.orbit_prefix(&Point::line(1), 2).unwrap();
        assert_eq!(p[0], Point::line(1));
        assert!(p[1].coords()[0].contains(&QSqrt2::integer(2)));
        assert!(p[2].coords()[0].contains(&QSqrt2::sqrt2()));
    }

    #[test]
    fn conjugations() {
        let shift = conjugate(doubling(), MapExpr::affine(1, 1), MapExpr::affine(1, -1), ModulusFn::Identity).unwrap();
        assert_eq!(shift.iterate(3, &Point::line(1)).unwrap(), Point::line(1));
        assert_eq!(shift.iterate(2, &Point::line(2)).unwrap(), Point::line(5));
        let cubic = conjugate(doubling(), MapExpr::Cubic, MapExpr::CubeRoot, ModulusFn::CubicQuarter).unwrap();
        assert_eq!(cubic.iterate(1, &Point::line(8)).unwrap(), Point::line(64));
        let bad = conjugate(doubling(), MapExpr::affine(1, 1), MapExpr::identity(), ModulusFn::Identity);
        assert!(matches!(bad, Err(Error::NotInverse(_))));
    }

    #[test]
    fn products() {
        let p = product(doubling(), doubling(), GammaFn::RatioBound);
        assert_eq!(p.iterate(2, &Point::pair(1, 3)).unwrap(), Point::pair(4, 12));
        let q = product(doubling(), time_varying_branch(), GammaFn::RatioBound);
        let r = q.iterate(1, &Point::pair(Scalar::one(), Scalar::sqrt2())).unwrap();
        assert_eq!(r, Point::pair(Scalar::integer(2), Scalar::sqrt2().mul(&Scalar::integer(2))));
    }

    #[test]
    fn powers() {
        assert_eq!(power(doubling(), 2).unwrap().iterate(3, &Point::line(1)).unwrap(), Point::line(64));
        let cat = OrbitSystem::iterated(MapExpr::TorusLinear { m: [[2, 1], [1, 1]] });
        let sq = power(cat, 2).unwrap();
        assert_eq!(sq.flattened_map(), Some(MapExpr::TorusLinear { m: [[5, 3], [3, 2]] }));
        let x = Point::pair(s(1, 7), s(2, 5));
        let direct = OrbitSystem::iterated(MapExpr::TorusLinear { m: [[5, 3], [3, 2]] });
        assert_eq!(sq.iterate(1, &x).unwrap(), direct.iterate(1, &x).unwrap());
        assert!(matches!(power(time_varying_branch(), 2), Err(Error::UnsupportedSystemKind(_))));
    }

    #[test]
    fn restrictions() {
        assert!(restrict(doubling(), StructuredSet::ray_from(QSqrt2::zero()), 16).is_ok());
        let err = restrict(doubling(), StructuredSet::closed(QSqrt2::zero(), QSqrt2::one()), 16);
        match err {
            Err(Error::NotInvariant { point, .. }) => assert_eq!(point, "3/4"),
            other => panic!("expected NotInvariant, got {other:?}"),
        }
        let r = restrict(doubling(), StructuredSet::ray_from(QSqrt2::zero()), 4).unwrap();
        assert!(matches!(r.iterate(1, &Point::line(-1)), Err(Error::NotInvariant { .. })));
    }

    #[test]
    fn branch_needs_exact_input() {
        let (lo, hi) = QSqrt2::sqrt2().bounds(20);
        let x = Point::line(Scalar::Interval(crate::scalar::Enclosure::new(&lo, &hi, 32)));
        assert!(matches!(branch_collapse().iterate(1, &x), Err(Error::RationalityUndecidable(_))));
    }

    #[test]
    fn serde_shape() {
        let j = r#"{"kind":"iterated","map":{"kind":"rationality-branch","rational":{"kind":"constant","v":"2"},"irrational":{"kind":"affine","lambda":"2","c":"0"}}}"#;
        let sys: OrbitSystem = serde_json::from_str(j).unwrap();
        assert_eq!(sys, branch_collapse());
        let tv: OrbitSystem = serde_json::from_str(r#"{"kind":"time-varying","family":{"rule":"branch-linear","a":"1","b":"1"}}"#).unwrap();
        assert_eq!(tv, time_varying_branch());
    }
}
