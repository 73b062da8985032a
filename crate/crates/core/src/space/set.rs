use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{rational_serde, QSqrt2, Rational};

fn closed() -> bool {
    true
}

fn one() -> u64 {
    1
}

/// A subset of the real line with decidable membership, decidable
/// emptiness and computable intersection with open balls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StructuredSet {
    /// Interval with optional (infinite when absent) endpoints.
    Interval {
        #[serde(default)]
        a: Option<QSqrt2>,
        #[serde(default)]
        b: Option<QSqrt2>,
        #[serde(default = "closed")]
        closed_left: bool,
        #[serde(default = "closed")]
        closed_right: bool,
    },
    Finite { points: Vec<QSqrt2> },
    /// `{sign / n : from ≤ n ≤ to}`; `to` absent means unbounded.
    Harmonic {
        sign: i8,
        #[serde(default = "one")]
        from: u64,
        #[serde(default)]
        to: Option<u64>,
    },
    /// `{a + k·step : k ≥ 0} ∩ [a, b]`.
    RationalGrid {
        #[serde(with = "rational_serde")]
        a: Rational,
        #[serde(with = "rational_serde")]
        b: Rational,
        #[serde(with = "rational_serde")]
        step: Rational,
    },
    /// `{offset + k·step : k ∈ ℤ} ∩ [a, b]` with an irrational offset.
    IrrationalGrid {
        #[serde(with = "rational_serde")]
        a: Rational,
        #[serde(with = "rational_serde")]
        b: Rational,
        #[serde(with = "rational_serde")]
        step: Rational,
        offset: QSqrt2,
    },
    Union { sets: Vec<StructuredSet> },
    Intersection { sets: Vec<StructuredSet> },
    FullLine,
}

impl StructuredSet {
    pub fn closed(a: QSqrt2, b: QSqrt2) -> Self {
        StructuredSet::Interval { a: Some(a), b: Some(b), closed_left: true, closed_right: true }
    }

    pub fn open(a: QSqrt2, b: QSqrt2) -> Self {
        StructuredSet::Interval { a: Some(a), b: Some(b), closed_left: false, closed_right: false }
    }

    /// `[a, ∞)`.
    pub fn ray_from(a: QSqrt2) -> Self {
        StructuredSet::Interval { a: Some(a), b: None, closed_left: true, closed_right: false }
    }

    pub fn harmonic(sign: i8) -> Self {
        StructuredSet::Harmonic { sign, from: 1, to: None }
    }

    pub fn finite(points: Vec<QSqrt2>) -> Self {
        StructuredSet::Finite { points }
    }

    pub fn empty() -> Self {
        StructuredSet::Finite { points: Vec::new() }
    }

    pub fn union(sets: Vec<StructuredSet>) -> Self {
        StructuredSet::Union { sets }
    }

    pub fn intersection(sets: Vec<StructuredSet>) -> Self {
        StructuredSet::Intersection { sets }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        match self {
            StructuredSet::Harmonic { sign, from, to } => {
                if *sign != 1 && *sign != -1 {
                    return bad(format!("harmonic sign must be 1 or -1, got {sign}"));
                }
                if *from == 0 || to.is_some_and(|t| t < *from) {
                    return bad(format!("harmonic range {from}..{to:?} is invalid"));
                }
                Ok(())
            }
            StructuredSet::RationalGrid { step, .. } | StructuredSet::IrrationalGrid { step, .. }
                if !step.is_positive() =>
            {
                bad(format!("grid step must be positive, got {step}"))
            }
            StructuredSet::IrrationalGrid { offset, .. } if offset.is_rational() => {
                bad(format!("grid offset {offset} is rational"))
            }
            StructuredSet::Union { sets } | StructuredSet::Intersection { sets } => {
                sets.iter().try_for_each(StructuredSet::validate)
            }
            _ => Ok(()),
        }
    }

    pub fn contains(&self, x: &QSqrt2) -> bool {
        match self {
            StructuredSet::Union { sets } => sets.iter().any(|s| s.contains(x)),
            StructuredSet::Intersection { sets } => sets.iter().all(|s| s.contains(x)),
            other => other.atoms().iter().any(|a| a.contains(x)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms().is_empty()
    }

    /// Intersection with `other`, in normalized form.
    pub fn intersect(&self, other: &StructuredSet) -> StructuredSet {
        from_atoms(intersect_lists(&self.atoms(), &other.atoms()))
    }

    /// `S_radius(center) ∩ self`, the open ball taken in `|x − y|`.
    ///
    /// The center is not removed; [`StructuredSet::has_point_other_than`]
    /// answers the punctured question.
    pub fn ball_intersect(&self, center: &QSqrt2, radius: &QSqrt2) -> StructuredSet {
        from_atoms(self.ball_atoms(center, radius))
    }

    fn ball_atoms(&self, center: &QSqrt2, radius: &QSqrt2) -> Vec<Atom> {
        let ball = Iv {
            lo: Some((center - radius, false)),
            hi: Some((center + radius, false)),
        };
        self.atoms().iter().filter_map(|a| a.clip(&ball)).collect()
    }

    /// Does the set contain a point different from `x`?
    pub fn has_point_other_than(&self, x: &QSqrt2) -> bool {
        self.atoms().iter().any(|a| !a.is_only(x))
    }

    /// Does every ball around `x` meet the set away from `x`?
    pub fn is_limit_point(&self, x: &QSqrt2) -> bool {
        self.atoms().iter().any(|a| a.accumulates_at(x))
    }

    /// Topological closure in ℝ.
    pub fn closure(&self) -> StructuredSet {
        let mut atoms = Vec::new();
        let mut limit = false;
        for a in self.atoms() {
            match a {
                Atom::Interval(Iv { lo, hi }) => {
                    let close = |b: Bound| b.map(|(v, _)| (v, true));
                    atoms.push(Atom::Interval(Iv { lo: close(lo), hi: close(hi) }));
                }
                Atom::Harmonic { to: None, .. } => {
                    atoms.push(a);
                    limit = true;
                }
                other => atoms.push(other),
            }
        }
        if limit && !atoms.iter().any(|a| a.contains(&QSqrt2::zero())) {
            atoms.push(Atom::Finite(vec![QSqrt2::zero()]));
        }
        from_atoms(atoms)
    }

    /// Up to `m` elements of the set, spread over its atoms in a fixed
    /// order. Interval atoms contribute both rational and irrational points,
    /// dyadic interior points first.
    pub fn elements(&self, m: usize) -> Vec<QSqrt2> {
        let atoms = self.atoms();
        if atoms.is_empty() || m == 0 {
            return Vec::new();
        }
        let per = m.div_ceil(atoms.len()).max(1);
        let mut out: Vec<QSqrt2> = Vec::new();
        for a in &atoms {
            for p in a.elements(per) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.truncate(m);
        out
    }

    /// Up to `m` elements of the set other than `exclude`.
    pub fn candidates(&self, exclude: &QSqrt2, m: usize) -> Vec<QSqrt2> {
        let mut out = self.elements(m + 1);
        out.retain(|p| p != exclude);
        out.truncate(m);
        out
    }

    fn atoms(&self) -> Vec<Atom> {
        let raw = match self {
            StructuredSet::Interval { a, b, closed_left, closed_right } => vec![Atom::Interval(Iv {
                lo: a.clone().map(|a| (a, *closed_left)),
                hi: b.clone().map(|b| (b, *closed_right)),
            })],
            StructuredSet::FullLine => vec![Atom::Interval(Iv { lo: None, hi: None })],
            StructuredSet::Finite { points } => {
                let mut pts = points.clone();
                pts.sort();
                pts.dedup();
                vec![Atom::Finite(pts)]
            }
            StructuredSet::Harmonic { sign, from, to } => {
                vec![Atom::Harmonic { sign: *sign, from: *from, to: *to }]
            }
            StructuredSet::RationalGrid { a, b, step } => {
                let k1 = ((b - a) / step).floor().to_integer();
                vec![Atom::Grid {
                    offset: QSqrt2::rational(a.clone()),
                    step: step.clone(),
                    k0: BigInt::zero(),
                    k1,
                }]
            }
            StructuredSet::IrrationalGrid { a, b, step, offset } => {
                let q = |t: &Rational| QSqrt2::rational(t / step);
                let k0 = int_at_least(&(&q(a) - &offset.scale(&step.recip())));
                let k1 = int_at_most(&(&q(b) - &offset.scale(&step.recip())));
                vec![Atom::Grid { offset: offset.clone(), step: step.clone(), k0, k1 }]
            }
            StructuredSet::Union { sets } => sets.iter().flat_map(|s| s.atoms()).collect(),
            StructuredSet::Intersection { sets } => {
                let mut acc = vec![Atom::Interval(Iv { lo: None, hi: None })];
                for s in sets {
                    acc = intersect_lists(&acc, &s.atoms());
                }
                acc
            }
        };
        raw.into_iter().filter(|a| !a.is_empty()).collect()
    }
}

impl std::fmt::Display for StructuredSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |f: &mut std::fmt::Formatter<'_>, sets: &[StructuredSet], op: &str| {
            f.write_str("(")?;
            for (i, s) in sets.iter().enumerate() {
                if i > 0 {
                    write!(f, " {op} ")?;
                }
                write!(f, "{s}")?;
            }
            f.write_str(")")
        };
        match self {
            StructuredSet::Interval { a, b, closed_left, closed_right } => {
                let l = if a.is_some() && *closed_left { "[" } else { "(" };
                let r = if b.is_some() && *closed_right { "]" } else { ")" };
                let end = |e: &Option<QSqrt2>, inf: &str| e.as_ref().map_or(inf.to_string(), |v| v.to_string());
                write!(f, "{l}{}, {}{r}", end(a, "-inf"), end(b, "inf"))
            }
            StructuredSet::Finite { points } => {
                let pts: Vec<String> = points.iter().map(|p| p.to_string()).collect();
                write!(f, "{{{}}}", pts.join(", "))
            }
            StructuredSet::Harmonic { sign, from, to } => {
                let s = if *sign < 0 { "-" } else { "" };
                match to {
                    Some(t) => write!(f, "{{{s}1/n : {from} <= n <= {t}}}"),
                    None => write!(f, "{{{s}1/n : n >= {from}}}"),
                }
            }
            StructuredSet::RationalGrid { a, b, step } => write!(f, "{{{a} + k*{step}}} in [{a}, {b}]"),
            StructuredSet::IrrationalGrid { a, b, step, offset } => {
                write!(f, "{{{offset} + k*{step}}} in [{a}, {b}]")
            }
            StructuredSet::Union { sets } if sets.is_empty() => f.write_str("{}"),
            StructuredSet::Union { sets } => join(f, sets, "u"),
            StructuredSet::Intersection { sets } => join(f, sets, "n"),
            StructuredSet::FullLine => f.write_str("R"),
        }
    }
}

type Bound = Option<(QSqrt2, bool)>;

/// Interval with optional endpoints, each tagged with closedness.
#[derive(Clone, Debug)]
struct Iv {
    lo: Bound,
    hi: Bound,
}

impl Iv {
    fn contains(&self, x: &QSqrt2) -> bool {
        let above = match &self.lo {
            None => true,
            Some((a, c)) => x > a || (*c && x == a),
        };
        let below = match &self.hi {
            None => true,
            Some((b, c)) => x < b || (*c && x == b),
        };
        above && below
    }

    fn is_empty(&self) -> bool {
        match (&self.lo, &self.hi) {
            (Some((a, ca)), Some((b, cb))) => a > b || (a == b && !(*ca && *cb)),
            _ => false,
        }
    }

    fn meet(&self, other: &Iv) -> Iv {
        let pick = |x: &Bound, y: &Bound, upper: bool| -> Bound {
            match (x, y) {
                (None, b) | (b, None) => b.clone(),
                (Some((p, cp)), Some((q, cq))) => Some(match p.cmp(q) {
                    std::cmp::Ordering::Equal => (p.clone(), *cp && *cq),
                    std::cmp::Ordering::Less if upper => (p.clone(), *cp),
                    std::cmp::Ordering::Less => (q.clone(), *cq),
                    _ if upper => (q.clone(), *cq),
                    _ => (p.clone(), *cp),
                }),
            }
        };
        Iv { lo: pick(&self.lo, &other.lo, false), hi: pick(&self.hi, &other.hi, true) }
    }

    fn reflect(&self) -> Iv {
        let neg = |b: &Bound| b.as_ref().map(|(v, c)| (-v, *c));
        Iv { lo: neg(&self.hi), hi: neg(&self.lo) }
    }
}

/// Normal form of a structured set: a finite union of atoms.
#[derive(Clone, Debug)]
enum Atom {
    Interval(Iv),
    Harmonic { sign: i8, from: u64, to: Option<u64> },
    /// `{offset + k·step : k0 ≤ k ≤ k1}`.
    Grid { offset: QSqrt2, step: Rational, k0: BigInt, k1: BigInt },
    /// Sorted, duplicate-free.
    Finite(Vec<QSqrt2>),
}

/// Least integer `k ≥ t`.
fn int_at_least(t: &QSqrt2) -> BigInt {
    -(-t).floor()
}

/// Greatest integer `k ≤ t`.
fn int_at_most(t: &QSqrt2) -> BigInt {
    t.floor()
}

/// Least integer above `t`, strictly when `strict`.
fn int_above(t: &QSqrt2, strict: bool) -> BigInt {
    if strict {
        t.floor() + 1
    } else {
        int_at_least(t)
    }
}

/// Greatest integer below `t`, strictly when `strict`.
fn int_below(t: &QSqrt2, strict: bool) -> BigInt {
    if strict {
        int_at_least(t) - 1
    } else {
        t.floor()
    }
}

impl Atom {
    fn is_empty(&self) -> bool {
        match self {
            Atom::Interval(iv) => iv.is_empty(),
            Atom::Harmonic { from, to, .. } => to.is_some_and(|t| t < *from),
            Atom::Grid { k0, k1, .. } => k1 < k0,
            Atom::Finite(p) => p.is_empty(),
        }
    }

    fn contains(&self, x: &QSqrt2) -> bool {
        match self {
            Atom::Interval(iv) => iv.contains(x),
            Atom::Harmonic { sign, from, to } => {
                let Some(q) = x.as_rational() else { return false };
                if q.is_zero() {
                    return false;
                }
                let n = Rational::from_integer(BigInt::from(*sign)) / q;
                n.is_integer()
                    && n.is_positive()
                    && n.to_integer() >= BigInt::from(*from)
                    && to.is_none_or(|t| n.to_integer() <= BigInt::from(t))
            }
            Atom::Grid { offset, step, k0, k1 } => {
                let k = (x - offset).scale(&step.recip());
                match k.as_rational() {
                    Some(k) if k.is_integer() => &k.to_integer() >= k0 && &k.to_integer() <= k1,
                    _ => false,
                }
            }
            Atom::Finite(p) => p.binary_search(x).is_ok(),
        }
    }

    fn grid_point(offset: &QSqrt2, step: &Rational, k: &BigInt) -> QSqrt2 {
        offset + &QSqrt2::rational(step * Rational::from_integer(k.clone()))
    }

    /// Intersection with an interval, `None` when empty.
    fn clip(&self, iv: &Iv) -> Option<Atom> {
        let out = match self {
            Atom::Interval(own) => Atom::Interval(own.meet(iv)),
            Atom::Finite(p) => Atom::Finite(p.iter().filter(|x| iv.contains(x)).cloned().collect()),
            Atom::Grid { offset, step, k0, k1 } => {
                let inv = step.recip();
                let mut lo = k0.clone();
                let mut hi = k1.clone();
                if let Some((a, c)) = &iv.lo {
                    lo = lo.max(int_above(&(a - offset).scale(&inv), !*c));
                }
                if let Some((b, c)) = &iv.hi {
                    hi = hi.min(int_below(&(b - offset).scale(&inv), !*c));
                }
                Atom::Grid { offset: offset.clone(), step: step.clone(), k0: lo, k1: hi }
            }
            Atom::Harmonic { sign, from, to } => {
                let iv = if *sign < 0 { iv.reflect() } else { iv.clone() };
                let mut from = *from;
                let mut to = *to;
                // elements are 1/n > 0 after reflection
                if let Some((b, c)) = &iv.hi {
                    if !b.is_positive() {
                        return None;
                    }
                    let n = int_above(&b.recip().expect("positive"), !*c);
                    from = from.max(n.to_u64().unwrap_or(u64::MAX));
                }
                if let Some((a, c)) = &iv.lo {
                    if a.is_positive() {
                        let n = int_below(&a.recip().expect("positive"), !*c);
                        let n = if n.is_negative() { 0 } else { n.to_u64().unwrap_or(u64::MAX) };
                        to = Some(to.map_or(n, |t| t.min(n)));
                    }
                }
                Atom::Harmonic { sign: *sign, from, to }
            }
        };
        (!out.is_empty()).then_some(out)
    }

    fn is_only(&self, x: &QSqrt2) -> bool {
        match self {
            Atom::Interval(Iv { lo: Some((a, _)), hi: Some((b, _)) }) => a == b && a == x,
            Atom::Interval(_) => false,
            Atom::Harmonic { from, to, .. } => *to == Some(*from) && self.contains(x),
            Atom::Grid { k0, k1, .. } => k0 == k1 && self.contains(x),
            Atom::Finite(p) => p.iter().all(|p| p == x),
        }
    }

    fn accumulates_at(&self, x: &QSqrt2) -> bool {
        match self {
            Atom::Interval(iv) => {
                let nondegenerate = match (&iv.lo, &iv.hi) {
                    (Some((a, _)), Some((b, _))) => a < b,
                    _ => true,
                };
                let closure = Iv {
                    lo: iv.lo.as_ref().map(|(a, _)| (a.clone(), true)),
                    hi: iv.hi.as_ref().map(|(b, _)| (b.clone(), true)),
                };
                nondegenerate && closure.contains(x)
            }
            Atom::Harmonic { to, .. } => to.is_none() && x.is_zero(),
            Atom::Grid { .. } | Atom::Finite(_) => false,
        }
    }

    /// About `m` elements of the atom, in a fixed order.
    fn elements(&self, m: usize) -> Vec<QSqrt2> {
        match self {
            Atom::Finite(p) => spread(p.len(), m).into_iter().map(|i| p[i].clone()).collect(),
            Atom::Grid { offset, step, k0, k1 } => {
                let count = (k1 - k0 + 1u32).to_usize().unwrap_or(usize::MAX);
                spread(count, m)
                    .into_iter()
                    .map(|i| Atom::grid_point(offset, step, &(k0 + i)))
                    .collect()
            }
            Atom::Harmonic { sign, from, to } => {
                let last = to.unwrap_or(u64::MAX);
                (*from..=last)
                    .take(m)
                    .map(|n| {
                        QSqrt2::rational(Rational::new(BigInt::from(*sign), BigInt::from(n)))
                    })
                    .collect()
            }
            Atom::Interval(iv) => interval_elements(iv, m),
        }
    }
}

/// Up to `m` indices of `0..n`, evenly spread and including both ends.
fn spread(n: usize, m: usize) -> Vec<usize> {
    if n <= m {
        return (0..n).collect();
    }
    if m <= 1 {
        return vec![0];
    }
    let mut v: Vec<usize> = (0..m).map(|i| i * (n - 1) / (m - 1)).collect();
    v.dedup();
    v
}

fn interval_elements(iv: &Iv, m: usize) -> Vec<QSqrt2> {
    let one = QSqrt2::one();
    let (lo, hi) = match (&iv.lo, &iv.hi) {
        (Some((a, _)), Some((b, _))) => (a.clone(), b.clone()),
        (Some((a, _)), None) => (a.clone(), a + &one),
        (None, Some((b, _))) => (b - &one, b.clone()),
        (None, None) => (-&one, one.clone()),
    };
    if lo == hi {
        return if iv.contains(&lo) { vec![lo] } else { Vec::new() };
    }
    let width = &hi - &lo;
    let half_root = QSqrt2::new(Rational::zero(), Rational::new(1.into(), 2.into()));
    let mut out = Vec::with_capacity(m);
    // alternate dyadic fractions and the same fractions bent by √2/2
    let mut j: u32 = 1;
    while out.len() < m && j < 64 {
        let den = BigInt::one() << j as usize;
        let mut num = BigInt::one();
        while num < den && out.len() < m {
            let u = QSqrt2::rational(Rational::new(num.clone(), den.clone()));
            let v = &u * &half_root;
            for frac in [u, v] {
                let p = &lo + &(&width * &frac);
                if iv.contains(&p) && !out.contains(&p) && out.len() < m {
                    out.push(p);
                }
            }
            num += 2;
        }
        j += 1;
    }
    for (b, c) in [&iv.lo, &iv.hi].into_iter().flatten() {
        if *c && out.len() < m && !out.contains(b) {
            out.push(b.clone());
        }
    }
    out
}

fn intersect_atoms(x: &Atom, y: &Atom) -> Option<Atom> {
    match (x, y) {
        (Atom::Interval(iv), other) | (other, Atom::Interval(iv)) => other.clip(iv),
        (Atom::Finite(p), other) | (other, Atom::Finite(p)) => {
            let kept: Vec<QSqrt2> = p.iter().filter(|q| other.contains(q)).cloned().collect();
            (!kept.is_empty()).then_some(Atom::Finite(kept))
        }
        (Atom::Harmonic { sign: s1, from: f1, to: t1 }, Atom::Harmonic { sign: s2, from: f2, to: t2 }) => {
            if s1 != s2 {
                return None;
            }
            let to = match (t1, t2) {
                (Some(a), Some(b)) => Some(*a.min(b)),
                (a, b) => a.or(*b),
            };
            let out = Atom::Harmonic { sign: *s1, from: *f1.max(f2), to };
            (!out.is_empty()).then_some(out)
        }
        (g @ Atom::Grid { .. }, other) | (other, g @ Atom::Grid { .. }) => {
            let Atom::Grid { k0, k1, .. } = g else { unreachable!() };
            let count = (k1 - k0 + 1u32).to_usize().unwrap_or(usize::MAX);
            let kept: Vec<QSqrt2> =
                g.elements(count).into_iter().filter(|q| other.contains(q)).collect();
            let mut kept = kept;
            kept.sort();
            (!kept.is_empty()).then_some(Atom::Finite(kept))
        }
    }
}

fn intersect_lists(xs: &[Atom], ys: &[Atom]) -> Vec<Atom> {
    xs.iter()
        .flat_map(|x| ys.iter().filter_map(move |y| intersect_atoms(x, y)))
        .collect()
}

fn from_atoms(atoms: Vec<Atom>) -> StructuredSet {
    let mut sets: Vec<StructuredSet> = atoms.into_iter().map(atom_to_set).collect();
    match sets.len() {
        0 => StructuredSet::empty(),
        1 => sets.pop().expect("one element"),
        _ => StructuredSet::Union { sets },
    }
}

fn atom_to_set(a: Atom) -> StructuredSet {
    match a {
        Atom::Interval(Iv { lo: None, hi: None }) => StructuredSet::FullLine,
        Atom::Interval(Iv { lo, hi }) => StructuredSet::Interval {
            closed_left: lo.as_ref().is_some_and(|b| b.1),
            closed_right: hi.as_ref().is_some_and(|b| b.1),
            a: lo.map(|b| b.0),
            b: hi.map(|b| b.0),
        },
        Atom::Harmonic { sign, from, to } => StructuredSet::Harmonic { sign, from, to },
        Atom::Finite(points) => StructuredSet::Finite { points },
        Atom::Grid { offset, step, k0, k1 } => {
            let first = Atom::grid_point(&offset, &step, &k0);
            let last = Atom::grid_point(&offset, &step, &k1);
            match offset.as_rational() {
                Some(_) => StructuredSet::RationalGrid {
                    a: first.a().clone(),
                    b: last.a().clone(),
                    step,
                },
                None => {
                    // rational window strictly between neighbouring grid points
                    let mut bits = 16;
                    let (a, b) = loop {
                        let (lo, _) = first.bounds(bits);
                        let (_, hi) = last.bounds(bits);
                        let fits_lo = QSqrt2::rational(lo.clone()) > &first - &QSqrt2::rational(step.clone());
                        let fits_hi = QSqrt2::rational(hi.clone()) < &last + &QSqrt2::rational(step.clone());
                        if fits_lo && fits_hi {
                            break (lo, hi);
                        }
                        bits *= 2;
                    };
                    StructuredSet::IrrationalGrid { a, b, step, offset }
                }
            }
        }
    }
}
