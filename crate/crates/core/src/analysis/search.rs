use rayon::prelude::*;

use super::{
    effective_l_star, lower_value, mix, BoundScope, Query, RefutationCertificate, ScaleBudget,
    SeparationWitness, Status, Verdict,
};
use crate::error::{Error, Result};
use crate::scalar::{QSqrt2, Rational, Scalar, Truth, DEFAULT_PRECISION};
use crate::space::{sample_ball, LineBall, MetricSpace, Point, StructuredSet};
use crate::system::{Orbit, OrbitSystem};

/// Smallest `n ∈ 1 … horizon` with `ρ(O_n x, O_n y) > d` certified.
pub fn separation_time(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    y: &Point,
    d: &Scalar,
    horizon: u64,
) -> Result<Option<u64>> {
    let xs = system.orbit_prefix(x, horizon)?;
    Ok(first_separation(system, space, &xs, y, d)?.map(|(n, _)| n))
}

/// First certified separation of `y`'s orbit from the precomputed orbit
/// `xs = [O_0 x, …, O_N x]`, with the distance found.
fn first_separation(
    system: &OrbitSystem,
    space: &MetricSpace,
    xs: &[Point],
    y: &Point,
    d: &Scalar,
) -> Result<Option<(u64, Scalar)>> {
    for (n, py) in system.orbit(y, DEFAULT_PRECISION).enumerate().take(xs.len()) {
        let py = py?;
        if n == 0 {
            continue;
        }
        let dist = space.distance(&xs[n], &py)?;
        if dist.cmp_gt(d).is_true() {
            return Ok(Some((n as u64, dist)));
        }
    }
    Ok(None)
}

/// The minimal `(n, index)` separation among `candidates`. Candidates
/// whose orbit cannot be evaluated are skipped.
///
/// All orbits advance together one step at a time, so the scan stops at the
/// first time any candidate separates.
fn find_witness(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    xs: &[Point],
    level: &Scalar,
    threshold: &Scalar,
    candidates: &[Point],
) -> Option<SeparationWitness> {
    let mut live: Vec<(usize, Orbit<'_>)> = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, y)| {
            let mut orbit = system.orbit(y, DEFAULT_PRECISION);
            matches!(orbit.next(), Some(Ok(_))).then_some((i, orbit))
        })
        .collect();
    for (n, xn) in xs.iter().enumerate().skip(1) {
        if live.is_empty() {
            return None;
        }
        // None: evaluation failed; Some(hit): the distance if it separates
        let steps: Vec<Option<Option<Scalar>>> = live
            .par_iter_mut()
            .map(|(_, orbit)| {
                let p = orbit.next()?.ok()?;
                let dist = space.distance(xn, &p).ok()?;
                Some(dist.cmp_gt(threshold).is_true().then_some(dist))
            })
            .collect();
        let hit = live
            .iter()
            .zip(&steps)
            .find_map(|((i, _), step)| step.clone().flatten().map(|d| (*i, d)));
        if let Some((i, dist)) = hit {
            return Some(SeparationWitness {
                x: x.clone(),
                level: level.clone(),
                y: candidates[i].clone(),
                n: n as u64,
                separation_lb: lower_value(&dist),
                threshold: threshold.clone(),
                precision: DEFAULT_PRECISION,
            });
        }
        live = live.into_iter().zip(steps).filter(|(_, s)| s.is_some()).map(|(l, _)| l).collect();
    }
    None
}

#[derive(Clone)]
enum Mode {
    Oe(Scalar),
    Roe,
}

fn push_new(out: &mut Vec<Point>, p: Point) {
    if !out.contains(&p) {
        out.push(p);
    }
}

fn candidates(
    space: &MetricSpace,
    x: &Point,
    set: Option<&StructuredSet>,
    level: &QSqrt2,
    budget: &ScaleBudget,
    k: usize,
) -> Result<Vec<Point>> {
    let m = budget.samples;
    let radius = Scalar::Exact(level.clone());
    let samples = sample_ball(space, x, &radius, m, budget.level_seed(k))?;
    let mut out = Vec::with_capacity(2 * m);
    let structured = |s: &StructuredSet| -> Vec<Point> {
        let (Some(c), Some(ball)) = (x.exact_line(), space.line_ball(&radius)) else { return Vec::new() };
        let within = match ball {
            LineBall::Radius(r) => s.ball_intersect(c, &r),
            LineBall::Everything => s.clone(),
        };
        within.candidates(c, m).into_iter().map(Point::line).collect()
    };
    match set {
        None => {
            samples.into_iter().for_each(|p| push_new(&mut out, p));
            structured(&StructuredSet::FullLine).into_iter().for_each(|p| push_new(&mut out, p));
        }
        Some(s) => {
            structured(s).into_iter().for_each(|p| push_new(&mut out, p));
            samples
                .into_iter()
                .filter(|p| p.exact_line().is_some_and(|q| s.contains(q)))
                .for_each(|p| push_new(&mut out, p));
        }
    }
    Ok(out)
}

/// The uniform-bound refutation for a point query, if the system has one.
fn uniform_refutation(
    system: &OrbitSystem,
    space: &MetricSpace,
    mode: &Mode,
    levels: &[QSqrt2],
) -> Option<RefutationCertificate> {
    let l = effective_l_star(system, space)?;
    let ls = Scalar::Exact(l.clone());
    match mode {
        Mode::Roe => (l <= QSqrt2::one()).then_some(RefutationCertificate::UniformBound {
            l_star: l,
            scope: BoundScope::Contraction,
        }),
        Mode::Oe(d) => {
            let on_grid = levels
                .iter()
                .map(|e| Scalar::Exact(e.clone()))
                .find(|e| d.cmp_gt(&ls.mul(e)).is_true());
            let level = match on_grid {
                Some(e) => e,
                None => {
                    // below the grid: half of the largest radius the bound covers
                    let lo = lower_value(d);
                    let l = if l.is_positive() { ls.clone() } else { Scalar::one() };
                    lo.div(&l.mul(&Scalar::integer(2))).ok()?
                }
            };
            if !level.is_positive().is_true() {
                return None;
            }
            Some(RefutationCertificate::UniformBound {
                l_star: l,
                scope: BoundScope::Level { level, threshold: d.clone() },
            })
        }
    }
}

fn point_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    set: Option<&StructuredSet>,
    mode: Mode,
    budget: &ScaleBudget,
) -> Verdict {
    let query = match (&mode, set) {
        (Mode::Oe(d), None) => Query::OePoint { x: x.clone(), d: d.clone() },
        (Mode::Oe(d), Some(s)) => Query::OePointOfSet { x: x.clone(), set: s.clone(), d: d.clone() },
        (Mode::Roe, None) => Query::RoePoint { x: x.clone() },
        (Mode::Roe, Some(s)) => Query::RoePointOfSet { x: x.clone(), set: s.clone() },
    };
    let b = Some(budget.clone());
    let fail = |why: String| Verdict::inconclusive(query.clone(), b.clone(), why);
    if let Err(e) = budget.validate().and_then(|_| space.check(x)) {
        return fail(e.to_string());
    }
    if let Mode::Oe(d) = &mode {
        if !d.is_positive().is_true() {
            return fail(format!("threshold {d} is not certified positive"));
        }
    }
    if !x.is_exact() {
        return fail(format!("point {x} is not exact"));
    }
    let levels = match mode {
        Mode::Oe(_) => budget.oe_levels(),
        Mode::Roe => budget.roe_levels(),
    };

    if let Some(s) = set {
        if let Err(e) = s.validate() {
            return fail(e.to_string());
        }
        let Some(c) = x.exact_line() else {
            return fail("set queries need an exact point of the line".into());
        };
        for level in &levels {
            let radius = Scalar::Exact(level.clone());
            let nonempty = match space.line_ball(&radius) {
                Some(LineBall::Radius(r)) => s.ball_intersect(c, &r).has_point_other_than(c),
                Some(LineBall::Everything) => s.has_point_other_than(c),
                None => return fail("set queries need a metric on the line".into()),
            };
            if !nonempty {
                let certificate = RefutationCertificate::EmptyBall { level: radius };
                return Verdict::new(query, b, Status::Refuted { certificate });
            }
        }
    }

    if let Some(certificate) = uniform_refutation(system, space, &mode, &levels) {
        return Verdict::new(query, b, Status::Refuted { certificate });
    }

    let xs = match system.orbit_prefix(x, budget.horizon) {
        Ok(xs) => xs,
        Err(e) => return fail(format!("orbit of {x}: {e}")),
    };
    let mut witnesses = Vec::with_capacity(levels.len());
    let mut missing = Vec::new();
    for (k, level) in levels.iter().enumerate() {
        let radius = Scalar::Exact(level.clone());
        let threshold = match &mode {
            Mode::Oe(d) => d.clone(),
            Mode::Roe => radius.clone(),
        };
        let cands = match candidates(space, x, set, level, budget, k) {
            Ok(c) => c,
            Err(e) => return fail(e.to_string()),
        };
        match find_witness(system, space, x, &xs, &radius, &threshold, &cands) {
            Some(w) => witnesses.push(w),
            None => missing.push(level.to_string()),
        }
    }
    if missing.is_empty() {
        Verdict::new(query, b, Status::Supported { witnesses })
    } else {
        let why = format!(
            "no separation within horizon {} at level(s) {}",
            budget.horizon,
            missing.join(", ")
        );
        let mut v = fail(why);
        if !witnesses.is_empty() {
            v.notes.push(format!("{} of {} levels witnessed", witnesses.len(), levels.len()));
        }
        v
    }
}

/// Is `x` an OE point with constant `d`, at every level `ε₀·r^k`?
pub fn oe_point_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    d: &Scalar,
    budget: &ScaleBudget,
) -> Verdict {
    point_verdict(system, space, x, None, Mode::Oe(d.clone()), budget)
}

/// As [`oe_point_verdict`], with witnesses drawn from `set`.
pub fn oe_point_of_set_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    set: &StructuredSet,
    d: &Scalar,
    budget: &ScaleBudget,
) -> Verdict {
    point_verdict(system, space, x, Some(set), Mode::Oe(d.clone()), budget)
}

/// Is every level below `ε_x = eps_max` witnessed with threshold equal to
/// the level itself?
pub fn roe_point_verdict(system: &OrbitSystem, space: &MetricSpace, x: &Point, budget: &ScaleBudget) -> Verdict {
    point_verdict(system, space, x, None, Mode::Roe, budget)
}

pub fn roe_point_of_set_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    set: &StructuredSet,
    budget: &ScaleBudget,
) -> Verdict {
    point_verdict(system, space, x, Some(set), Mode::Roe, budget)
}

/// OE-of-set verdicts for every candidate, in order.
pub fn oe_set_map(
    system: &OrbitSystem,
    space: &MetricSpace,
    set: &StructuredSet,
    candidates: &[Point],
    d: &Scalar,
    budget: &ScaleBudget,
) -> Vec<(Point, Verdict)> {
    candidates
        .par_iter()
        .map(|x| (x.clone(), oe_point_of_set_verdict(system, space, x, set, d, budget)))
        .collect()
}

enum PairOutcome {
    Separated(SeparationWitness),
    Refuted(RefutationCertificate),
    Open(String),
}

fn equal_points(space: &MetricSpace, p: &Point, q: &Point) -> bool {
    let (p, q) = (space.normalize(p), space.normalize(q));
    p.coords().iter().zip(q.coords()).all(|(a, b)| a.certainly_equal(b))
}

fn examine_pair(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    y: &Point,
    d: &Scalar,
    horizon: u64,
    l_star: Option<&QSqrt2>,
) -> Result<PairOutcome> {
    let xs = system.orbit_prefix(x, horizon)?;
    let ys = system.orbit_prefix(y, horizon)?;
    let mut within = true;
    for n in 1..xs.len() {
        let dist = space.distance(&xs[n], &ys[n])?;
        if dist.cmp_gt(d).is_true() {
            let start = space.distance(x, y)?;
            return Ok(PairOutcome::Separated(SeparationWitness {
                x: x.clone(),
                level: start.dyadic_ceiling(),
                y: y.clone(),
                n: n as u64,
                separation_lb: lower_value(&dist),
                threshold: d.clone(),
                precision: DEFAULT_PRECISION,
            }));
        }
        if within && system.is_autonomous_state() && equal_points(space, &xs[n], &ys[n]) {
            return Ok(PairOutcome::Refuted(RefutationCertificate::CollapsedOrbit {
                x: x.clone(),
                y: y.clone(),
                n0: n as u64,
                threshold: d.clone(),
            }));
        }
        within &= dist.cmp_gt(d) == Truth::False;
    }
    if let Some(l) = l_star {
        let start = space.distance(x, y)?;
        if Scalar::Exact(l.clone()).mul(&start).cmp_gt(d) == Truth::False {
            return Ok(PairOutcome::Refuted(RefutationCertificate::UniformBound {
                l_star: l.clone(),
                scope: BoundScope::Diameter { points: vec![x.clone(), y.clone()], threshold: d.clone() },
            }));
        }
    }
    Ok(PairOutcome::Open(format!("{x} and {y} stay within {d} up to n = {horizon}")))
}

/// Expansivity with constant `d` on the finite sample `points`: every pair
/// must separate by some `n ∈ 1 … horizon`.
pub fn expansive_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    points: &[Point],
    d: &Scalar,
    horizon: u64,
) -> Result<Verdict> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput("expansivity needs at least two points".into()));
    }
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    for p in points {
        space.check(p)?;
    }
    let mut pairs = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if !space.distance(&points[i], &points[j])?.is_positive().is_true() {
                return Err(Error::DegenerateInput(format!(
                    "points {} and {} are not certified distinct",
                    points[i], points[j]
                )));
            }
            pairs.push((i, j));
        }
    }
    let l_star = effective_l_star(system, space);
    let outcomes = pairs
        .par_iter()
        .map(|&(i, j)| examine_pair(system, space, &points[i], &points[j], d, horizon, l_star.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let query = Query::Expansive { points: points.to_vec(), d: d.clone(), horizon };
    let mut witnesses = Vec::new();
    let mut open = Vec::new();
    for o in outcomes {
        match o {
            PairOutcome::Refuted(certificate) => {
                return Ok(Verdict::new(query, None, Status::Refuted { certificate }))
            }
            PairOutcome::Separated(w) => witnesses.push(w),
            PairOutcome::Open(why) => open.push(why),
        }
    }
    Ok(if open.is_empty() {
        Verdict::new(query, None, Status::Supported { witnesses })
    } else {
        Verdict::new(query, None, Status::Inconclusive { diagnostics: open })
    })
}

/// Is some pair of a closed bounded interval `A` separated by more than
/// `c` within the horizon?
pub fn cw_expansive_verdict(
    system: &OrbitSystem,
    space: &MetricSpace,
    set: &StructuredSet,
    c: &Scalar,
    budget: &ScaleBudget,
) -> Result<Verdict> {
    let StructuredSet::Interval { a: Some(a), b: Some(b), .. } = set else {
        return Err(Error::InvalidArgument("continuum-wise queries need a bounded interval".into()));
    };
    if a >= b {
        return Err(Error::DegenerateInput(format!("interval [{a}, {b}] is not a continuum")));
    }
    budget.validate()?;
    let query = Query::CwExpansive { set: set.clone(), c: c.clone() };
    let (pa, pb) = (Point::line(a.clone()), Point::line(b.clone()));

    if let Some(l) = effective_l_star(system, space) {
        let diameter = space.distance(&pa, &pb)?;
        if Scalar::Exact(l.clone()).mul(&diameter).cmp_gt(c) == Truth::False {
            let certificate = RefutationCertificate::UniformBound {
                l_star: l,
                scope: BoundScope::Diameter { points: vec![pa, pb], threshold: c.clone() },
            };
            return Ok(Verdict::new(query, Some(budget.clone()), Status::Refuted { certificate }));
        }
    }

    let closed = StructuredSet::closed(a.clone(), b.clone());
    let mut pts = vec![pa, pb];
    for e in closed.elements(budget.samples) {
        push_new(&mut pts, Point::line(e));
    }
    let orbits: Vec<(Point, Vec<Point>)> = pts
        .par_iter()
        .filter_map(|p| system.orbit_prefix(p, budget.horizon).ok().map(|o| (p.clone(), o)))
        .collect();
    let mut notes = Vec::new();
    if orbits.len() >= 2 {
        let collapsed = (0..orbits.len()).any(|i| {
            (i + 1..orbits.len()).any(|j| equal_points(space, &orbits[i].1[1], &orbits[j].1[1]))
        });
        if collapsed {
            notes.push("the first map identifies distinct points of the interval".to_string());
        }
    }
    for n in 1..=budget.horizon as usize {
        for i in 0..orbits.len() {
            for j in i + 1..orbits.len() {
                let dist = space.distance(&orbits[i].1[n], &orbits[j].1[n])?;
                if dist.cmp_gt(c).is_true() {
                    let (x, y) = (&orbits[i].0, &orbits[j].0);
                    let w = SeparationWitness {
                        x: x.clone(),
                        level: space.distance(x, y)?.dyadic_ceiling(),
                        y: y.clone(),
                        n: n as u64,
                        separation_lb: lower_value(&dist),
                        threshold: c.clone(),
                        precision: DEFAULT_PRECISION,
                    };
                    let mut v = Verdict::new(query, Some(budget.clone()), Status::Supported { witnesses: vec![w] });
                    v.notes = notes;
                    return Ok(v);
                }
            }
        }
    }
    let why = format!("no sampled pair of {set} separates by more than {c} up to n = {}", budget.horizon);
    let mut v = Verdict::inconclusive(query, Some(budget.clone()), why);
    v.notes = notes;
    Ok(v)
}

/// Fraction of `samples` points of `S_eps(x)` that separate from `x` by
/// more than `d` within the horizon.
#[allow(clippy::too_many_arguments)]
pub fn witness_density(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    eps: &Scalar,
    d: &Scalar,
    horizon: u64,
    samples: usize,
    seed: u64,
) -> Result<Rational> {
    if samples == 0 {
        return Err(Error::InvalidArgument("sample count must be at least 1".into()));
    }
    let ys = sample_ball(space, x, eps, samples, mix(seed, u64::MAX))?;
    if ys.is_empty() {
        return Err(Error::DegenerateInput(format!("the ball of radius {eps} around {x} has no samples")));
    }
    let xs = system.orbit_prefix(x, horizon)?;
    let hits = ys
        .par_iter()
        .filter(|y| matches!(first_separation(system, space, &xs, y, d), Ok(Some(_))))
        .count();
    Ok(Rational::new(hits.into(), ys.len().into()))
}

/// A certificate that `x` is not an OE point for any threshold, from a
/// finite uniform expansion bound on the line.
pub fn not_oe_certificate(system: &OrbitSystem, x: &Point) -> Option<RefutationCertificate> {
    x.exact_line()?;
    let l_star = effective_l_star(system, &MetricSpace::RealLine)?;
    Some(RefutationCertificate::UniformBound { l_star, scope: BoundScope::AnyThreshold })
}
