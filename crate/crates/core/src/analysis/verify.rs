use super::{effective_l_star, BoundScope, Query, RefutationCertificate, SeparationWitness, Status, Verdict};
use crate::error::{Error, Result};
use crate::scalar::{QSqrt2, Scalar, Truth};
use crate::space::{LineBall, MetricSpace, StructuredSet};
use crate::system::OrbitSystem;

fn reject(msg: String) -> Result<()> {
    Err(Error::NotAWitness(msg))
}

/// Re-derives a witness at twice its recorded precision: `y` lies in the
/// open ball, the orbits at time `n` are farther apart than the threshold,
/// and the recorded lower bound is neither above the distance nor below
/// the threshold.
pub fn verify_witness(system: &OrbitSystem, space: &MetricSpace, w: &SeparationWitness) -> Result<()> {
    if w.n == 0 {
        return reject("separation time must be at least 1".into());
    }
    let start = space.distance(&w.x, &w.y)?;
    if !start.is_positive().is_true() {
        return reject(format!("{} is not certified distinct from {}", w.y, w.x));
    }
    if !w.level.cmp_gt(&start).is_true() {
        return reject(format!("{} is not certified inside the ball of radius {}", w.y, w.level));
    }
    if !w.separation_lb.cmp_gt(&w.threshold).is_true() {
        return reject(format!("lower bound {} does not exceed threshold {}", w.separation_lb, w.threshold));
    }
    let p = w.precision.saturating_mul(2).max(2);
    let px = system.iterate_at(w.n, &w.x, p)?;
    let py = system.iterate_at(w.n, &w.y, p)?;
    let dist = space.distance(&px, &py)?;
    if !dist.cmp_gt(&w.threshold).is_true() {
        return reject(format!("distance {dist} at n = {} is not above {}", w.n, w.threshold));
    }
    if w.separation_lb.cmp_gt(&dist).is_true() {
        return reject(format!("lower bound {} exceeds distance {dist}", w.separation_lb));
    }
    Ok(())
}

fn in_set(set: &StructuredSet, w: &SeparationWitness) -> Result<()> {
    match w.y.exact_line() {
        Some(q) if set.contains(q) => Ok(()),
        _ => reject(format!("{} is not a point of the set", w.y)),
    }
}

/// Checks a certificate against the query it refutes.
pub fn verify_certificate(
    system: &OrbitSystem,
    space: &MetricSpace,
    query: &Query,
    cert: &RefutationCertificate,
) -> Result<()> {
    match cert {
        RefutationCertificate::EmptyBall { level } => {
            let (x, set) = match query {
                Query::OePointOfSet { x, set, .. } | Query::RoePointOfSet { x, set } => (x, set),
                _ => return reject("an empty-ball certificate needs a set query".into()),
            };
            let Some(c) = x.exact_line() else { return reject("center is not an exact line point".into()) };
            let nonempty = match space.line_ball(level) {
                Some(LineBall::Radius(r)) => set.ball_intersect(c, &r).has_point_other_than(c),
                Some(LineBall::Everything) => set.has_point_other_than(c),
                None => return Err(Error::Unsupported("ball of a non-line metric".into())),
            };
            if nonempty {
                return reject(format!("the ball of radius {level} meets the set"));
            }
            Ok(())
        }
        RefutationCertificate::UniformBound { l_star, scope } => {
            match effective_l_star(system, space) {
                Some(l) if &l <= l_star => {}
                _ => return reject(format!("no uniform bound {l_star} holds for this system")),
            }
            let ls = Scalar::Exact(l_star.clone());
            match scope {
                BoundScope::AnyThreshold => Ok(()),
                BoundScope::Contraction if l_star <= &QSqrt2::one() => Ok(()),
                BoundScope::Contraction => reject(format!("{l_star} exceeds 1")),
                BoundScope::Level { level, threshold } => {
                    if level.is_positive().is_true() && threshold.cmp_gt(&ls.mul(level)).is_true() {
                        Ok(())
                    } else {
                        reject(format!("{l_star}·{level} is not below {threshold}"))
                    }
                }
                BoundScope::Diameter { points, threshold } => {
                    let [p, q] = points.as_slice() else { return reject("a diameter needs two points".into()) };
                    let diam = space.distance(p, q)?;
                    if ls.mul(&diam).cmp_gt(threshold) == Truth::False {
                        Ok(())
                    } else {
                        reject(format!("{l_star}·{diam} is not within {threshold}"))
                    }
                }
            }
        }
        RefutationCertificate::CollapsedOrbit { x, y, n0, threshold } => {
            if !system.is_autonomous_state() {
                return reject("collapse does not persist for this system".into());
            }
            if *n0 == 0 || !space.distance(x, y)?.is_positive().is_true() {
                return reject("collapse needs distinct points and n0 ≥ 1".into());
            }
            let xs = system.orbit_prefix(x, *n0)?;
            let ys = system.orbit_prefix(y, *n0)?;
            for n in 1..*n0 as usize {
                if space.distance(&xs[n], &ys[n])?.cmp_gt(threshold) != Truth::False {
                    return reject(format!("the pair is not certified within {threshold} at n = {n}"));
                }
            }
            let (a, b) = (space.normalize(&xs[*n0 as usize]), space.normalize(&ys[*n0 as usize]));
            if a.coords().iter().zip(b.coords()).all(|(s, t)| s.certainly_equal(t)) {
                Ok(())
            } else {
                reject(format!("orbits differ at n0 = {n0}"))
            }
        }
    }
}

/// Re-checks every witness or the certificate of a verdict.
///
/// Point verdicts must hold one witness per level, each with the threshold
/// the query prescribes.
pub fn verify_verdict(system: &OrbitSystem, space: &MetricSpace, verdict: &Verdict) -> Result<()> {
    match &verdict.status {
        Status::Inconclusive { .. } => Ok(()),
        Status::Refuted { certificate } => verify_certificate(system, space, &verdict.query, certificate),
        Status::Supported { witnesses } => {
            if witnesses.is_empty() {
                return reject("supported verdict without witnesses".into());
            }
            let point_levels = match (&verdict.query, &verdict.budget) {
                (Query::OePoint { .. } | Query::OePointOfSet { .. }, Some(b)) => Some(b.oe_levels()),
                (Query::RoePoint { .. } | Query::RoePointOfSet { .. }, Some(b)) => Some(b.roe_levels()),
                _ => None,
            };
            if let Some(levels) = &point_levels {
                if levels.len() != witnesses.len() {
                    return reject(format!("{} witnesses for {} levels", witnesses.len(), levels.len()));
                }
            }
            for (k, w) in witnesses.iter().enumerate() {
                verify_witness(system, space, w)?;
                let expected_threshold = match &verdict.query {
                    Query::OePoint { d, .. } | Query::OePointOfSet { d, .. } | Query::Expansive { d, .. } => d,
                    Query::CwExpansive { c, .. } => c,
                    Query::RoePoint { .. } | Query::RoePointOfSet { .. } => &w.level,
                };
                if !w.threshold.certainly_equal(expected_threshold) {
                    return reject(format!("witness threshold {} differs from {expected_threshold}", w.threshold));
                }
                match &verdict.query {
                    Query::OePoint { x, .. } | Query::RoePoint { x } if &w.x != x => {
                        return reject("witness center differs from the query point".into())
                    }
                    Query::OePointOfSet { x, set, .. } | Query::RoePointOfSet { x, set } => {
                        if &w.x != x {
                            return reject("witness center differs from the query point".into());
                        }
                        in_set(set, w)?;
                    }
                    Query::CwExpansive { set, .. } => {
                        in_set(set, w)?;
                        match w.x.exact_line() {
                            Some(q) if set.contains(q) => {}
                            _ => return reject(format!("{} is not a point of the set", w.x)),
                        }
                    }
                    _ => {}
                }
                if let Some(levels) = &point_levels {
                    if !w.level.certainly_equal(&Scalar::Exact(levels[k].clone())) {
                        return reject(format!("witness {k} is not at grid level {}", levels[k]));
                    }
                }
            }
            Ok(())
        }
    }
}
