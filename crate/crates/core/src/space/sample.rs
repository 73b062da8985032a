use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{MetricSpace, Point};
use crate::error::{Error, Result};
use crate::scalar::{pow2, QSqrt2, Rational, Scalar, Truth};

const ATTEMPTS: usize = 64;
const FRACTION_BITS: u32 = 16;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Boundary(u32),
    Rational,
    Irrational,
}

/// `m` distinct exact points of the open ball `S_radius(center)`, none
/// equal to the center, drawn deterministically from `seed`.
///
/// Every fourth point (starting with the first) is boundary-proximal, at
/// distance `radius·(1 − 2^−(k+2))` for the `k`-th such point; of the rest,
/// one in three is rational and two in three carry a √2 component. Each
/// candidate is re-measured with the space's own distance before it is
/// accepted, so the result never leaves the ball. An enclosed radius is
/// replaced by its lower bound.
pub fn sample_ball(
    space: &MetricSpace,
    center: &Point,
    radius: &Scalar,
    m: usize,
    seed: u64,
) -> Result<Vec<Point>> {
    space.check(center)?;
    if !center.is_exact() {
        return Err(Error::InvalidArgument(format!("ball center {center} is not exact")));
    }
    let r = exact_radius(radius)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<Point> = Vec::with_capacity(m);
    let mut seen: Vec<Point> = Vec::with_capacity(m);
    let mut boundary = 0u32;
    for i in 0..m {
        let kind = match i % 4 {
            0 => {
                boundary += 1;
                Kind::Boundary(boundary)
            }
            1 => Kind::Rational,
            _ => Kind::Irrational,
        };
        for attempt in 0..ATTEMPTS {
            // late attempts relax the boundary offset to a random one
            let kind = match kind {
                Kind::Boundary(_) if attempt >= ATTEMPTS / 2 => Kind::Irrational,
                k => k,
            };
            let Some(y) = propose(space, center.coords(), &r, kind, i, &mut rng) else { continue };
            let y = Point::new(y);
            let key = space.normalize(&y);
            if seen.contains(&key) {
                continue;
            }
            let d = space.distance(center, &y)?;
            if d.is_positive() == Truth::True && Scalar::Exact(r.clone()).cmp_gt(&d) == Truth::True {
                seen.push(key);
                out.push(if space.is_periodic() { space.normalize(&y) } else { y });
                break;
            }
        }
    }
    Ok(out)
}

fn exact_radius(radius: &Scalar) -> Result<QSqrt2> {
    let r = match radius {
        Scalar::Exact(r) => r.clone(),
        Scalar::Interval(e) => QSqrt2::rational(e.lo().clone()),
    };
    if r.is_positive() {
        Ok(r)
    } else {
        Err(Error::InvalidArgument(format!("ball radius {radius} is not certified positive")))
    }
}

fn propose(
    space: &MetricSpace,
    c: &[Scalar],
    r: &QSqrt2,
    kind: Kind,
    index: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Scalar>> {
    match space {
        MetricSpace::RealLine | MetricSpace::Circle => {
            Some(vec![Scalar::Exact(line_point(c[0].as_exact()?, r, kind, rng)?)])
        }
        MetricSpace::Torus2 => {
            // the boundary offset goes to one coordinate, the other stays well inside
            let lead = rng.random_range(0..2usize);
            let mut out = Vec::with_capacity(2);
            for (j, cj) in c.iter().enumerate() {
                let k = if j == lead { kind } else { Kind::Irrational };
                out.push(Scalar::Exact(line_point(cj.as_exact()?, r, k, rng)?));
            }
            Some(out)
        }
        MetricSpace::Product { left, right, gamma } => {
            let rho = gamma.preimage_radius(&Scalar::Exact(r.clone())).unwrap_or_else(QSqrt2::one);
            let k = left.dim();
            let (cl, cr) = c.split_at(k);
            let mut out = Vec::with_capacity(c.len());
            match index % 3 {
                0 => {
                    out.extend(propose(left, cl, &rho, kind, index, rng)?);
                    out.extend_from_slice(cr);
                }
                1 => {
                    out.extend_from_slice(cl);
                    out.extend(propose(right, cr, &rho, kind, index, rng)?);
                }
                _ => {
                    out.extend(propose(left, cl, &rho, kind, index, rng)?);
                    out.extend(propose(right, cr, &rho, kind, index, rng)?);
                }
            }
            Some(out)
        }
        MetricSpace::BoundedTransform { inner, gamma } => {
            let rho = gamma.preimage_radius(&Scalar::Exact(r.clone())).unwrap_or_else(QSqrt2::one);
            propose(inner, c, &rho, kind, index, rng)
        }
    }
}

fn unit_fraction(rng: &mut ChaCha8Rng) -> QSqrt2 {
    let num = rng.random_range(1..(1u64 << FRACTION_BITS));
    QSqrt2::rational(Rational::from_integer(BigInt::from(num)) * pow2(-(FRACTION_BITS as i64)))
}

fn line_point(c: &QSqrt2, r: &QSqrt2, kind: Kind, rng: &mut ChaCha8Rng) -> Option<QSqrt2> {
    let sign = if rng.random::<bool>() { QSqrt2::one() } else { -QSqrt2::one() };
    match kind {
        Kind::Boundary(k) => {
            let u = &QSqrt2::one() - &QSqrt2::rational(pow2(-(i64::from(k) + 2)));
            Some(c + &(&sign * &(r * &u)))
        }
        Kind::Rational => {
            let y = c + &(&sign * &(r * &unit_fraction(rng)));
            if y.is_rational() {
                return Some(y);
            }
            // a rational just below y, still well inside the ball
            let (lo, _) = y.bounds(64);
            Some(QSqrt2::rational(lo))
        }
        Kind::Irrational => {
            let half_root = QSqrt2::new(Rational::from_integer(0.into()), Rational::new(1.into(), 2.into()));
            let t = &(r * &unit_fraction(rng)) * &half_root;
            let y = c + &(&sign * &t);
            (!y.is_rational()).then_some(y)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn line_contract() {
        let pts = sample_ball(&MetricSpace::RealLine, &Point::line(0), &Scalar::one(), 4, 1).unwrap();
        assert_eq!(pts.len(), 4);
        let xs: Vec<&QSqrt2> = pts.iter().map(|p| p.exact_line().unwrap()).collect();
        assert!(xs.iter().any(|x| x.is_rational()));
        assert!(xs.iter().any(|x| !x.is_rational()));
        assert!(xs.iter().any(|x| x.abs() > QSqrt2::ratio(3, 4)));
    }

    #[test]
    fn deterministic() {
        let a = sample_ball(&MetricSpace::RealLine, &Point::line(s(1, 3)), &s(1, 8), 32, 7).unwrap();
        let b = sample_ball(&MetricSpace::RealLine, &Point::line(s(1, 3)), &s(1, 8), 32, 7).unwrap();
        assert_eq!(a, b);
        let c = sample_ball(&MetricSpace::RealLine, &Point::line(s(1, 3)), &s(1, 8), 32, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn torus_points_stay_in_ball() {
        let c = Point::pair(s(9, 10), s(1, 20));
        let r = s(1, 10);
        let pts = sample_ball(&MetricSpace::Torus2, &c, &r, 40, 3).unwrap();
        assert_eq!(pts.len(), 40);
        for p in &pts {
            let d = MetricSpace::Torus2.distance(&c, p).unwrap();
            assert_eq!(r.cmp_gt(&d), Truth::True);
            assert_eq!(d.is_positive(), Truth::True);
        }
    }

    #[test]
    fn boundary_points_approach_radius() {
        let r = s(1, 2);
        let pts = sample_ball(&MetricSpace::RealLine, &Point::line(0), &r, 16, 11).unwrap();
        for (k, p) in pts.iter().step_by(4).enumerate() {
            let k = k as i64 + 1;
            let floor = r.mul(&Scalar::one().sub(&Scalar::rational(pow2(-k))));
            let d = p.exact_line().unwrap().abs();
            assert_eq!(Scalar::Exact(d).cmp_gt(&floor), Truth::True);
        }
    }

    #[test]
    fn product_and_bounded_spaces() {
        let sp = MetricSpace::product(MetricSpace::RealLine, MetricSpace::RealLine, crate::space::GammaFn::RatioBound);
        let c = Point::pair(0, 1);
        let r = s(1, 3);
        for p in sample_ball(&sp, &c, &r, 12, 5).unwrap() {
            assert_eq!(r.cmp_gt(&sp.distance(&c, &p).unwrap()), Truth::True);
        }
        let b = MetricSpace::bounded(MetricSpace::RealLine, crate::space::GammaFn::RatioBound);
        assert_eq!(sample_ball(&b, &Point::line(0), &s(9, 10), 8, 1).unwrap().len(), 8);
    }
}
