use serde::{Deserialize, Serialize};

use super::{lower_value, SeparationWitness};
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Truth, DEFAULT_PRECISION};
use crate::space::{MetricSpace, Point};
use crate::system::OrbitSystem;

/// Given two points `y`, `z` of a ball around `x` whose orbits are more
/// than `d_a` apart at time `n`, one of them is more than `d_a/2` away from
/// the orbit of `x` at that time. Returns that one as a witness with
/// threshold `d_a/2`.
#[allow(clippy::too_many_arguments)]
pub fn halving_transform(
    system: &OrbitSystem,
    space: &MetricSpace,
    x: &Point,
    y: &Point,
    z: &Point,
    n: u64,
    d_a: &Scalar,
) -> Result<SeparationWitness> {
    if n == 0 {
        return Err(Error::NotAWitness("separation time must be at least 1".into()));
    }
    if !space.distance(y, z)?.is_positive().is_true() {
        return Err(Error::NotAWitness(format!("{y} and {z} are not certified distinct")));
    }
    let half = d_a.div(&Scalar::integer(2))?;
    let mut precision = DEFAULT_PRECISION;
    for _ in 0..3 {
        let px = system.iterate_at(n, x, precision)?;
        let py = system.iterate_at(n, y, precision)?;
        let pz = system.iterate_at(n, z, precision)?;
        match space.distance(&py, &pz)?.cmp_gt(d_a) {
            Truth::False => {
                return Err(Error::NotAWitness(format!("{y} and {z} are not {d_a}-separated at n = {n}")))
            }
            Truth::Unknown => {
                precision *= 2;
                continue;
            }
            Truth::True => {}
        }
        for (cand, image) in [(y, &py), (z, &pz)] {
            let dist = space.distance(&px, image)?;
            if dist.cmp_gt(&half).is_true() {
                return Ok(SeparationWitness {
                    x: x.clone(),
                    level: space.distance(x, cand)?.dyadic_ceiling(),
                    y: cand.clone(),
                    n,
                    separation_lb: lower_value(&dist),
                    threshold: half,
                    precision,
                });
            }
        }
        precision *= 2;
    }
    Err(Error::NotAWitness(format!("could not certify either half of the separation at n = {n}")))
}

/// Carries a witness of the inner system through the conjugacy `g` of a
/// [`OrbitSystem::Conjugated`] system, scaling its bounds by the modulus.
pub fn transport_conjugacy(
    witness: &SeparationWitness,
    conjugated: &OrbitSystem,
    space: &MetricSpace,
) -> Result<SeparationWitness> {
    let OrbitSystem::Conjugated { g, modulus, .. } = conjugated else {
        return Err(Error::UnsupportedSystemKind(format!(
            "transport needs a conjugated system, got {}",
            conjugated.kind_name()
        )));
    };
    let x = g.apply(&witness.x)?;
    let y = g.apply(&witness.y)?;
    let threshold = modulus.apply(&witness.threshold);
    let separation_lb = modulus.apply(&witness.separation_lb);
    let start = space.distance(&x, &y)?;
    if !start.is_positive().is_true() {
        return Err(Error::ModulusViolated(format!("g identifies {x} and {y}")));
    }
    let precision = witness.precision.max(DEFAULT_PRECISION);
    let px = conjugated.iterate_at(witness.n, &x, precision)?;
    let py = conjugated.iterate_at(witness.n, &y, precision)?;
    let dist = space.distance(&px, &py)?;
    if separation_lb.cmp_gt(&dist) != Truth::False || !dist.cmp_gt(&threshold).is_true() {
        return Err(Error::ModulusViolated(format!(
            "distance {dist} at n = {} is not certified above {separation_lb}",
            witness.n
        )));
    }
    Ok(SeparationWitness {
        x,
        level: start.dyadic_ceiling(),
        y,
        n: witness.n,
        separation_lb,
        threshold,
        precision,
    })
}

/// Which factor of a product the original witness lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Left,
    Right,
}

/// Lifts a witness of one factor to the product, holding the other
/// coordinate at `partner`. Bounds pass through the product's `γ`.
pub fn product_witness(
    witness: &SeparationWitness,
    partner: &Point,
    side: Side,
    product: &OrbitSystem,
    space: &MetricSpace,
) -> Result<SeparationWitness> {
    let OrbitSystem::Product { gamma, .. } = product else {
        return Err(Error::UnsupportedSystemKind(format!(
            "lifting needs a product system, got {}",
            product.kind_name()
        )));
    };
    let join = |p: &Point| match side {
        Side::Left => Point::concat(p, partner),
        Side::Right => Point::concat(partner, p),
    };
    let (x, y) = (join(&witness.x), join(&witness.y));
    space.check(&x)?;
    let threshold = gamma.apply(&witness.threshold);
    let separation_lb = gamma.apply(&witness.separation_lb);
    let precision = witness.precision.max(DEFAULT_PRECISION);
    let px = product.iterate_at(witness.n, &x, precision)?;
    let py = product.iterate_at(witness.n, &y, precision)?;
    let dist = space.distance(&px, &py)?;
    if separation_lb.cmp_gt(&dist) != Truth::False || !dist.cmp_gt(&threshold).is_true() {
        return Err(Error::NotAWitness(format!(
            "product distance {dist} at n = {} is not certified above {separation_lb}",
            witness.n
        )));
    }
    Ok(SeparationWitness {
        level: space.distance(&x, &y)?.dyadic_ceiling(),
        x,
        y,
        n: witness.n,
        separation_lb,
        threshold,
        precision,
    })
}
