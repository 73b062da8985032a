//! Orbits of iterated, time-varying, conjugated, power and restricted systems.

use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::{Point, StructuredSet};
use orbitwise::system::{conjugate, power, restrict, Family, MapExpr, ModulusFn, OrbitSystem};

fn show(name: &str, system: &OrbitSystem, x: &Point, n: u64) -> orbitwise::Result<()> {
    let orbit = system.orbit_prefix(x, n)?;
    let text: Vec<String> = orbit.iter().map(ToString::to_string).collect();
    println!("{name:>16}: {}", text.join(", "));
    Ok(())
}

fn main() -> orbitwise::Result<()> {
    let third = Point::line(QSqrt2::ratio(1, 3));
    show("doubling", &catalog::doubling(), &third, 5)?;

    let branch = OrbitSystem::iterated(MapExpr::branch(MapExpr::constant(2), MapExpr::linear(2)));
    show("branch at 1/3", &branch, &third, 3)?;
    show("branch at sqrt2", &branch, &Point::line(QSqrt2::sqrt2()), 3)?;

    let tv = OrbitSystem::TimeVarying { family: Family::AffineLinear { a: Scalar::one(), b: Scalar::one() } };
    show("x -> (n+1)x", &tv, &Point::line(1), 4)?;

    let cubed = conjugate(catalog::doubling(), MapExpr::Cubic, MapExpr::CubeRoot, ModulusFn::CubicQuarter)?;
    show("doubling in x^3", &cubed, &Point::line(QSqrt2::ratio(1, 8)), 3)?;

    let cat2 = power(catalog::cat_map(), 2)?;
    show("cat map squared", &cat2, &Point::pair(QSqrt2::ratio(1, 5), QSqrt2::zero()), 3)?;

    match restrict(catalog::doubling(), StructuredSet::closed(QSqrt2::zero(), QSqrt2::one()), 32) {
        Ok(_) => println!("[0, 1] accepted"),
        Err(e) => println!("restricting to [0, 1]: {e}"),
    }
    let ray = restrict(catalog::doubling(), StructuredSet::ray_from(QSqrt2::zero()), 32)?;
    show("doubling on ray", &ray, &third, 3)?;
    Ok(())
}
