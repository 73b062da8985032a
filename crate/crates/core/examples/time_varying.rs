//! A time-varying system: f_n sends rationals to n + 1 and scales irrationals
//! by n + 1. Rational orbits collapse, so it is not expansive, yet every
//! sampled point is orbitwise expansive.

use orbitwise::analysis::{expansive_verdict, oe_point_verdict};
use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::Point;

fn main() -> orbitwise::Result<()> {
    let e = catalog::get("time-varying-branch")?;
    let (f, space) = (&e.system, &e.space);
    println!("{}", serde_json::to_string(f).expect("serializable"));
    for n in 0..4 {
        let (a, b) = (f.iterate(n, &Point::line(QSqrt2::ratio(1, 2)))?, f.iterate(n, &Point::line(QSqrt2::sqrt2()))?);
        println!("  O_{n}: 1/2 -> {a}, sqrt2 -> {b}");
    }
    let pts: Vec<Point> = [(1, 2), (1, 3), (2, 1)].iter().map(|&(n, d)| Point::line(QSqrt2::ratio(n, d))).collect();
    let v = expansive_verdict(f, space, &pts, &Scalar::one(), 64)?;
    println!("expansive on {{1/2, 1/3, 2}}: {}", v.kind());
    for k in 1..=4 {
        let x = Point::line(QSqrt2::ratio(k, 2));
        let v = oe_point_verdict(f, space, &x, &e.threshold, &e.budget);
        println!("OE at {x}: {}", v.kind());
    }
    Ok(())
}
