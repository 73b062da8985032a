//! Distances in the supported spaces and structured subsets of the line.

use orbitwise::scalar::QSqrt2;
use orbitwise::space::{GammaFn, MetricSpace, Point, StructuredSet};

fn q(n: i64, d: i64) -> QSqrt2 {
    QSqrt2::ratio(n, d)
}

fn main() -> orbitwise::Result<()> {
    let (x, y) = (Point::line(q(1, 10)), Point::line(q(9, 10)));
    let spaces = [
        ("line", MetricSpace::RealLine),
        ("circle", MetricSpace::Circle),
        ("t/(1+t) on the line", MetricSpace::bounded(MetricSpace::RealLine, GammaFn::RatioBound)),
    ];
    for (name, space) in &spaces {
        println!("{name:>22}: d(1/10, 9/10) = {}", space.distance(&x, &y)?);
    }
    let torus = MetricSpace::Torus2;
    let d = torus.distance(&Point::pair(q(0, 1), q(1, 5)), &Point::pair(q(9, 10), q(3, 5)))?;
    println!("{:>22}: {d}", "torus");
    let plane = MetricSpace::product(MetricSpace::RealLine, MetricSpace::RealLine, GammaFn::Capped { c: q(1, 2) });
    let d = plane.distance(&Point::pair(q(0, 1), q(0, 1)), &Point::pair(q(3, 1), q(1, 4)))?;
    println!("{:>22}: {d}", "capped product");

    let a = StructuredSet::union(vec![StructuredSet::harmonic(1), StructuredSet::closed(q(2, 1), q(3, 1))]);
    println!("A = {a}");
    println!("A near 0, radius 1/5: {}", a.ball_intersect(&q(0, 1), &q(1, 5)));
    println!("0 is a limit point of A: {}", a.is_limit_point(&q(0, 1)));
    println!("closure of A: {}", a.closure());
    println!("first elements: {:?}", a.elements(5).iter().map(ToString::to_string).collect::<Vec<_>>());
    Ok(())
}
