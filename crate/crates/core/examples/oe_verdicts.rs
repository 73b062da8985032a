//! Orbitwise expansivity of a point, of a point within a subset, and the
//! checks that back each verdict.

use orbitwise::analysis::{oe_point_of_set_verdict, oe_point_verdict, verify_verdict, ScaleBudget, Status};
use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::{MetricSpace, Point, StructuredSet};

fn main() -> orbitwise::Result<()> {
    let f = catalog::doubling();
    let line = MetricSpace::RealLine;
    let budget = ScaleBudget::halving(6, 64, 32);
    let x = Point::line(2);

    let v = oe_point_verdict(&f, &line, &x, &Scalar::one(), &budget);
    println!("x = 2 in R: {}", v.kind());
    for w in v.witnesses() {
        println!("  eps <= {}: y = {}, n = {}, separation > {}", w.level, w.y, w.n, w.separation_lb);
    }
    verify_verdict(&f, &line, &v)?;
    println!("  re-verified");

    let unit = StructuredSet::closed(QSqrt2::zero(), QSqrt2::one());
    let v = oe_point_of_set_verdict(&f, &line, &x, &unit, &Scalar::one(), &budget);
    if let Status::Refuted { certificate } = &v.status {
        println!("x = 2 in [0, 1]: refuted, {}", serde_json::to_string(certificate).expect("serializable"));
    }

    let half = catalog::get("contraction-half")?.system;
    let v = oe_point_verdict(&half, &line, &x, &Scalar::one(), &budget);
    println!("x = 2 under x/2: {} ({:?})", v.kind(), v.certificate().map(|c| c.kind_name()));
    Ok(())
}
