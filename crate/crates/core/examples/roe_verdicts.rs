//! A system that is relatively orbitwise expansive everywhere but not
//! orbitwise expansive: O_n(x) = 2^(1/n) x.

use orbitwise::analysis::{oe_point_verdict, roe_point_verdict, verify_verdict};
use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::Point;

fn main() -> orbitwise::Result<()> {
    let entry = catalog::get("root-scale")?;
    let (f, space, budget) = (&entry.system, &entry.space, &entry.budget);
    for x in [Point::line(1), Point::line(QSqrt2::sqrt2()), Point::line(-3)] {
        let roe = roe_point_verdict(f, space, &x, budget);
        verify_verdict(f, space, &roe)?;
        println!("x = {x}: ROE {}", roe.kind());
        for w in roe.witnesses() {
            println!("  eps <= {}: n = {}, separation > {} > eps", w.level, w.n, w.separation_lb);
        }
    }
    let oe = oe_point_verdict(f, space, &Point::line(1), &Scalar::one(), budget);
    println!("x = 1: OE {}", oe.kind());
    if let Some(c) = oe.certificate() {
        println!("  {}", serde_json::to_string(c).expect("serializable"));
    }
    Ok(())
}
