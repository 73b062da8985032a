//! Expansive and continuum-wise expansive verdicts, including a collapsed
//! orbit that refutes expansivity outright.

use orbitwise::analysis::{cw_expansive_verdict, expansive_verdict, ScaleBudget};
use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::{MetricSpace, Point, StructuredSet};

fn main() -> orbitwise::Result<()> {
    let line = MetricSpace::RealLine;
    let pts = |v: &[(i64, i64)]| v.iter().map(|&(n, d)| Point::line(QSqrt2::ratio(n, d))).collect::<Vec<_>>();

    let v = expansive_verdict(&catalog::doubling(), &line, &pts(&[(0, 1), (1, 3), (1, 2), (3, 4)]), &Scalar::one(), 64)?;
    println!("doubling on 4 points: {}", v.kind());

    let branch = catalog::get("branch-collapse")?.system;
    let v = expansive_verdict(&branch, &line, &pts(&[(1, 2), (1, 3)]), &Scalar::ratio(1, 2), 64)?;
    println!("rationals to 2, irrationals doubled: {}", v.kind());
    if let Some(c) = v.certificate() {
        println!("  {}", serde_json::to_string(c).expect("serializable"));
    }

    let budget = ScaleBudget::halving(4, 64, 8);
    let unit = StructuredSet::closed(QSqrt2::zero(), QSqrt2::one());
    let v = cw_expansive_verdict(&catalog::doubling(), &line, &unit, &Scalar::one(), &budget)?;
    println!("doubling, cw on [0, 1]: {} with {} witnesses", v.kind(), v.witnesses().len());
    let v = cw_expansive_verdict(&catalog::get("identity")?.system, &line, &unit, &Scalar::one(), &budget)?;
    println!("identity, cw on [0, 1]: {}", v.kind());
    Ok(())
}
