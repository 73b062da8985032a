//! Turning witnesses into new witnesses: halving, conjugacy transport and
//! lifting into a product.

use orbitwise::analysis::{
    halving_transform, oe_point_verdict, product_witness, transport_conjugacy, verify_witness, ScaleBudget, Side,
};
use orbitwise::catalog;
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::{GammaFn, MetricSpace, Point};
use orbitwise::system::{conjugate, product};

fn main() -> orbitwise::Result<()> {
    let f = catalog::doubling();
    let line = MetricSpace::RealLine;
    let p = |n, d| Point::line(QSqrt2::ratio(n, d));

    let w = halving_transform(&f, &line, &p(0, 1), &p(1, 10), &p(-1, 10), 3, &Scalar::one())?;
    verify_witness(&f, &line, &w)?;
    println!("halving: y = {}, n = {}, separation {} > {}", w.y, w.n, w.separation_lb, w.threshold);

    let v = oe_point_verdict(&f, &line, &p(1, 3), &Scalar::one(), &ScaleBudget::halving(3, 64, 16));
    let w = &v.witnesses()[0];
    for (label, g, g_inv, m) in catalog::conjugators() {
        let conj = conjugate(f.clone(), g, g_inv, m)?;
        let t = transport_conjugacy(w, &conj, &line)?;
        verify_witness(&conj, &line, &t)?;
        println!("{label}: x = {}, y = {}, separation {} > {}", t.x, t.y, t.separation_lb, t.threshold);
    }

    let plane = product(f.clone(), f.clone(), GammaFn::RatioBound);
    let space = MetricSpace::product(line.clone(), line, GammaFn::RatioBound);
    let lifted = product_witness(w, &p(7, 1), Side::Right, &plane, &space)?;
    verify_witness(&plane, &space, &lifted)?;
    println!("product: x = {}, y = {}, separation {} > {}", lifted.x, lifted.y, lifted.separation_lb, lifted.threshold);
    Ok(())
}
