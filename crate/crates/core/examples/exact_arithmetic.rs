//! Exact arithmetic in Q(sqrt 2) next to outward-rounded enclosures.

use orbitwise::scalar::{Enclosure, QSqrt2, Scalar};

fn main() {
    let a: QSqrt2 = "1/2 + 1/3*sqrt2".parse().expect("valid literal");
    let b = QSqrt2::sqrt2();
    println!("a = {a}");
    println!("a * sqrt2 = {}", &a * &b);
    println!("1 / a = {}", a.recip().expect("nonzero"));
    let gap: QSqrt2 = "3 + -2*sqrt2".parse().expect("valid literal");
    println!("3 - 2*sqrt2 = {gap} has sign {:?}", gap.signum());

    let x = Scalar::Exact(a.clone());
    let cube = x.pow(3);
    println!("a^3 = {cube}, cube root back: {}", cube.cbrt());

    let coarse = Scalar::Interval(Enclosure::from_qsqrt2(&a, 16));
    let fine = Scalar::Interval(Enclosure::from_qsqrt2(&a, 128));
    println!("a at 16 bits: {coarse}");
    println!("a at 128 bits contains a: {}", fine.contains(&a));

    let third = Scalar::ratio(1, 3);
    println!("is a > 1/3 (16 bits)? {:?}", coarse.cmp_gt(&third));
    println!("is a > a (exact)? {:?}", x.cmp_gt(&x));
    println!("is enclosure > itself? {:?}", coarse.cmp_gt(&coarse));
}
