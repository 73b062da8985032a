use orbitwise::analysis::*;
use orbitwise::scalar::{QSqrt2, Rational, Scalar};
use orbitwise::space::{GammaFn, MetricSpace, Point, StructuredSet};
use orbitwise::system::{conjugate, product, Family, DirectRule, MapExpr, ModulusFn, OrbitSystem};
use orbitwise::Error;

fn doubling() -> OrbitSystem {
    OrbitSystem::iterated(MapExpr::linear(2))
}

fn identity() -> OrbitSystem {
    OrbitSystem::iterated(MapExpr::identity())
}

fn branch() -> OrbitSystem {
    OrbitSystem::iterated(MapExpr::branch(MapExpr::constant(2), MapExpr::linear(2)))
}

fn root_scale() -> OrbitSystem {
    OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base: rat(2, 1) } }
}

fn time_varying() -> OrbitSystem {
    OrbitSystem::TimeVarying { family: Family::BranchLinear { a: Scalar::one(), b: Scalar::one() } }
}

fn line() -> MetricSpace {
    MetricSpace::RealLine
}

fn q(n: i64, d: i64) -> QSqrt2 {
    QSqrt2::ratio(n, d)
}

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn pt(n: i64, d: i64) -> Point {
    Point::line(q(n, d))
}

fn budget() -> ScaleBudget {
    ScaleBudget::halving(8, 64, 32)
}

fn check(system: &OrbitSystem, space: &MetricSpace, v: &Verdict) {
    verify_verdict(system, space, v).unwrap_or_else(|e| panic!("{v:?} failed re-verification: {e}"));
}

#[test]
fn separation_times() {
    let t = separation_time(&doubling(), &line(), &pt(0, 1), &pt(1, 100), &Scalar::one(), 64).unwrap();
    assert_eq!(t, Some(7));
    let t = separation_time(&identity(), &line(), &pt(0, 1), &pt(1, 2), &Scalar::one(), 64).unwrap();
    assert_eq!(t, None);
    let t = separation_time(&time_varying(), &line(), &pt(1, 1), &Point::line(QSqrt2::sqrt2()), &Scalar::integer(10), 10)
        .unwrap();
    assert_eq!(t, Some(3));
}

#[test]
fn oe_points() {
    let v = oe_point_verdict(&doubling(), &line(), &pt(2, 1), &Scalar::one(), &budget());
    assert!(v.is_supported(), "{v:?}");
    assert_eq!(v.witnesses().len(), 8);
    check(&doubling(), &line(), &v);

    let v = oe_point_verdict(&identity(), &line(), &pt(0, 1), &Scalar::one(), &budget());
    match v.certificate() {
        Some(RefutationCertificate::UniformBound { l_star, .. }) => assert_eq!(l_star, &QSqrt2::one()),
        other => panic!("{other:?}"),
    }
    check(&identity(), &line(), &v);

    let v = oe_point_verdict(&root_scale(), &line(), &pt(1, 1), &Scalar::one(), &budget());
    match v.certificate() {
        Some(RefutationCertificate::UniformBound { l_star, scope: BoundScope::Level { level, .. } }) => {
            assert_eq!(l_star, &q(2, 1));
            assert_eq!(level, &Scalar::ratio(1, 4));
        }
        other => panic!("{other:?}"),
    }
    check(&root_scale(), &line(), &v);
}

#[test]
fn oe_points_of_sets() {
    let unit = StructuredSet::closed(q(0, 1), q(1, 1));
    let v = oe_point_of_set_verdict(&doubling(), &line(), &pt(2, 1), &unit, &Scalar::one(), &budget());
    assert_eq!(v.certificate(), Some(&RefutationCertificate::EmptyBall { level: Scalar::ratio(1, 2) }));
    check(&doubling(), &line(), &v);

    let harmonic = StructuredSet::harmonic(1);
    let v = oe_point_of_set_verdict(&doubling(), &line(), &pt(0, 1), &harmonic, &Scalar::one(), &budget());
    assert!(v.is_supported(), "{v:?}");
    check(&doubling(), &line(), &v);

    let fine = ScaleBudget::new(q(1, 40), rat(1, 2), 1, 64, 8, 0);
    let v = oe_point_of_set_verdict(&doubling(), &line(), &pt(1, 5), &harmonic, &Scalar::one(), &fine);
    assert_eq!(v.certificate(), Some(&RefutationCertificate::EmptyBall { level: Scalar::ratio(1, 40) }));
}

#[test]
fn roe_points() {
    let v = roe_point_verdict(&root_scale(), &line(), &pt(1, 1), &budget());
    assert!(v.is_supported(), "{v:?}");
    check(&root_scale(), &line(), &v);

    let v = roe_point_verdict(&identity(), &line(), &pt(0, 1), &budget());
    assert!(v.is_refuted());
    check(&identity(), &line(), &v);

    let v = roe_point_verdict(&doubling(), &line(), &pt(0, 1), &budget());
    assert!(v.is_supported(), "{v:?}");
    check(&doubling(), &line(), &v);
}

#[test]
fn roe_points_of_sets() {
    let v = roe_point_of_set_verdict(&doubling(), &line(), &pt(0, 1), &StructuredSet::harmonic(1), &budget());
    assert!(v.is_supported(), "{v:?}");
    check(&doubling(), &line(), &v);

    let unit = StructuredSet::closed(q(0, 1), q(1, 1));
    for sys in [doubling(), identity(), branch(), root_scale()] {
        let v = roe_point_of_set_verdict(&sys, &line(), &pt(2, 1), &unit, &budget());
        assert!(matches!(v.certificate(), Some(RefutationCertificate::EmptyBall { .. })), "{v:?}");
    }
    let v = roe_point_of_set_verdict(&identity(), &line(), &pt(1, 2), &unit, &budget());
    assert!(matches!(v.certificate(), Some(RefutationCertificate::UniformBound { .. })), "{v:?}");
    check(&identity(), &line(), &v);
}

#[test]
fn expansivity() {
    let v = expansive_verdict(&branch(), &line(), &[pt(1, 2), pt(1, 3)], &Scalar::ratio(1, 2), 64).unwrap();
    match v.certificate() {
        Some(RefutationCertificate::CollapsedOrbit { n0, .. }) => assert_eq!(*n0, 1),
        other => panic!("{other:?}"),
    }
    check(&branch(), &line(), &v);

    let pts = [pt(0, 1), pt(1, 10), pt(1, 7)];
    let v = expansive_verdict(&doubling(), &line(), &pts, &Scalar::one(), 32).unwrap();
    assert!(v.is_supported(), "{v:?}");
    check(&doubling(), &line(), &v);

    let err = expansive_verdict(&doubling(), &line(), &[pt(5, 1)], &Scalar::one(), 32);
    assert!(matches!(err, Err(Error::DegenerateInput(_))));
}

#[test]
fn continuum_expansivity() {
    let v = cw_expansive_verdict(&doubling(), &line(), &StructuredSet::closed(q(0, 1), q(1, 10)), &Scalar::one(), &budget())
        .unwrap();
    assert_eq!(v.witnesses()[0].n, 4);
    check(&doubling(), &line(), &v);

    let half = OrbitSystem::iterated(MapExpr::linear(q(1, 2)));
    let unit = StructuredSet::closed(q(0, 1), q(1, 1));
    let v = cw_expansive_verdict(&half, &line(), &unit, &Scalar::integer(2), &budget()).unwrap();
    assert!(v.is_refuted());
    check(&half, &line(), &v);

    let v = cw_expansive_verdict(&identity(), &line(), &unit, &Scalar::ratio(1, 2), &budget()).unwrap();
    assert_eq!(v.witnesses()[0].n, 1);
    check(&identity(), &line(), &v);

    let point = StructuredSet::closed(q(1, 1), q(1, 1));
    assert!(matches!(
        cw_expansive_verdict(&identity(), &line(), &point, &Scalar::one(), &budget()),
        Err(Error::DegenerateInput(_))
    ));

    let v = cw_expansive_verdict(&branch(), &line(), &unit, &Scalar::one(), &budget()).unwrap();
    assert!(!v.notes.is_empty());
}

#[test]
fn set_maps() {
    let empty = StructuredSet::intersection(vec![StructuredSet::harmonic(1), StructuredSet::harmonic(-1)]);
    let cands: Vec<Point> = [(0, 1), (1, 2), (-1, 3), (1, 7)].iter().map(|&(n, d)| pt(n, d)).collect();
    for (_, v) in oe_set_map(&doubling(), &line(), &empty, &cands, &Scalar::one(), &budget()) {
        assert!(matches!(v.certificate(), Some(RefutationCertificate::EmptyBall { .. })));
    }

    let family: Vec<StructuredSet> =
        (1..=6).map(|i| StructuredSet::finite(vec![q(-1, i), q(1, i)])).collect();
    for a in &family {
        let v = oe_point_of_set_verdict(&doubling(), &line(), &pt(0, 1), a, &Scalar::one(), &budget());
        assert!(v.is_refuted());
    }
    let all = StructuredSet::union(vec![StructuredSet::harmonic(1), StructuredSet::harmonic(-1)]);
    let v = oe_point_of_set_verdict(&doubling(), &line(), &pt(0, 1), &all, &Scalar::one(), &budget());
    assert!(v.is_supported());

    let a = StructuredSet::harmonic(1);
    let b = StructuredSet::union(vec![a.clone(), StructuredSet::finite(vec![q(0, 1)])]);
    let probe: Vec<Point> = [(0, 1), (1, 1), (1, 2), (1, 3)].iter().map(|&(n, d)| pt(n, d)).collect();
    let ma = oe_set_map(&doubling(), &line(), &a, &probe, &Scalar::one(), &budget());
    let mb = oe_set_map(&doubling(), &line(), &b, &probe, &Scalar::one(), &budget());
    for ((x, va), (_, vb)) in ma.iter().zip(&mb) {
        if va.is_supported() {
            assert!(vb.is_supported(), "{x}");
        }
    }
}

#[test]
fn halving() {
    let w = halving_transform(&doubling(), &line(), &pt(0, 1), &pt(1, 10), &pt(-1, 10), 3, &Scalar::one()).unwrap();
    assert_eq!(w.separation_lb, Scalar::ratio(4, 5));
    assert_eq!(w.threshold, Scalar::ratio(1, 2));
    verify_witness(&doubling(), &line(), &w).unwrap();

    let same = halving_transform(&doubling(), &line(), &pt(0, 1), &pt(1, 10), &pt(1, 10), 3, &Scalar::one());
    assert!(matches!(same, Err(Error::NotAWitness(_))));

    let h = QSqrt2::sqrt2().scale(&rat(1, 2));
    let (y, z) = (Point::line(&h + &q(1, 64)), Point::line(&h - &q(1, 64)));
    let n = 6;
    let w = halving_transform(&branch(), &line(), &Point::line(h), &y, &z, n, &Scalar::one()).unwrap();
    verify_witness(&branch(), &line(), &w).unwrap();
}

#[test]
fn conjugacy_transport() {
    let v = oe_point_verdict(&doubling(), &line(), &pt(1, 3), &Scalar::one(), &budget());
    let cases = [
        (MapExpr::affine(1, 1), MapExpr::affine(1, -1), ModulusFn::Identity, 1),
        (MapExpr::linear(2), MapExpr::linear(q(1, 2)), ModulusFn::Linear { k: q(2, 1) }, 2),
    ];
    for (g, g_inv, m, factor) in cases {
        let conj = conjugate(doubling(), g, g_inv, m).unwrap();
        for w in v.witnesses() {
            let t = transport_conjugacy(w, &conj, &line()).unwrap();
            assert_eq!(t.separation_lb, w.separation_lb.mul(&Scalar::integer(factor)));
            verify_witness(&conj, &line(), &t).unwrap();
        }
    }
    let conj = conjugate(doubling(), MapExpr::Cubic, MapExpr::CubeRoot, ModulusFn::CubicQuarter).unwrap();
    for w in v.witnesses() {
        let t = transport_conjugacy(w, &conj, &line()).unwrap();
        let quarter = w.separation_lb.pow(3).div(&Scalar::integer(4)).unwrap();
        assert_eq!(t.separation_lb, quarter);
        verify_witness(&conj, &line(), &t).unwrap();
    }
    assert!(matches!(
        transport_conjugacy(&v.witnesses()[0], &doubling(), &line()),
        Err(Error::UnsupportedSystemKind(_))
    ));
}

#[test]
fn product_embedding() {
    let sys = product(doubling(), doubling(), GammaFn::RatioBound);
    let space = MetricSpace::product(line(), line(), GammaFn::RatioBound);
    let w = SeparationWitness {
        x: pt(0, 1),
        level: Scalar::ratio(1, 2),
        y: pt(1, 4),
        n: 3,
        separation_lb: Scalar::one(),
        threshold: Scalar::ratio(1, 2),
        precision: 96,
    };
    let lifted = product_witness(&w, &pt(5, 1), Side::Left, &sys, &space).unwrap();
    assert_eq!(lifted.separation_lb, Scalar::ratio(1, 2));
    verify_witness(&sys, &space, &lifted).unwrap();
    let mirrored = product_witness(&w, &pt(5, 1), Side::Right, &sys, &space).unwrap();
    assert_eq!(mirrored.separation_lb, lifted.separation_lb);
    assert_eq!(mirrored.x, Point::pair(q(5, 1), q(0, 1)));

    let capped = GammaFn::Capped { c: q(1, 2) };
    let sys = product(doubling(), doubling(), capped.clone());
    let space = MetricSpace::product(line(), line(), capped);
    let w = SeparationWitness { threshold: Scalar::ratio(1, 4), ..w };
    let lifted = product_witness(&w, &pt(0, 1), Side::Left, &sys, &space).unwrap();
    assert_eq!(lifted.separation_lb, Scalar::ratio(1, 2));
}

#[test]
fn not_oe_certificates() {
    let l = |s: &OrbitSystem| match not_oe_certificate(s, &pt(1, 1)) {
        Some(RefutationCertificate::UniformBound { l_star, .. }) => Some(l_star),
        _ => None,
    };
    assert_eq!(l(&root_scale()), Some(q(2, 1)));
    assert_eq!(l(&identity()), Some(q(1, 1)));
    assert_eq!(l(&OrbitSystem::iterated(MapExpr::linear(q(1, 2)))), Some(q(1, 2)));
    assert_eq!(l(&doubling()), None);
}

#[test]
fn densities() {
    let one = witness_density(&doubling(), &line(), &pt(0, 1), &Scalar::ratio(1, 10), &Scalar::one(), 64, 100, 3).unwrap();
    assert_eq!(one, rat(1, 1));
    let none = witness_density(&identity(), &line(), &pt(0, 1), &Scalar::ratio(1, 10), &Scalar::one(), 64, 100, 3).unwrap();
    assert_eq!(none, rat(0, 1));
}

#[test]
fn laws_on_examples() {
    let cands: Vec<Point> = [(0, 1), (1, 2), (-1, 2), (1, 3), (-1, 3)].iter().map(|&(n, d)| pt(n, d)).collect();
    let family: Vec<StructuredSet> =
        (1..=4).map(|i| StructuredSet::finite(vec![q(-1, i), q(1, i)])).collect();
    let inst = LawInstance::new(doubling(), line(), cands.clone(), Scalar::one(), ScaleBudget::halving(4, 64, 16))
        .with_sets(family);
    let r = law_check("union-monotonicity", &inst).unwrap();
    assert!(r.holds_at_scale, "{r:?}");

    let sample: Vec<Point> = (0..10).map(|i| pt(i, 3)).collect();
    let inst = LawInstance::new(doubling(), line(), sample.clone(), Scalar::ratio(1, 2), ScaleBudget::halving(6, 64, 32));
    let r = law_check("implication-chain", &inst).unwrap();
    assert!(r.holds_at_scale && r.unresolved == 0 && r.checked == 20, "{r:?}");

    let inst = LawInstance::new(doubling(), line(), sample, Scalar::one(), ScaleBudget::halving(4, 64, 16))
        .with_alt_space(MetricSpace::bounded(line(), GammaFn::RatioBound));
    let r = law_check("metric-equivalence", &inst).unwrap();
    assert!(r.holds_at_scale && r.holding == 10, "{r:?}");

    assert!(matches!(law_check("nope", &inst), Err(Error::UnknownLaw(_))));
}
