//! Acceptance criteria, one line per criterion.
//!
//! Runs without the libtest harness so the PASS/FAIL lines always print.
//! Exits non-zero when any criterion fails.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use orbitwise::analysis::{
    evaluate, halving_transform, law_check, product_witness, roe_point_verdict, separation_time,
    transport_conjugacy, verify_verdict, verify_witness, LawId, LawReport, ScaleBudget, SeparationWitness, Side,
    StatusKind,
};
use orbitwise::catalog::{self, Probe};
use orbitwise::scalar::{arith, ArithOp, Enclosure, QSqrt2, Rational, Scalar};
use orbitwise::space::{GammaFn, MetricSpace, Point, StructuredSet};
use orbitwise::system::{conjugate, product, restrict};
use orbitwise::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn line() -> MetricSpace {
    MetricSpace::RealLine
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn case_named(law: LawId, label: &str) -> catalog::LawCase {
    catalog::law_suite()
        .into_iter()
        .find(|c| c.law == law && c.label == label)
        .unwrap_or_else(|| panic!("no {law} case labelled {label:?}"))
}

fn tally(r: &LawReport) -> String {
    format!("{}/{} holding, {} unresolved", r.holding, r.checked, r.unresolved)
}

// Oracles. Plain rational iteration, independent of the library's orbit and
// metric code.

fn frac(q: &Rational) -> Rational {
    q - q.floor()
}

fn arc(q: &Rational) -> Rational {
    let f = frac(q);
    let g = Rational::one() - &f;
    f.min(g)
}

fn oracle_doubling_time(y: &Rational, z: &Rational, d: &Rational, horizon: u64) -> Option<u64> {
    let mut gap = (y - z).abs();
    for n in 1..=horizon {
        gap *= rat(2, 1);
        if &gap > d {
            return Some(n);
        }
    }
    None
}

fn oracle_cat_time(y: [Rational; 2], z: [Rational; 2], d: &Rational, horizon: u64) -> Option<u64> {
    let step = |[a, b]: [Rational; 2]| [frac(&(&a * rat(2, 1) + &b)), frac(&(a + b))];
    let (mut y, mut z) = (y, z);
    for n in 1..=horizon {
        y = step(y);
        z = step(z);
        let dist = arc(&(&y[0] - &z[0])).max(arc(&(&y[1] - &z[1])));
        if &dist > d {
            return Some(n);
        }
    }
    None
}

fn random_ratio(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.random_range(lo..hi), den)
}

/// A nonzero offset of size roughly `2^-j`.
fn random_offset(rng: &mut ChaCha8Rng) -> Rational {
    let j = rng.random_range(3..12);
    let k = rng.random_range(1..1000);
    let sign = if rng.random_bool(0.5) { 1 } else { -1 };
    rat(sign * k, 1000 * (1 << j))
}

// 1. Catalog ground truth.
fn catalog_rows() -> Outcome {
    let mut rows = 0;
    let mut failed = Vec::new();
    for e in catalog::all() {
        for check in e.check_all().map_err(|err| format!("{}: {err}", e.name))? {
            rows += 1;
            let verified = match &check.verdict {
                Some(v) => verify_verdict(&e.system, &e.space, v).map_err(|err| err.to_string()),
                None => Ok(()),
            };
            if !check.reproduced || verified.is_err() {
                failed.push(format!("{} row {}: expected {}, got {} {:?}", e.name, check.row, check.expected, check.observed, verified.err()));
            }
        }
    }
    ensure(failed.is_empty(), format!("{}/{rows} rows reproduced {failed:?}", rows - failed.len()))
}

// 2. Implication chain on every catalog system.
fn implication_chain() -> Outcome {
    let mut checked = 0;
    let mut holding = 0;
    let mut bad = Vec::new();
    for case in catalog::chain_cases() {
        let r = law_check(case.law.name(), &case.instance).map_err(|e| format!("{}: {e}", case.label))?;
        checked += r.checked;
        holding += r.holding;
        if !r.holds_at_scale || r.unresolved > 0 || r.holding != r.checked {
            bad.push(format!("[{}] {}", case.label, tally(&r)));
        }
    }
    ensure(bad.is_empty(), format!("{holding}/{checked} implications hold at K=6, N=64, M=32 {bad:?}"))
}

// 3. Halving transformer.
fn halving() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut report = Vec::new();
    let mut ok = true;

    let doubling = catalog::doubling();
    let d_a = rat(1, 1);
    let mut passed = 0;
    for _ in 0..1000 {
        let x = random_ratio(&mut rng, -1000, 1000, 1000);
        let y = &x + random_offset(&mut rng);
        let z = &x + random_offset(&mut rng);
        if y == z {
            continue;
        }
        let (px, py, pz) = (Point::line(QSqrt2::rational(x)), Point::line(QSqrt2::rational(y.clone())), Point::line(QSqrt2::rational(z.clone())));
        let d = Scalar::rational(d_a.clone());
        let Ok(Some(n)) = separation_time(&doubling, &line(), &py, &pz, &d, 64) else { continue };
        if Some(n) != oracle_doubling_time(&y, &z, &d_a, 64) {
            continue;
        }
        let half = Scalar::rational(&d_a / rat(2, 1));
        if let Ok(w) = halving_transform(&doubling, &line(), &px, &py, &pz, n, &d) {
            if w.threshold == half && verify_witness(&doubling, &line(), &w).is_ok() {
                passed += 1;
            }
        }
    }
    ok &= passed == 1000;
    report.push(format!("doubling {passed}/1000"));

    let cat = catalog::cat_map();
    let torus = MetricSpace::Torus2;
    let d_a = rat(1, 5);
    let mut passed = 0;
    for _ in 0..1000 {
        let x = [random_ratio(&mut rng, 0, 1000, 1000), random_ratio(&mut rng, 0, 1000, 1000)];
        let y = [&x[0] + random_offset(&mut rng), &x[1] + random_offset(&mut rng)];
        let z = [&x[0] + random_offset(&mut rng), &x[1] + random_offset(&mut rng)];
        let pt = |p: &[Rational; 2]| Point::pair(QSqrt2::rational(frac(&p[0])), QSqrt2::rational(frac(&p[1])));
        let (px, py, pz) = (pt(&x), pt(&y), pt(&z));
        let d = Scalar::rational(d_a.clone());
        let Ok(Some(n)) = separation_time(&cat, &torus, &py, &pz, &d, 64) else { continue };
        if Some(n) != oracle_cat_time(y.clone(), z.clone(), &d_a, 64) {
            continue;
        }
        let half = Scalar::rational(&d_a / rat(2, 1));
        if let Ok(w) = halving_transform(&cat, &torus, &px, &py, &pz, n, &d) {
            if w.threshold == half && verify_witness(&cat, &torus, &w).is_ok() {
                passed += 1;
            }
        }
    }
    ok &= passed == 1000;
    report.push(format!("cat map {passed}/1000"));
    ensure(ok, format!("certified at d_A/2: {}", report.join(", ")))
}

/// A threshold-1 witness for doubling, built from a seeded pair and the
/// oracle's separation time.
fn doubling_witness(rng: &mut ChaCha8Rng) -> SeparationWitness {
    loop {
        let irrational = rng.random_bool(0.25);
        let mut x = QSqrt2::rational(random_ratio(rng, -1000, 1000, 1000));
        if irrational {
            x = &x + &QSqrt2::sqrt2().scale(&random_ratio(rng, -500, 500, 1000));
        }
        let delta = random_offset(rng);
        let y = &x + &QSqrt2::rational(delta.clone());
        let Some(n) = oracle_doubling_time(&delta, &Rational::zero(), &rat(1, 1), 64) else { continue };
        let gap = delta.abs() * Rational::from_integer(BigInt::from(2).pow(n as u32));
        return SeparationWitness {
            x: Point::line(x),
            level: Scalar::rational(delta.abs()).dyadic_ceiling(),
            y: Point::line(y),
            n,
            separation_lb: Scalar::rational(gap),
            threshold: Scalar::one(),
            precision: 96,
        };
    }
}

// 4. Conjugacy transport.
fn conjugacy() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let witnesses: Vec<SeparationWitness> = (0..500).map(|_| doubling_witness(&mut rng)).collect();
    let base_ok = witnesses.iter().all(|w| verify_witness(&catalog::doubling(), &line(), w).is_ok());
    let mut ok = base_ok;
    let mut report = Vec::new();
    for (label, g, g_inv, m) in catalog::conjugators() {
        let conj = conjugate(catalog::doubling(), g, g_inv, m).map_err(|e| e.to_string())?;
        let passed = witnesses
            .iter()
            .filter(|w| transport_conjugacy(w, &conj, &line()).is_ok_and(|t| verify_witness(&conj, &line(), &t).is_ok()))
            .count();
        ok &= passed == 500;
        report.push(format!("{label} {passed}/500"));
    }
    ensure(ok, format!("{} (source witnesses verified: {base_ok})", report.join(", ")))
}

// 5. Product embedding.
fn product_embedding() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let sys = product(catalog::doubling(), catalog::doubling(), GammaFn::RatioBound);
    let space = MetricSpace::product(line(), line(), GammaFn::RatioBound);
    let mut passed = 0;
    for _ in 0..500 {
        let w = doubling_witness(&mut rng);
        let partner = Point::line(QSqrt2::rational(random_ratio(&mut rng, -5000, 5000, 1000)));
        let side = if rng.random_bool(0.5) { Side::Left } else { Side::Right };
        let Ok(lifted) = product_witness(&w, &partner, side, &sys, &space) else { continue };
        let floor = GammaFn::RatioBound.apply(&w.separation_lb);
        let px = sys.iterate(lifted.n, &lifted.x).map_err(|e| e.to_string())?;
        let py = sys.iterate(lifted.n, &lifted.y).map_err(|e| e.to_string())?;
        let dist = space.distance(&px, &py).map_err(|e| e.to_string())?;
        let above = !floor.cmp_gt(&dist).is_true() && dist.certain_cmp(&floor) != Some(std::cmp::Ordering::Less);
        if above && verify_witness(&sys, &space, &lifted).is_ok() {
            passed += 1;
        }
    }
    ensure(passed == 500, format!("{passed}/500 lifted witnesses certified above gamma(delta)"))
}

// 6. Iterate power on the cat map.
fn iterate_power() -> Outcome {
    let case = case_named(LawId::IteratePower, "cat map, 5×5 grid");
    let r = law_check(case.law.name(), &case.instance).map_err(|e| e.to_string())?;
    ensure(r.holds_at_scale && r.checked == 25 && r.holding == 25, format!("F vs F^2 on the 5x5 torus grid: {}", tally(&r)))
}

// 7. Metric equivalence.
fn metric_equivalence() -> Outcome {
    let case = case_named(LawId::MetricEquivalence, "doubling, line and t/(1+t)");
    let r = law_check(case.law.name(), &case.instance).map_err(|e| e.to_string())?;
    ensure(r.holds_at_scale && r.checked == 20 && r.holding == 20, format!("line vs bounded metric: {}", tally(&r)))
}

// 8. Restriction.
fn restriction() -> Outcome {
    let case = case_named(LawId::Restriction, "doubling on [0, ∞)");
    let r = law_check(case.law.name(), &case.instance).map_err(|e| e.to_string())?;
    let restricted = restrict(catalog::doubling(), StructuredSet::ray_from(QSqrt2::zero()), 64).map_err(|e| e.to_string())?;
    let budget = ScaleBudget::halving(6, 64, 32);
    let supported = case
        .instance
        .candidates
        .iter()
        .filter(|x| roe_point_verdict(&restricted, &line(), x, &budget).is_supported())
        .count();
    let rejected = restrict(catalog::doubling(), StructuredSet::closed(QSqrt2::zero(), QSqrt2::one()), 64);
    let not_invariant = matches!(&rejected, Err(Error::NotInvariant { .. }));
    ensure(
        r.holds_at_scale && r.checked == 10 && r.holding == 10 && supported == 10 && not_invariant,
        format!(
            "[0, inf): law {}, ROE supported {supported}/10; [0, 1]: {}",
            tally(&r),
            rejected.err().map_or("accepted".to_string(), |e| e.to_string())
        ),
    )
}

// 9. Numerics soundness.
fn soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ops = [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Div, ArithOp::Neg, ArithOp::Abs];
    let mut contained = 0;
    let random_q = |rng: &mut ChaCha8Rng| {
        let (da, db) = (rng.random_range(1..1000), rng.random_range(1..1000));
        QSqrt2::new(random_ratio(rng, -10_000, 10_000, da), random_ratio(rng, -10_000, 10_000, db))
    };
    for i in 0..10_000 {
        let a = random_q(&mut rng);
        let mut b = random_q(&mut rng);
        while b.abs() < QSqrt2::ratio(1, 8) {
            b = random_q(&mut rng);
        }
        let p = rng.random_range(24..200);
        let (ea, eb) = (Scalar::Exact(a.clone()), Scalar::Exact(b.clone()));
        let (ia, ib) = (Scalar::Interval(Enclosure::from_qsqrt2(&a, p)), Scalar::Interval(Enclosure::from_qsqrt2(&b, p)));
        let ok = if i % 7 == 6 {
            let e = ea.pow(3);
            ia.pow(3).contains(e.as_exact().unwrap())
        } else {
            let op = ops[rng.random_range(0..ops.len())];
            let e = arith(op, &ea, &eb).map_err(|e| e.to_string())?;
            arith(op, &ia, &ib).is_ok_and(|iv| iv.contains(e.as_exact().unwrap()))
        };
        contained += ok as usize;
    }

    let budgets = [
        ScaleBudget::halving(6, 64, 32),
        ScaleBudget::halving(4, 32, 16).with_seed(11),
        ScaleBudget::halving(8, 96, 48).with_seed(23),
    ];
    let mut conflicts = Vec::new();
    let mut queries = 0;
    for e in catalog::all() {
        for row in &e.expected {
            let Probe::Verdict { query } = &row.probe else { continue };
            queries += 1;
            let mut seen: HashMap<StatusKind, usize> = HashMap::new();
            for b in &budgets {
                let v = evaluate(&e.system, &e.space, query, b).map_err(|err| format!("{}: {err}", e.name))?;
                *seen.entry(v.kind()).or_default() += 1;
            }
            if seen.contains_key(&StatusKind::Supported) && seen.contains_key(&StatusKind::Refuted) {
                conflicts.push(format!("{} {}", e.name, query.name()));
            }
        }
    }
    ensure(
        contained == 10_000 && conflicts.is_empty(),
        format!("{contained}/10000 enclosures contain the exact value; {queries} queries x 3 budgets, conflicts {conflicts:?}"),
    )
}

// 10. Determinism of the verify command.
fn determinism() -> Outcome {
    let root = tempfile::tempdir().map_err(|e| e.to_string())?;
    let config = r#"{
  "schema": "orbitwise.config/1",
  "command": "verify",
  "budget": {"eps_max": "1/2", "ratio": "1/2", "levels": 6, "horizon": 64, "samples": 32, "seed": 0}
}"#;
    let mut reports = Vec::new();
    for (i, workers) in ["1", "1", "4"].into_iter().enumerate() {
        let dir = root.path().join(format!("run{i}"));
        std::fs::create_dir(&dir).map_err(|e| e.to_string())?;
        std::fs::write(dir.join("verify.json"), config).map_err(|e| e.to_string())?;
        let out = Command::new(env!("CARGO_BIN_EXE_orbitwise"))
            .current_dir(&dir)
            .args(["--config", "verify.json", "--out", "report.json", "--workers", workers])
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("run {i} exited with {}: {}", out.status, String::from_utf8_lossy(&out.stderr)));
        }
        reports.push(std::fs::read(dir.join("report.json")).map_err(|e| e.to_string())?);
    }
    let repeat = reports[0] == reports[1];
    let workers = reports[0] == reports[2];
    ensure(
        repeat && workers,
        format!("{} bytes; repeated run identical: {repeat}; 1 vs 4 workers identical: {workers}", reports[0].len()),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("catalog ground truth", catalog_rows),
        ("implication chain", implication_chain),
        ("halving transformer", halving),
        ("conjugacy transport", conjugacy),
        ("product embedding", product_embedding),
        ("iterate power", iterate_power),
        ("metric equivalence", metric_equivalence),
        ("restriction", restriction),
        ("numerics soundness", soundness),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
