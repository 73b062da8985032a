//! Named systems with expected classifications.
//!
//! Every entry carries the rows it is expected to reproduce at its default
//! budget, each tagged with where the expectation comes from.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    evaluate, separation_time, LawId, LawInstance, Query, ScaleBudget, StatusKind, Verdict,
};
use crate::error::{Error, Result};
use crate::scalar::{QSqrt2, Rational, Scalar};
use crate::space::{GammaFn, MetricSpace, Point, StructuredSet};
use crate::system::{DirectRule, Family, MapExpr, ModulusFn, OrbitSystem};

/// Where an expected row comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Asserted by the example the entry reproduces.
    Stated,
    /// Immediate from the definitions.
    Evident,
    /// Established by direct computation.
    Computed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "probe", rename_all = "kebab-case")]
pub enum Probe {
    Verdict { query: Query },
    SeparationTime { x: Point, y: Point, d: Scalar, horizon: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "expect", rename_all = "kebab-case")]
pub enum Expect {
    Status {
        status: StatusKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        certificate: Option<String>,
    },
    Time { n: Option<u64> },
}

impl std::fmt::Display for Expect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expect::Status { status, certificate: Some(c) } => write!(f, "{status} ({c})"),
            Expect::Status { status, certificate: None } => write!(f, "{status}"),
            Expect::Time { n: Some(n) } => write!(f, "separates at n = {n}"),
            Expect::Time { n: None } => f.write_str("no separation"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpectedRow {
    #[serde(flatten)]
    pub probe: Probe,
    #[serde(flatten)]
    pub expect: Expect,
    pub provenance: Provenance,
}

/// The outcome of re-running one expected row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub entry: String,
    pub row: usize,
    pub expected: String,
    pub observed: String,
    pub reproduced: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<Verdict>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub name: String,
    pub system: OrbitSystem,
    pub space: MetricSpace,
    pub subsets: Vec<(String, StructuredSet)>,
    pub expected: Vec<ExpectedRow>,
    pub notes: String,
    pub budget: ScaleBudget,
    /// Points and threshold on which the entry's laws are sampled.
    pub sample: Vec<Point>,
    pub threshold: Scalar,
}

impl CatalogEntry {
    pub fn subset(&self, name: &str) -> Option<&StructuredSet> {
        self.subsets.iter().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    /// Re-runs row `index` at `budget`.
    pub fn check_row(&self, index: usize, budget: &ScaleBudget) -> Result<RowCheck> {
        let row = self
            .expected
            .get(index)
            .ok_or_else(|| Error::InvalidArgument(format!("{} has no row {index}", self.name)))?;
        let (observed, reproduced, verdict) = match (&row.probe, &row.expect) {
            (Probe::Verdict { query }, Expect::Status { status, certificate }) => {
                let v = evaluate(&self.system, &self.space, query, budget)?;
                let kind = v.certificate().map(|c| c.kind_name().to_string());
                let observed = Expect::Status { status: v.kind(), certificate: kind.clone() };
                let ok = v.kind() == *status && (certificate.is_none() || *certificate == kind);
                (observed.to_string(), ok, Some(v))
            }
            (Probe::SeparationTime { x, y, d, horizon }, Expect::Time { n }) => {
                let t = separation_time(&self.system, &self.space, x, y, d, *horizon)?;
                (Expect::Time { n: t }.to_string(), t == *n, None)
            }
            _ => return Err(Error::InvalidArgument(format!("{} row {index} mixes probe kinds", self.name))),
        };
        Ok(RowCheck {
            entry: self.name.clone(),
            row: index,
            expected: row.expect.to_string(),
            observed,
            reproduced,
            verdict,
        })
    }

    /// Re-runs every row at the default budget.
    pub fn check_all(&self) -> Result<Vec<RowCheck>> {
        (0..self.expected.len()).map(|i| self.check_row(i, &self.budget)).collect()
    }
}

fn q(n: i64, d: i64) -> QSqrt2 {
    QSqrt2::ratio(n, d)
}

fn pt(n: i64, d: i64) -> Point {
    Point::line(q(n, d))
}

fn status(
    query: Query,
    status: StatusKind,
    certificate: Option<&str>,
    provenance: Provenance,
) -> ExpectedRow {
    ExpectedRow {
        probe: Probe::Verdict { query },
        expect: Expect::Status { status, certificate: certificate.map(str::to_string) },
        provenance,
    }
}

use Provenance::{Computed, Evident, Stated};
use StatusKind::{Refuted, Supported};

const EMPTY: Option<&str> = Some("empty-ball");
const BOUND: Option<&str> = Some("uniform-bound");
const COLLAPSE: Option<&str> = Some("collapsed-orbit");

fn default_budget() -> ScaleBudget {
    ScaleBudget::halving(6, 64, 32)
}

fn line_sample() -> Vec<Point> {
    (-4..=5).map(|k| pt(k, 3)).collect()
}

fn entry(name: &str, system: OrbitSystem, space: MetricSpace, notes: &str) -> CatalogEntry {
    CatalogEntry {
        name: name.to_string(),
        system,
        space,
        subsets: Vec::new(),
        expected: Vec::new(),
        notes: notes.to_string(),
        budget: default_budget(),
        sample: line_sample(),
        threshold: Scalar::one(),
    }
}

pub fn doubling() -> OrbitSystem {
    OrbitSystem::iterated(MapExpr::linear(2))
}

pub fn cat_map() -> OrbitSystem {
    OrbitSystem::iterated(MapExpr::TorusLinear { m: [[2, 1], [1, 1]] })
}

/// The 5×5 grid `{(i/5, j/5)}` of the torus.
pub fn torus_grid() -> Vec<Point> {
    (0..5).flat_map(|i| (0..5).map(move |j| Point::pair(q(i, 5), q(j, 5)))).collect()
}

fn doubling_unit_interval() -> CatalogEntry {
    let unit = StructuredSet::closed(q(0, 1), q(1, 1));
    let mut e = entry("doubling-unit-interval", doubling(), MetricSpace::RealLine, "f(x) = 2x with A = [0, 1]");
    e.expected = vec![
        status(Query::OePoint { x: pt(2, 1), d: Scalar::one() }, Supported, None, Stated),
        status(Query::OePointOfSet { x: pt(2, 1), set: unit.clone(), d: Scalar::one() }, Refuted, EMPTY, Stated),
        status(Query::RoePointOfSet { x: pt(2, 1), set: unit.clone() }, Refuted, EMPTY, Stated),
    ];
    e.subsets = vec![("A".into(), unit)];
    e
}

fn branch_collapse() -> CatalogEntry {
    let system = OrbitSystem::iterated(MapExpr::branch(MapExpr::constant(2), MapExpr::linear(2)));
    let mut e = entry(
        "branch-collapse",
        system,
        MetricSpace::RealLine,
        "λ on rationals and λx on irrationals, λ = 2; not injective",
    );
    e.expected.push(status(
        Query::Expansive { points: vec![pt(1, 2), pt(1, 3)], d: Scalar::ratio(1, 2), horizon: 64 },
        Refuted,
        COLLAPSE,
        Stated,
    ));
    for j in -10..10 {
        e.expected.push(status(Query::OePoint { x: pt(j, 4), d: Scalar::one() }, Supported, None, Stated));
    }
    e.expected.push(status(Query::RoePoint { x: pt(1, 2) }, Supported, None, Stated));
    e.expected.push(status(Query::RoePoint { x: Point::line(QSqrt2::sqrt2()) }, Supported, None, Computed));
    e
}

fn harmonic_pair() -> CatalogEntry {
    let a = StructuredSet::harmonic(1);
    let b = StructuredSet::harmonic(-1);
    let ab = StructuredSet::intersection(vec![a.clone(), b.clone()]);
    let mut e = entry("harmonic-pair", doubling(), MetricSpace::RealLine, "A = {1/n}, B = {-1/n} under f(x) = 2x");
    e.expected = vec![
        status(Query::OePointOfSet { x: pt(0, 1), set: a.clone(), d: Scalar::one() }, Supported, None, Stated),
        status(Query::OePointOfSet { x: pt(0, 1), set: b.clone(), d: Scalar::one() }, Supported, None, Stated),
    ];
    for x in [pt(0, 1), pt(1, 2), pt(-1, 3), pt(1, 1)] {
        e.expected.push(status(
            Query::OePointOfSet { x, set: ab.clone(), d: Scalar::one() },
            Refuted,
            EMPTY,
            Stated,
        ));
    }
    e.subsets = vec![("A".into(), a), ("B".into(), b), ("A∩B".into(), ab)];
    e
}

/// `A_i = {−1/i, 1/i}`.
pub fn union_member(i: i64) -> StructuredSet {
    StructuredSet::finite(vec![q(-1, i), q(1, i)])
}

fn union_family() -> CatalogEntry {
    let all = StructuredSet::union(vec![StructuredSet::harmonic(1), StructuredSet::harmonic(-1)]);
    let mut e = entry("union-family", doubling(), MetricSpace::RealLine, "A_i = {-1/i, 1/i} under f(x) = 2x");
    for i in 1..=6 {
        let a = union_member(i);
        e.expected.push(status(
            Query::OePointOfSet { x: pt(0, 1), set: a.clone(), d: Scalar::one() },
            Refuted,
            EMPTY,
            Stated,
        ));
        e.subsets.push((format!("A_{i}"), a));
    }
    e.expected.push(status(
        Query::OePointOfSet { x: pt(0, 1), set: all.clone(), d: Scalar::one() },
        Supported,
        None,
        Stated,
    ));
    e.subsets.push(("union".into(), all));
    e
}

fn root_scale() -> CatalogEntry {
    let system = OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base: Rational::from_integer(2.into()) } };
    let mut e = entry("root-scale", system, MetricSpace::RealLine, "O_n(x) = 2^(1/n)·x");
    for x in [pt(1, 1), Point::line(QSqrt2::sqrt2()), pt(-3, 1)] {
        e.expected.push(status(Query::RoePoint { x }, Supported, None, Stated));
    }
    e.expected.push(status(Query::OePoint { x: pt(1, 1), d: Scalar::one() }, Refuted, BOUND, Stated));
    e
}

fn time_varying_branch() -> CatalogEntry {
    let system = OrbitSystem::TimeVarying { family: Family::BranchLinear { a: Scalar::one(), b: Scalar::one() } };
    let mut e = entry(
        "time-varying-branch",
        system,
        MetricSpace::RealLine,
        "f_n = n + 1 on rationals and (n + 1)x on irrationals; O_n = f_n ∘ … ∘ f_0",
    );
    e.expected.push(ExpectedRow {
        probe: Probe::SeparationTime {
            x: pt(1, 1),
            y: Point::line(QSqrt2::sqrt2()),
            d: Scalar::integer(10),
            horizon: 10,
        },
        expect: Expect::Time { n: Some(3) },
        provenance: Computed,
    });
    e.expected.push(status(
        Query::Expansive { points: vec![pt(1, 2), pt(1, 3), pt(2, 1)], d: Scalar::one(), horizon: 64 },
        Refuted,
        COLLAPSE,
        Stated,
    ));
    for k in 1..=10 {
        e.expected.push(status(Query::OePoint { x: pt(k, 2), d: Scalar::one() }, Supported, None, Stated));
    }
    e
}

fn doubling_line() -> CatalogEntry {
    let mut e = entry("doubling-line", doubling(), MetricSpace::RealLine, "f(x) = 2x on the line");
    e.expected = vec![
        ExpectedRow {
            probe: Probe::SeparationTime { x: pt(0, 1), y: pt(1, 100), d: Scalar::one(), horizon: 64 },
            expect: Expect::Time { n: Some(7) },
            provenance: Computed,
        },
        status(Query::OePoint { x: pt(0, 1), d: Scalar::one() }, Supported, None, Computed),
        status(Query::RoePoint { x: pt(0, 1) }, Supported, None, Computed),
        status(
            Query::Expansive { points: vec![pt(0, 1), pt(1, 10), pt(1, 7)], d: Scalar::one(), horizon: 32 },
            Supported,
            None,
            Computed,
        ),
        status(
            Query::CwExpansive { set: StructuredSet::closed(q(0, 1), q(1, 10)), c: Scalar::one() },
            Supported,
            None,
            Computed,
        ),
    ];
    e
}

fn doubling_circle() -> CatalogEntry {
    let system = OrbitSystem::iterated(MapExpr::CircleLinear { k: 2 });
    let mut e = entry("doubling-circle", system, MetricSpace::Circle, "x ↦ 2x mod 1");
    let d = Scalar::ratio(1, 5);
    e.expected = vec![
        status(Query::OePoint { x: pt(1, 3), d: d.clone() }, Supported, None, Computed),
        status(Query::RoePoint { x: pt(1, 5) }, Supported, None, Computed),
        status(
            Query::Expansive { points: vec![pt(0, 1), pt(1, 10), pt(1, 7)], d: d.clone(), horizon: 32 },
            Supported,
            None,
            Computed,
        ),
    ];
    e.sample = (0..10).map(|k| pt(k, 11)).collect();
    e.threshold = d;
    e
}

fn cat_map_torus() -> CatalogEntry {
    let mut e = entry("cat-map-torus", cat_map(), MetricSpace::Torus2, "(x, y) ↦ (2x + y, x + y) mod 1");
    let d = Scalar::ratio(1, 10);
    e.expected = vec![
        status(Query::Expansive { points: torus_grid(), d: d.clone(), horizon: 30 }, Supported, None, Computed),
        status(Query::OePoint { x: Point::pair(q(1, 3), q(1, 7)), d: d.clone() }, Supported, None, Computed),
        status(Query::RoePoint { x: Point::pair(q(0, 1), q(0, 1)) }, Supported, None, Computed),
    ];
    e.sample = torus_grid().into_iter().take(10).collect();
    e.threshold = d;
    e
}

fn contraction_half() -> CatalogEntry {
    let system = OrbitSystem::iterated(MapExpr::linear(q(1, 2)));
    let mut e = entry("contraction-half", system, MetricSpace::RealLine, "f(x) = x/2");
    e.expected = vec![
        status(Query::OePoint { x: pt(1, 1), d: Scalar::one() }, Refuted, BOUND, Evident),
        status(Query::RoePoint { x: pt(1, 1) }, Refuted, BOUND, Evident),
        status(
            Query::Expansive { points: vec![pt(0, 1), pt(1, 1)], d: Scalar::one(), horizon: 64 },
            Refuted,
            BOUND,
            Evident,
        ),
        status(
            Query::CwExpansive { set: StructuredSet::closed(q(0, 1), q(1, 1)), c: Scalar::integer(2) },
            Refuted,
            BOUND,
            Evident,
        ),
    ];
    e
}

fn identity() -> CatalogEntry {
    let mut e = entry("identity", OrbitSystem::iterated(MapExpr::identity()), MetricSpace::RealLine, "f(x) = x");
    e.expected = vec![
        status(Query::OePoint { x: pt(0, 1), d: Scalar::one() }, Refuted, BOUND, Evident),
        status(Query::RoePoint { x: pt(0, 1) }, Refuted, BOUND, Evident),
        status(
            Query::Expansive { points: vec![pt(0, 1), pt(1, 2)], d: Scalar::one(), horizon: 64 },
            Refuted,
            BOUND,
            Evident,
        ),
    ];
    e
}

const NAMES: [&str; 11] = [
    "doubling-unit-interval",
    "branch-collapse",
    "harmonic-pair",
    "union-family",
    "root-scale",
    "time-varying-branch",
    "doubling-line",
    "doubling-circle",
    "cat-map-torus",
    "contraction-half",
    "identity",
];

/// Entry names in a fixed order.
pub fn list() -> Vec<&'static str> {
    NAMES.to_vec()
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    Ok(match name {
        "doubling-unit-interval" => doubling_unit_interval(),
        "branch-collapse" => branch_collapse(),
        "harmonic-pair" => harmonic_pair(),
        "union-family" => union_family(),
        "root-scale" => root_scale(),
        "time-varying-branch" => time_varying_branch(),
        "doubling-line" => doubling_line(),
        "doubling-circle" => doubling_circle(),
        "cat-map-torus" => cat_map_torus(),
        "contraction-half" => contraction_half(),
        "identity" => identity(),
        other => return Err(Error::UnknownEntry(other.to_string())),
    })
}

pub fn all() -> Vec<CatalogEntry> {
    NAMES.iter().map(|n| get(n).expect("registered name")).collect()
}

/// A labelled law instance.
#[derive(Clone, Debug)]
pub struct LawCase {
    pub label: String,
    pub law: LawId,
    pub instance: LawInstance,
}

fn case(label: &str, law: LawId, instance: LawInstance) -> LawCase {
    LawCase { label: label.to_string(), law, instance }
}

/// The implication chain on every distinct system of the catalog, sampled
/// at `K = 6, N = 64, M = 32`. Entries sharing a system share a case.
pub fn chain_cases() -> Vec<LawCase> {
    let mut groups: Vec<(Vec<String>, CatalogEntry)> = Vec::new();
    for e in all() {
        match groups.iter_mut().find(|(_, g)| g.system == e.system && g.space == e.space) {
            Some((names, _)) => names.push(e.name),
            None => groups.push((vec![e.name.clone()], e)),
        }
    }
    groups
        .into_iter()
        .map(|(names, e)| {
            let inst = LawInstance::new(e.system, e.space, e.sample, e.threshold, ScaleBudget::halving(6, 64, 32));
            case(&names.join(", "), LawId::ImplicationChain, inst)
        })
        .collect()
}

/// The law instances exercised by the `verify` command.
pub fn law_suite() -> Vec<LawCase> {
    let line = MetricSpace::RealLine;
    let small = ScaleBudget::halving(4, 64, 16);
    let on_line = |cands: Vec<Point>| LawInstance::new(doubling(), line.clone(), cands, Scalar::one(), small.clone());
    let unit = StructuredSet::closed(q(0, 1), q(1, 1));

    let mut out = vec![
        case(
            "doubling, A_i = {±1/i}",
            LawId::UnionMonotonicity,
            on_line(vec![pt(0, 1), pt(1, 2), pt(-1, 2), pt(1, 3), pt(-1, 3)])
                .with_sets((1..=6).map(union_member).collect()),
        ),
        case(
            "doubling, [0, 1] and [1/2, 2]",
            LawId::Intersection,
            on_line(vec![pt(0, 1), pt(1, 2), pt(3, 4), pt(1, 1), pt(3, 2)])
                .with_sets(vec![unit.clone(), StructuredSet::closed(q(1, 2), q(2, 1))]),
        ),
        case(
            "doubling, {1/n} and {0, 1}",
            LawId::FiniteUnionEquality,
            on_line(vec![pt(0, 1), pt(1, 2), pt(1, 1), pt(2, 1)])
                .with_sets(vec![StructuredSet::harmonic(1), StructuredSet::finite(vec![q(0, 1), q(1, 1)])]),
        ),
        case(
            "doubling, [0, 1] and [2, 3]",
            LawId::OeSetUnion,
            on_line(vec![pt(0, 1), pt(1, 2), pt(1, 1), pt(2, 1), pt(5, 2), pt(3, 1)])
                .with_sets(vec![unit.clone(), StructuredSet::closed(q(2, 1), q(3, 1))]),
        ),
        case(
            "doubling, (0, 1)",
            LawId::Closure,
            on_line(vec![pt(0, 1), pt(1, 4), pt(1, 2), pt(1, 1)])
                .with_sets(vec![StructuredSet::open(q(0, 1), q(1, 1))]),
        ),
        case(
            "doubling, line and t/(1+t)",
            LawId::MetricEquivalence,
            on_line(metric_candidates()).with_alt_space(MetricSpace::bounded(line.clone(), GammaFn::RatioBound)),
        ),
        case(
            "cat map, 5×5 grid",
            LawId::IteratePower,
            LawInstance::new(cat_map(), MetricSpace::Torus2, torus_grid(), Scalar::ratio(1, 10), ScaleBudget::halving(4, 30, 16))
                .with_power(2),
        ),
        case(
            "doubling on [0, ∞)",
            LawId::Restriction,
            LawInstance::new(doubling(), line.clone(), (1..=10).map(|k| pt(k, 1)).collect(), Scalar::one(), small.clone())
                .relative()
                .with_carrier(StructuredSet::ray_from(q(0, 1))),
        ),
        case(
            "doubling on [0, 1]",
            LawId::Restriction,
            on_line(vec![pt(1, 2)]).relative().with_carrier(unit),
        ),
    ];
    for (label, g, g_inv, m) in conjugators() {
        out.push(case(
            label,
            LawId::UniformConjugacy,
            on_line(vec![pt(1, 3), pt(-2, 5), Point::line(QSqrt2::sqrt2())]).with_conjugacy(g, g_inv, m),
        ));
    }
    out.extend(chain_cases());
    out
}

/// 20 candidates on the line: 14 rationals and 6 with a √2 part.
pub fn metric_candidates() -> Vec<Point> {
    let mut out: Vec<Point> = (-7..7).map(|k| pt(k, 4)).collect();
    for k in 1..=6 {
        out.push(Point::line(QSqrt2::sqrt2().scale(&Rational::new(k.into(), 3.into()))));
    }
    out
}

/// The conjugators `x + 1`, `2x` and `x³` with their moduli.
pub fn conjugators() -> Vec<(&'static str, MapExpr, MapExpr, ModulusFn)> {
    vec![
        ("doubling through x + 1", MapExpr::affine(1, 1), MapExpr::affine(1, -1), ModulusFn::Identity),
        (
            "doubling through 2x",
            MapExpr::linear(2),
            MapExpr::linear(q(1, 2)),
            ModulusFn::Linear { k: q(2, 1) },
        ),
        ("doubling through x³", MapExpr::Cubic, MapExpr::CubeRoot, ModulusFn::CubicQuarter),
    ]
}
