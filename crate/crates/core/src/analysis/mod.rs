//! Finite-scale verdicts with certified witnesses and refutation
//! certificates.
//!
//! The universal quantifiers of the definitions are replaced by a
//! [`ScaleBudget`]: a geometric grid of ball radii, a horizon for the time
//! index and a sample count. A `Supported` verdict carries one re-checkable
//! witness per radius. A `Refuted` verdict carries a certificate that rules
//! out witnesses at every scale. Anything else is `Inconclusive`.

mod laws;
mod search;
mod transform;
mod verify;

use serde::{Deserialize, Serialize};

pub use laws::{law_check, LawId, LawInstance, LawReport};
pub use search::{
    cw_expansive_verdict, expansive_verdict, not_oe_certificate, oe_point_of_set_verdict,
    oe_point_verdict, oe_set_map, roe_point_of_set_verdict, roe_point_verdict, separation_time,
    witness_density,
};
pub use transform::{halving_transform, product_witness, transport_conjugacy, Side};
pub use verify::{verify_certificate, verify_verdict, verify_witness};

use crate::error::{Error, Result};
use crate::scalar::{pow2, rational_serde, QSqrt2, Rational, Scalar};
use crate::space::{MetricSpace, Point, StructuredSet};
use crate::system::{expansion_bounds, OrbitSystem};

/// The finite discretization of a verdict's quantifiers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScaleBudget {
    /// Largest ball radius `ε₀`; for relative queries, the radius `ε_x`
    /// below which every level must be witnessed.
    pub eps_max: QSqrt2,
    /// Ratio `r` of the geometric radius grid.
    #[serde(with = "rational_serde")]
    pub ratio: Rational,
    pub levels: u32,
    pub horizon: u64,
    pub samples: usize,
    pub seed: u64,
}

impl ScaleBudget {
    pub fn new(eps_max: QSqrt2, ratio: Rational, levels: u32, horizon: u64, samples: usize, seed: u64) -> Self {
        ScaleBudget { eps_max, ratio, levels, horizon, samples, seed }
    }

    /// `ε₀ = 1/2`, `r = 1/2` with the given level count, horizon and
    /// sample count, seed 0.
    pub fn halving(levels: u32, horizon: u64, samples: usize) -> Self {
        ScaleBudget::new(QSqrt2::ratio(1, 2), pow2(-1), levels, horizon, samples, 0)
    }

    pub fn with_eps_max(&self, eps_max: QSqrt2) -> Self {
        ScaleBudget { eps_max, ..self.clone() }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ScaleBudget { seed, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !self.eps_max.is_positive() {
            return bad(format!("eps_max must be positive, got {}", self.eps_max));
        }
        if self.ratio <= Rational::from_integer(0.into()) || self.ratio >= Rational::from_integer(1.into()) {
            return bad(format!("ratio must lie in (0, 1), got {}", self.ratio));
        }
        if self.levels == 0 || self.horizon == 0 || self.samples == 0 {
            return bad("levels, horizon and samples must be at least 1".into());
        }
        Ok(())
    }

    fn level(&self, k: u32) -> QSqrt2 {
        let r = QSqrt2::rational(self.ratio.clone());
        &self.eps_max * &r.pow(k)
    }

    /// `ε₀·r^k` for `k = 0 … K−1`.
    pub fn oe_levels(&self) -> Vec<QSqrt2> {
        (0..self.levels).map(|k| self.level(k)).collect()
    }

    /// `ε₀·r^k` for `k = 1 … K`, all strictly below `ε₀`.
    pub fn roe_levels(&self) -> Vec<QSqrt2> {
        (1..=self.levels).map(|k| self.level(k)).collect()
    }

    /// Seed for the samples drawn at level index `k`.
    pub fn level_seed(&self, k: usize) -> u64 {
        mix(self.seed, k as u64)
    }
}

pub(crate) fn mix(seed: u64, k: u64) -> u64 {
    let mut z = seed ^ k.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A point `y` of the ball `S_level(x)` whose orbit leaves the
/// `threshold`-tube around the orbit of `x` at time `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationWitness {
    pub x: Point,
    pub level: Scalar,
    pub y: Point,
    pub n: u64,
    /// Certified lower bound on `ρ(O_n x, O_n y)`.
    pub separation_lb: Scalar,
    pub threshold: Scalar,
    /// Working precision, in bits, of the evaluation that found it.
    pub precision: u32,
}

/// What a uniform expansion bound `L*` is compared against.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scope", rename_all = "kebab-case")]
pub enum BoundScope {
    /// `L*` is finite, so every threshold `d` fails at radii below `d/L*`.
    AnyThreshold,
    /// `L*·level < threshold`: the whole ball stays in the tube.
    Level { level: Scalar, threshold: Scalar },
    /// `L* ≤ 1`: distances never grow, so no level is ever exceeded.
    Contraction,
    /// `L*·ρ(p, q) ≤ threshold` for the listed pair `[p, q]`, so the pair
    /// (or any pair inside it, for an interval) never separates.
    Diameter { points: Vec<Point>, threshold: Scalar },
}

/// Evidence that no witness exists at any scale.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RefutationCertificate {
    /// The punctured ball `S_level(x) ∩ A ∖ {x}` is empty.
    EmptyBall { level: Scalar },
    UniformBound {
        l_star: QSqrt2,
        #[serde(flatten)]
        scope: BoundScope,
    },
    /// `O_{n0} x = O_{n0} y` exactly, and the pair stays within
    /// `threshold` for `1 ≤ n < n0`.
    CollapsedOrbit { x: Point, y: Point, n0: u64, threshold: Scalar },
}

impl RefutationCertificate {
    pub fn kind_name(&self) -> &'static str {
        match self {
            RefutationCertificate::EmptyBall { .. } => "empty-ball",
            RefutationCertificate::UniformBound { .. } => "uniform-bound",
            RefutationCertificate::CollapsedOrbit { .. } => "collapsed-orbit",
        }
    }
}

/// The question a verdict answers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "query", rename_all = "kebab-case")]
pub enum Query {
    OePoint { x: Point, d: Scalar },
    OePointOfSet { x: Point, set: StructuredSet, d: Scalar },
    RoePoint { x: Point },
    RoePointOfSet { x: Point, set: StructuredSet },
    Expansive { points: Vec<Point>, d: Scalar, horizon: u64 },
    CwExpansive { set: StructuredSet, c: Scalar },
}

impl Query {
    pub fn name(&self) -> &'static str {
        match self {
            Query::OePoint { .. } => "oe-point",
            Query::OePointOfSet { .. } => "oe-point-of-set",
            Query::RoePoint { .. } => "roe-point",
            Query::RoePointOfSet { .. } => "roe-point-of-set",
            Query::Expansive { .. } => "expansive",
            Query::CwExpansive { .. } => "cw-expansive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum Status {
    Supported { witnesses: Vec<SeparationWitness> },
    Refuted { certificate: RefutationCertificate },
    Inconclusive { diagnostics: Vec<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatusKind {
    Supported,
    Refuted,
    Inconclusive,
}

impl std::fmt::Display for StatusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StatusKind::Supported => "supported",
            StatusKind::Refuted => "refuted",
            StatusKind::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub query: Query,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<ScaleBudget>,
    #[serde(flatten)]
    pub status: Status,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(query: Query, budget: Option<ScaleBudget>, status: Status) -> Self {
        Verdict { query, budget, status, notes: Vec::new() }
    }

    fn inconclusive(query: Query, budget: Option<ScaleBudget>, why: impl Into<String>) -> Self {
        Verdict::new(query, budget, Status::Inconclusive { diagnostics: vec![why.into()] })
    }

    pub fn kind(&self) -> StatusKind {
        match self.status {
            Status::Supported { .. } => StatusKind::Supported,
            Status::Refuted { .. } => StatusKind::Refuted,
            Status::Inconclusive { .. } => StatusKind::Inconclusive,
        }
    }

    pub fn is_supported(&self) -> bool {
        self.kind() == StatusKind::Supported
    }

    pub fn is_refuted(&self) -> bool {
        self.kind() == StatusKind::Refuted
    }

    pub fn witnesses(&self) -> &[SeparationWitness] {
        match &self.status {
            Status::Supported { witnesses } => witnesses,
            _ => &[],
        }
    }

    pub fn certificate(&self) -> Option<&RefutationCertificate> {
        match &self.status {
            Status::Refuted { certificate } => Some(certificate),
            _ => None,
        }
    }
}

/// Answers `query` at `budget`. Expansivity uses the query's own horizon.
pub fn evaluate(system: &OrbitSystem, space: &MetricSpace, query: &Query, budget: &ScaleBudget) -> Result<Verdict> {
    Ok(match query {
        Query::OePoint { x, d } => oe_point_verdict(system, space, x, d, budget),
        Query::OePointOfSet { x, set, d } => oe_point_of_set_verdict(system, space, x, set, d, budget),
        Query::RoePoint { x } => roe_point_verdict(system, space, x, budget),
        Query::RoePointOfSet { x, set } => roe_point_of_set_verdict(system, space, x, set, budget),
        Query::Expansive { points, d, horizon } => expansive_verdict(system, space, points, d, *horizon)?,
        Query::CwExpansive { set, c } => cw_expansive_verdict(system, space, set, c, budget)?,
    })
}

/// `L*` in the metric of `space`, when the system's expansion bounds cover
/// its whole carrier.
///
/// Line bounds carry over to the line itself. On a bounded transform of the
/// line only `L* ≤ 1` carries over, as the bound 1: an increasing `γ` turns
/// non-expansion into non-expansion.
pub(crate) fn effective_l_star(system: &OrbitSystem, space: &MetricSpace) -> Option<QSqrt2> {
    let bounds = match system {
        OrbitSystem::Restricted { inner, .. } => expansion_bounds(inner)?,
        other => expansion_bounds(other)?,
    };
    if bounds.domain != StructuredSet::FullLine {
        return None;
    }
    let l = bounds.uniform_upper?;
    match space {
        MetricSpace::RealLine => Some(l),
        MetricSpace::BoundedTransform { inner, .. }
            if **inner == MetricSpace::RealLine && l <= QSqrt2::one() =>
        {
            Some(QSqrt2::one())
        }
        _ => None,
    }
}

/// A certified lower bound of `d` that is an exact value.
pub(crate) fn lower_value(d: &Scalar) -> Scalar {
    match d {
        Scalar::Exact(_) => d.clone(),
        Scalar::Interval(e) => Scalar::rational(e.lo().clone()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_grids() {
        let b = ScaleBudget::halving(3, 10, 4);
        assert_eq!(b.oe_levels(), vec![QSqrt2::ratio(1, 2), QSqrt2::ratio(1, 4), QSqrt2::ratio(1, 8)]);
        assert_eq!(b.roe_levels(), vec![QSqrt2::ratio(1, 4), QSqrt2::ratio(1, 8), QSqrt2::ratio(1, 16)]);
        assert!(b.validate().is_ok());
        assert!(ScaleBudget { ratio: Rational::from_integer(1.into()), ..b.clone() }.validate().is_err());
        assert_ne!(b.level_seed(0), b.level_seed(1));
    }

    #[test]
    fn verdict_json_round_trip() {
        let v = Verdict::new(
            Query::RoePoint { x: Point::line(1) },
            Some(ScaleBudget::halving(2, 4, 3)),
            Status::Refuted {
                certificate: RefutationCertificate::UniformBound {
                    l_star: QSqrt2::one(),
                    scope: BoundScope::Contraction,
                },
            },
        );
        let s = serde_json::to_string(&v).unwrap();
        assert!(s.contains(r#""status":"refuted""#));
        let back: Verdict = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
