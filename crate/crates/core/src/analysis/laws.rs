//! Finite-scale checks of the structural laws relating OE and ROE points,
//! sets and systems.
//!
//! Each law is an implication between verdicts. A check evaluates both
//! sides on the instance's candidates and counts, per candidate:
//! vacuous (antecedent not supported), holding, violated (antecedent
//! supported, consequent refuted) or unresolved (consequent inconclusive).
//! A law holds at scale when nothing is violated.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    expansive_verdict, oe_point_of_set_verdict, oe_point_verdict, roe_point_of_set_verdict,
    roe_point_verdict, transport_conjugacy, verify_witness, ScaleBudget, StatusKind, Verdict,
};
use crate::error::{Error, Result};
use crate::scalar::{QSqrt2, Scalar};
use crate::space::{MetricSpace, Point, StructuredSet};
use crate::system::{conjugate, power, restrict, MapExpr, ModulusFn, OrbitSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawId {
    /// `∪ OE(A_i) ⊆ OE(∪ A_i)`.
    UnionMonotonicity,
    /// `OE(∩ A_i) ⊆ ∩ OE(A_i)`.
    Intersection,
    /// `OE(∪ A_i) = ∪ OE(A_i)` for a finite family.
    FiniteUnionEquality,
    /// Every member of some `A_i` that is OE for `A_i` is OE for `∪ A_i`.
    OeSetUnion,
    /// If every point of `A` is OE for `A`, every point of `cl A` is OE for `cl A`.
    Closure,
    /// Expansive ⇒ OE at every sample point; OE ⇒ ROE.
    ImplicationChain,
    /// Verdicts agree under `ρ` and under `γ∘ρ` with translated thresholds.
    MetricEquivalence,
    /// Verdicts of `F` and `F^m` agree.
    IteratePower,
    /// On an invariant carrier, supported verdicts survive restriction.
    Restriction,
    /// Witnesses of `F` transport to witnesses of `g∘F∘g⁻¹`.
    UniformConjugacy,
}

impl LawId {
    pub const ALL: [LawId; 10] = [
        LawId::UnionMonotonicity,
        LawId::Intersection,
        LawId::FiniteUnionEquality,
        LawId::OeSetUnion,
        LawId::Closure,
        LawId::ImplicationChain,
        LawId::MetricEquivalence,
        LawId::IteratePower,
        LawId::Restriction,
        LawId::UniformConjugacy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LawId::UnionMonotonicity => "union-monotonicity",
            LawId::Intersection => "intersection",
            LawId::FiniteUnionEquality => "finite-union-equality",
            LawId::OeSetUnion => "oe-set-union",
            LawId::Closure => "closure",
            LawId::ImplicationChain => "implication-chain",
            LawId::MetricEquivalence => "metric-equivalence",
            LawId::IteratePower => "iterate-power",
            LawId::Restriction => "restriction",
            LawId::UniformConjugacy => "uniform-conjugacy",
        }
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

/// The data a law is checked on. Each law reads the fields it needs.
#[derive(Clone, Debug)]
pub struct LawInstance {
    pub system: OrbitSystem,
    pub space: MetricSpace,
    pub candidates: Vec<Point>,
    pub d: Scalar,
    pub budget: ScaleBudget,
    /// Check relative (ROE) verdicts instead of OE verdicts.
    pub relative: bool,
    pub sets: Vec<StructuredSet>,
    pub alt_space: Option<MetricSpace>,
    pub power: Option<u32>,
    pub carrier: Option<StructuredSet>,
    /// `(g, g⁻¹, modulus)`.
    pub conjugacy: Option<(MapExpr, MapExpr, ModulusFn)>,
}

impl LawInstance {
    pub fn new(system: OrbitSystem, space: MetricSpace, candidates: Vec<Point>, d: Scalar, budget: ScaleBudget) -> Self {
        LawInstance {
            system,
            space,
            candidates,
            d,
            budget,
            relative: false,
            sets: Vec::new(),
            alt_space: None,
            power: None,
            carrier: None,
            conjugacy: None,
        }
    }

    pub fn relative(mut self) -> Self {
        self.relative = true;
        self
    }

    pub fn with_sets(mut self, sets: Vec<StructuredSet>) -> Self {
        self.sets = sets;
        self
    }

    pub fn with_alt_space(mut self, space: MetricSpace) -> Self {
        self.alt_space = Some(space);
        self
    }

    pub fn with_power(mut self, m: u32) -> Self {
        self.power = Some(m);
        self
    }

    pub fn with_carrier(mut self, carrier: StructuredSet) -> Self {
        self.carrier = Some(carrier);
        self
    }

    pub fn with_conjugacy(mut self, g: MapExpr, g_inv: MapExpr, modulus: ModulusFn) -> Self {
        self.conjugacy = Some((g, g_inv, modulus));
        self
    }

    fn verdict_in(
        &self,
        system: &OrbitSystem,
        space: &MetricSpace,
        x: &Point,
        set: Option<&StructuredSet>,
        d: &Scalar,
        budget: &ScaleBudget,
    ) -> Verdict {
        match (self.relative, set) {
            (false, None) => oe_point_verdict(system, space, x, d, budget),
            (false, Some(s)) => oe_point_of_set_verdict(system, space, x, s, d, budget),
            (true, None) => roe_point_verdict(system, space, x, budget),
            (true, Some(s)) => roe_point_of_set_verdict(system, space, x, s, budget),
        }
    }

    fn verdict(&self, x: &Point, set: Option<&StructuredSet>) -> Verdict {
        self.verdict_in(&self.system, &self.space, x, set, &self.d, &self.budget)
    }

    fn line_candidates(&self) -> Result<Vec<QSqrt2>> {
        self.candidates
            .iter()
            .map(|p| {
                p.exact_line()
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("candidate {p} is not an exact line point")))
            })
            .collect()
    }

    fn need_sets(&self, law: LawId, min: usize) -> Result<()> {
        if self.sets.len() < min {
            return Err(Error::InvalidArgument(format!("{law} needs at least {min} set(s)")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub holds_at_scale: bool,
    /// Candidates whose antecedent was supported.
    pub checked: usize,
    pub holding: usize,
    pub unresolved: usize,
    pub violations: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl LawReport {
    fn new(law: LawId) -> Self {
        LawReport { law: law.name().to_string(), ..Default::default() }
    }

    /// Records `antecedent ⇒ consequent` for one case.
    fn implication(&mut self, label: impl fmt::Display, antecedent: StatusKind, consequent: StatusKind) {
        if antecedent != StatusKind::Supported {
            return;
        }
        self.checked += 1;
        match consequent {
            StatusKind::Supported => self.holding += 1,
            StatusKind::Inconclusive => self.unresolved += 1,
            StatusKind::Refuted => self.violations.push(format!("{label}: supported then refuted")),
        }
    }

    /// Records that two verdicts should agree.
    fn agreement(&mut self, label: impl fmt::Display, a: StatusKind, b: StatusKind) {
        self.checked += 1;
        if a == StatusKind::Inconclusive || b == StatusKind::Inconclusive {
            self.unresolved += 1;
        } else if a == b {
            self.holding += 1;
        } else {
            self.violations.push(format!("{label}: {a} versus {b}"));
        }
    }

    fn finish(mut self) -> Self {
        self.holds_at_scale = self.violations.is_empty();
        self
    }
}

/// Any of `kinds` supported; else refuted if all are; else inconclusive.
fn disjunction(kinds: &[StatusKind]) -> StatusKind {
    if kinds.contains(&StatusKind::Supported) {
        StatusKind::Supported
    } else if kinds.iter().all(|k| *k == StatusKind::Refuted) {
        StatusKind::Refuted
    } else {
        StatusKind::Inconclusive
    }
}

/// All of `kinds` supported; refuted if any is; else inconclusive.
fn conjunction(kinds: &[StatusKind]) -> StatusKind {
    if kinds.contains(&StatusKind::Refuted) {
        StatusKind::Refuted
    } else if kinds.iter().all(|k| *k == StatusKind::Supported) {
        StatusKind::Supported
    } else {
        StatusKind::Inconclusive
    }
}

/// Checks the law named `law_id` on `instance`.
pub fn law_check(law_id: &str, instance: &LawInstance) -> Result<LawReport> {
    let law: LawId = law_id.parse()?;
    instance.budget.validate()?;
    let mut report = LawReport::new(law);
    match law {
        LawId::UnionMonotonicity | LawId::FiniteUnionEquality => {
            instance.need_sets(law, 1)?;
            let union = StructuredSet::union(instance.sets.clone());
            let rows: Vec<(QSqrt2, Vec<StatusKind>, StatusKind)> = instance
                .line_candidates()?
                .into_par_iter()
                .map(|x| {
                    let p = Point::line(x.clone());
                    let parts = instance.sets.iter().map(|s| instance.verdict(&p, Some(s)).kind()).collect();
                    let whole = instance.verdict(&p, Some(&union)).kind();
                    (x, parts, whole)
                })
                .collect();
            for (x, parts, whole) in rows {
                report.implication(format!("{x} into the union"), disjunction(&parts), whole);
                if law == LawId::FiniteUnionEquality {
                    report.implication(format!("{x} out of the union"), whole, disjunction(&parts));
                }
            }
            if law == LawId::FiniteUnionEquality {
                report.notes.push(format!(
                    "checked for a family of {} sets; the reverse inclusion needs finiteness",
                    instance.sets.len()
                ));
            }
        }
        LawId::Intersection => {
            instance.need_sets(law, 1)?;
            let meet = StructuredSet::intersection(instance.sets.clone());
            let rows: Vec<(QSqrt2, StatusKind, Vec<StatusKind>)> = instance
                .line_candidates()?
                .into_par_iter()
                .map(|x| {
                    let p = Point::line(x.clone());
                    let whole = instance.verdict(&p, Some(&meet)).kind();
                    let parts = instance.sets.iter().map(|s| instance.verdict(&p, Some(s)).kind()).collect();
                    (x, whole, parts)
                })
                .collect();
            for (x, whole, parts) in rows {
                report.implication(x, whole, conjunction(&parts));
            }
        }
        LawId::OeSetUnion => {
            instance.need_sets(law, 1)?;
            let union = StructuredSet::union(instance.sets.clone());
            let xs = instance.line_candidates()?;
            for (i, s) in instance.sets.iter().enumerate() {
                let rows: Vec<(QSqrt2, StatusKind, StatusKind)> = xs
                    .par_iter()
                    .filter(|x| s.contains(x))
                    .map(|x| {
                        let p = Point::line(x.clone());
                        (x.clone(), instance.verdict(&p, Some(s)).kind(), instance.verdict(&p, Some(&union)).kind())
                    })
                    .collect();
                for (x, own, whole) in rows {
                    report.implication(format!("{x} of set {i}"), own, whole);
                }
            }
        }
        LawId::Closure => {
            instance.need_sets(law, 1)?;
            let a = &instance.sets[0];
            let closure = a.closure();
            let xs = instance.line_candidates()?;
            let own: Vec<StatusKind> = xs
                .par_iter()
                .filter(|x| a.contains(x))
                .map(|x| instance.verdict(&Point::line(x.clone()), Some(a)).kind())
                .collect();
            let antecedent = conjunction(&own);
            if own.is_empty() || antecedent != StatusKind::Supported {
                report.notes.push("the set is not an OE set at this scale; the law holds vacuously".into());
            } else {
                let rows: Vec<(QSqrt2, StatusKind)> = xs
                    .par_iter()
                    .filter(|x| closure.contains(x))
                    .map(|x| (x.clone(), instance.verdict(&Point::line(x.clone()), Some(&closure)).kind()))
                    .collect();
                for (x, k) in rows {
                    report.implication(format!("{x} in the closure"), antecedent, k);
                }
            }
        }
        LawId::ImplicationChain => implication_chain(instance, &mut report)?,
        LawId::MetricEquivalence => {
            let alt = instance
                .alt_space
                .as_ref()
                .ok_or_else(|| Error::InvalidArgument("metric-equivalence needs an alternative space".into()))?;
            let (d_alt, budget_alt) = match alt {
                MetricSpace::BoundedTransform { gamma, .. } => {
                    let eps = gamma.apply(&Scalar::Exact(instance.budget.eps_max.clone()));
                    let eps = eps.as_exact().cloned().ok_or_else(|| {
                        Error::InvalidArgument("translated radius is not exact".into())
                    })?;
                    (gamma.apply(&instance.d), instance.budget.with_eps_max(eps))
                }
                _ => (instance.d.clone(), instance.budget.clone()),
            };
            let rows: Vec<(StatusKind, StatusKind)> = instance
                .candidates
                .par_iter()
                .map(|x| {
                    let a = instance.verdict(x, None).kind();
                    let b = instance.verdict_in(&instance.system, alt, x, None, &d_alt, &budget_alt).kind();
                    (a, b)
                })
                .collect();
            for (x, (a, b)) in instance.candidates.iter().zip(rows) {
                report.agreement(x, a, b);
            }
        }
        LawId::IteratePower => {
            let m = instance.power.unwrap_or(2);
            let tower = power(instance.system.clone(), m)?;
            let rows: Vec<(StatusKind, StatusKind)> = instance
                .candidates
                .par_iter()
                .map(|x| {
                    let a = instance.verdict(x, None).kind();
                    let b = instance
                        .verdict_in(&tower, &instance.space, x, None, &instance.d, &instance.budget)
                        .kind();
                    (a, b)
                })
                .collect();
            for (x, (a, b)) in instance.candidates.iter().zip(rows) {
                report.agreement(x, a, b);
            }
        }
        LawId::Restriction => {
            let carrier = instance
                .carrier
                .clone()
                .ok_or_else(|| Error::InvalidArgument("restriction needs a carrier".into()))?;
            match restrict(instance.system.clone(), carrier.clone(), instance.budget.samples) {
                Err(e @ Error::NotInvariant { .. }) => {
                    report.notes.push(format!("the carrier is not invariant ({e}); the law holds vacuously"));
                }
                Err(e) => return Err(e),
                Ok(restricted) => {
                    let rows: Vec<(Point, StatusKind, StatusKind)> = instance
                        .candidates
                        .par_iter()
                        .filter(|x| x.exact_line().is_some_and(|q| carrier.contains(q)))
                        .map(|x| {
                            let a = instance.verdict(x, None).kind();
                            let b = instance
                                .verdict_in(&restricted, &instance.space, x, None, &instance.d, &instance.budget)
                                .kind();
                            (x.clone(), a, b)
                        })
                        .collect();
                    for (x, a, b) in rows {
                        report.implication(x, a, b);
                    }
                }
            }
        }
        LawId::UniformConjugacy => {
            let (g, g_inv, modulus) = instance
                .conjugacy
                .clone()
                .ok_or_else(|| Error::InvalidArgument("uniform-conjugacy needs a conjugacy".into()))?;
            let conj = conjugate(instance.system.clone(), g, g_inv, modulus)?;
            let rows: Vec<(Point, Verdict)> = instance
                .candidates
                .par_iter()
                .map(|x| (x.clone(), instance.verdict(x, None)))
                .collect();
            for (x, v) in rows {
                if !v.is_supported() {
                    continue;
                }
                report.checked += 1;
                let moved = v.witnesses().iter().try_for_each(|w| {
                    let t = transport_conjugacy(w, &conj, &instance.space)?;
                    verify_witness(&conj, &instance.space, &t)
                });
                match moved {
                    Ok(()) => report.holding += 1,
                    Err(e) => report.violations.push(format!("{x}: {e}")),
                }
            }
        }
    }
    Ok(report.finish())
}

fn implication_chain(instance: &LawInstance, report: &mut LawReport) -> Result<()> {
    let pts = &instance.candidates;
    let b = &instance.budget;
    let mut min_gap: Option<Scalar> = None;
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let gap = instance.space.distance(&pts[i], &pts[j])?;
            min_gap = Some(match min_gap {
                Some(m) => m.min(&gap),
                None => gap,
            });
        }
    }
    // OE radii below the sample's spacing, ROE radii below the threshold
    let cap = |bound: &Scalar| {
        let q = QSqrt2::rational(bound.lower_bound());
        if q.is_positive() && q < b.eps_max {
            b.with_eps_max(q)
        } else {
            b.clone()
        }
    };
    let oe_budget = min_gap.as_ref().map_or_else(|| b.clone(), cap);
    let roe_budget = cap(&instance.d).with_eps_max(cap(&instance.d).eps_max.min(oe_budget.eps_max.clone()));

    let expansive = if pts.len() >= 2 {
        expansive_verdict(&instance.system, &instance.space, pts, &instance.d, b.horizon)?.kind()
    } else {
        StatusKind::Inconclusive
    };
    let rows: Vec<(StatusKind, StatusKind)> = pts
        .par_iter()
        .map(|x| {
            let oe = oe_point_verdict(&instance.system, &instance.space, x, &instance.d, &oe_budget).kind();
            let roe = roe_point_verdict(&instance.system, &instance.space, x, &roe_budget).kind();
            (oe, roe)
        })
        .collect();
    for (x, (oe, roe)) in pts.iter().zip(rows) {
        report.implication(format!("{x} expansive to OE"), expansive, oe);
        report.implication(format!("{x} OE to ROE"), oe, roe);
    }
    report.notes.push(format!("expansive verdict on the sample: {expansive}"));
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_names_round_trip() {
        for law in LawId::ALL {
            assert_eq!(law.name().parse::<LawId>().unwrap(), law);
        }
        assert!(matches!("no-such-law".parse::<LawId>(), Err(Error::UnknownLaw(_))));
    }

    #[test]
    fn connectives() {
        use StatusKind::*;
        assert_eq!(disjunction(&[Refuted, Inconclusive, Supported]), Supported);
        assert_eq!(disjunction(&[Refuted, Refuted]), Refuted);
        assert_eq!(conjunction(&[Supported, Inconclusive]), Inconclusive);
        assert_eq!(conjunction(&[Supported, Refuted]), Refuted);
    }
}
