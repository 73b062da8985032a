use serde::{Deserialize, Serialize};

use super::{DirectRule, MapExpr, OrbitSystem};
use crate::scalar::{exact_root, root_enclosure, QSqrt2, Rational, Scalar};
use crate::space::StructuredSet;

/// A sequence `n ↦ r_n` of expansion factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Rate {
    /// `r_n = ratio^n`.
    Geometric { ratio: QSqrt2 },
    /// `r_0 = 1`, `r_n = base^(1/n)`.
    Root {
        #[serde(with = "crate::scalar::rational_serde")]
        base: Rational,
    },
}

impl Rate {
    pub fn at(&self, n: u64, precision: u32) -> Scalar {
        match self {
            Rate::Geometric { ratio } => Scalar::Exact(ratio.pow(n as u32)),
            Rate::Root { .. } if n == 0 => Scalar::one(),
            Rate::Root { base } => match exact_root(base, n as u32) {
                Some(r) => Scalar::rational(r),
                None => Scalar::Interval(root_enclosure(base, n as u32, precision)),
            },
        }
    }

    /// `sup_{n ≥ 1} r_n`, when finite.
    pub fn sup(&self) -> Option<QSqrt2> {
        let one = QSqrt2::one();
        match self {
            Rate::Geometric { ratio } if ratio <= &one => Some(ratio.clone()),
            Rate::Geometric { .. } => None,
            Rate::Root { base } => Some(QSqrt2::rational(base.clone()).max(one)),
        }
    }
}

/// Line-metric expansion bounds
/// `l_n·|x − y| ≤ |O_n x − O_n y| ≤ L_n·|x − y|` on `domain`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpansionBounds {
    pub lower: Rate,
    pub upper: Rate,
    /// `L* = sup_{n ≥ 1} L_n`.
    pub uniform_upper: Option<QSqrt2>,
    pub domain: StructuredSet,
}

impl ExpansionBounds {
    fn exact(rate: Rate, domain: StructuredSet) -> Self {
        ExpansionBounds { uniform_upper: rate.sup(), lower: rate.clone(), upper: rate, domain }
    }
}

/// Bounds for the forms whose expansion is known in closed form: affine
/// maps, their powers and restrictions, and root-scaling direct rules.
pub fn expansion_bounds(system: &OrbitSystem) -> Option<ExpansionBounds> {
    match system {
        OrbitSystem::Iterated { map: MapExpr::Affine { lambda: Scalar::Exact(l), .. } } => {
            Some(ExpansionBounds::exact(Rate::Geometric { ratio: l.abs() }, StructuredSet::FullLine))
        }
        OrbitSystem::Power { inner, m } => {
            let b = expansion_bounds(inner)?;
            match b.upper {
                Rate::Geometric { ratio } => {
                    Some(ExpansionBounds::exact(Rate::Geometric { ratio: ratio.pow(*m) }, b.domain))
                }
                Rate::Root { .. } => None,
            }
        }
        OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base } } => {
            Some(ExpansionBounds::exact(Rate::Root { base: base.clone() }, StructuredSet::FullLine))
        }
        OrbitSystem::Restricted { inner, carrier } => {
            let b = expansion_bounds(inner)?;
            Some(ExpansionBounds { domain: b.domain.intersect(carrier), ..b })
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_forms() {
        let id = OrbitSystem::iterated(MapExpr::identity());
        assert_eq!(expansion_bounds(&id).unwrap().uniform_upper, Some(QSqrt2::one()));
        let half = OrbitSystem::iterated(MapExpr::linear(Scalar::ratio(1, 2)));
        assert_eq!(expansion_bounds(&half).unwrap().uniform_upper, Some(QSqrt2::ratio(1, 2)));
        let root = OrbitSystem::DirectIterate { rule: DirectRule::RootScale { base: Rational::from_integer(2.into()) } };
        let b = expansion_bounds(&root).unwrap();
        assert_eq!(b.uniform_upper, Some(QSqrt2::integer(2)));
        assert!(b.upper.at(2, 40).contains(&QSqrt2::sqrt2()));
        let dbl = OrbitSystem::iterated(MapExpr::linear(2));
        let b = expansion_bounds(&dbl).unwrap();
        assert_eq!(b.uniform_upper, None);
        assert_eq!(b.upper.at(5, 40), Scalar::integer(32));
        let branch = OrbitSystem::iterated(MapExpr::branch(MapExpr::constant(2), MapExpr::linear(2)));
        assert!(expansion_bounds(&branch).is_none());
    }
}
