use serde::{Deserialize, Serialize};

use crate::scalar::{QSqrt2, Scalar};

/// A function `m` with `ρ₁(a, b) > δ ⇒ ρ₂(g(a), g(b)) > m(δ)` for a
/// conjugating map `g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModulusFn {
    /// For isometries.
    Identity,
    /// `δ ↦ k·δ`, for `x ↦ kx + c`.
    Linear { k: QSqrt2 },
    /// `δ ↦ δ³/4`, for `x ↦ x³`: `|a³ − b³| = |a − b|·(a² + ab + b²)` and
    /// `a² + ab + b² − (a − b)²/4 = 3(a + b)²/4 ≥ 0`.
    CubicQuarter,
}

impl ModulusFn {
    pub fn apply(&self, delta: &Scalar) -> Scalar {
        match self {
            ModulusFn::Identity => delta.clone(),
            ModulusFn::Linear { k } => Scalar::Exact(k.clone()).mul(delta),
            ModulusFn::CubicQuarter => delta.pow(3).mul(&Scalar::ratio(1, 4)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Truth;

    #[test]
    fn cubic_quarter_guarantee_on_samples() {
        let m = ModulusFn::CubicQuarter;
        for (a, b) in [(-3, 2), (1, 5), (-7, -1), (0, 4), (2, -2)] {
            let (a, b) = (Scalar::ratio(a, 3), Scalar::ratio(b, 3));
            let delta = a.sub(&b).abs();
            let image = a.pow(3).sub(&b.pow(3)).abs();
            assert_ne!(m.apply(&delta).cmp_gt(&image), Truth::True);
        }
    }

    #[test]
    fn linear_scales() {
        let m = ModulusFn::Linear { k: QSqrt2::integer(2) };
        assert_eq!(m.apply(&Scalar::ratio(3, 4)), Scalar::ratio(3, 2));
    }
}
