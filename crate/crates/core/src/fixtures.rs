//! Small named algebras used by tests, benches and the CLI.

use crate::algebra::{AlgebraSpec, RotaBaxterSpec};
use crate::cochain::Element;
use crate::deformation::TruncatedDeformation;
use crate::linalg::QMatrix;
use crate::rational::Rational;
use crate::shapes::Family;

/// `e ≺ e = e`, `e ≻ e = 0`.
pub fn dendriform_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Dendriform, &[1, 0]).expect("two shapes")
}

/// `e² = e`.
pub fn idempotent_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Associative, &[1]).expect("one shape")
}

/// Both products equal to `e² = e`.
pub fn dialgebra_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Dialgebra, &[1, 1]).expect("two shapes")
}

pub fn trialgebra_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Trialgebra, &[1, 1, 1]).expect("three shapes")
}

/// From the Rota-Baxter operator `R = id` of weight `−1` on `e² = e`.
pub fn tridendriform_line() -> AlgebraSpec {
    let rb = RotaBaxterSpec::new(idempotent_line(), QMatrix::identity(1), Rational::from_int(-1))
        .expect("valid operator");
    rb.to_tridendriform().expect("Rota-Baxter splitting")
}

pub fn quadri_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Quadri, &[1, -1, 0, 1]).expect("four shapes")
}

pub fn ennea_line() -> AlgebraSpec {
    AlgebraSpec::scalar(Family::Ennea, &[-1, 1, 1, 1, -1, -1, 1, -1, -1]).expect("nine shapes")
}

/// `ℚ[x]/(x³)` on the basis `1, x, x²`.
pub fn truncated_polynomial() -> AlgebraSpec {
    let mut pi = Element::zero(Family::Associative, 2, 3, 3);
    for i in 0..3 {
        for j in 0..3 - i {
            pi.set(0, &[i, j], i + j, Rational::one());
        }
    }
    AlgebraSpec::new(pi).expect("arity 2")
}

/// `x^i ↦ i x^i` on `ℚ[x]/(x³)`.
pub fn euler_derivation() -> Element {
    let m = QMatrix::from_i64(&[&[0, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
    Element::from_matrix(Family::Associative, &m)
}

/// `x ↦ λx`, i.e. `x^i ↦ λ^i x^i`.
pub fn grading_map(lambda: i64) -> QMatrix {
    QMatrix::from_i64(&[&[1, 0, 0], &[0, lambda, 0], &[0, 0, lambda * lambda]])
}

/// Zero dendriform product on a line with `π_1 = (1, 1)`, which is not a
/// multiplication; the order-1 obstruction cannot be killed.
pub fn obstructed_deformation() -> TruncatedDeformation {
    let base = AlgebraSpec::zero(Family::Dendriform, 1);
    let p1 = AlgebraSpec::scalar(Family::Dendriform, &[1, 1]).expect("two shapes");
    TruncatedDeformation::new(base, vec![p1.pi().clone()]).expect("same space")
}

/// One validated line algebra per family, plus `ℚ[x]/(x³)`.
pub fn all() -> Vec<(&'static str, AlgebraSpec)> {
    vec![
        ("idempotent", idempotent_line()),
        ("truncated-polynomial", truncated_polynomial()),
        ("dendriform", dendriform_line()),
        ("tridendriform", tridendriform_line()),
        ("dialgebra", dialgebra_line()),
        ("trialgebra", trialgebra_line()),
        ("quadri", quadri_line()),
        ("ennea", ennea_line()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::Extension;

    #[test]
    fn fixtures_are_multiplications() {
        for (name, a) in all() {
            assert!(a.validate().unwrap().holds, "{name}");
        }
    }

    #[test]
    fn euler_is_a_derivation_and_grading_is_multiplicative() {
        let a = truncated_polynomial();
        let op = a.operad();
        assert!(op.differential(a.pi(), &euler_derivation()).unwrap().is_zero());
        let g = Element::from_matrix(Family::Associative, &grading_map(2));
        assert!(crate::algebra::is_endomorphism(&a, &g).unwrap());
    }

    #[test]
    fn obstructed_fixture_is_obstructed() {
        let d = obstructed_deformation();
        assert!(d.is_deformation(1).unwrap().holds);
        assert!(matches!(d.extend().unwrap(), Extension::Obstructed(_)));
    }
}
