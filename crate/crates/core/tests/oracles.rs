mod common;

use common::{hochschild_dims, identities, line_multiplications, q, unit};
use loday_core::cohomology::cohomology_dims;
use loday_core::fixtures;
use loday_core::shapes::shape_set;
use loday_core::{AlgebraSpec, Element, Family};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn catalan(n: usize) -> usize {
    (0..n).fold(1usize, |c, k| c * 2 * (2 * k + 1) / (k + 2))
}

/// Little Schröder numbers `s_n` via `(n+1) s_n = 3(2n−1) s_{n−1} − (n−2) s_{n−2}`.
fn schroeder(n: usize) -> usize {
    let mut s = vec![1i64, 1];
    for k in 2..=n {
        let k = k as i64;
        let v = (3 * (2 * k - 1) * s[k as usize - 1] - (k - 2) * s[k as usize - 2]) / (k + 1);
        s.push(v);
    }
    s[n] as usize
}

#[test]
fn shape_counts_match_closed_forms() {
    for n in 1..=5 {
        assert_eq!(shape_set(Family::Dialgebra, n).len(), catalan(n), "Y_{n}");
        assert_eq!(shape_set(Family::Trialgebra, n).len(), schroeder(n), "T_{n}");
        assert_eq!(shape_set(Family::Tridendriform, n).len(), (1 << n) - 1);
        assert_eq!(shape_set(Family::Quadri, n).len(), n * n);
        assert_eq!(shape_set(Family::Dendriform, n).len(), n);
    }
    for n in 1..=4 {
        assert_eq!(shape_set(Family::Ennea, n).len(), ((1 << n) - 1) * ((1 << n) - 1));
    }
}

fn upper_triangular() -> AlgebraSpec {
    // basis E11, E12, E22
    let mut pi = Element::zero(Family::Associative, 2, 3, 3);
    pi.set(0, &[0, 0], 0, q(1));
    pi.set(0, &[0, 1], 1, q(1));
    pi.set(0, &[1, 2], 1, q(1));
    pi.set(0, &[2, 2], 2, q(1));
    AlgebraSpec::new(pi).unwrap()
}

#[test]
fn hochschild_ranks_agree_with_brute_force() {
    let cases = [
        (fixtures::idempotent_line(), 4),
        (fixtures::truncated_polynomial(), 3),
        (upper_triangular(), 2),
    ];
    for (a, top) in cases {
        assert!(a.validate().unwrap().holds);
        for n in 1..=top {
            let d = cohomology_dims(&a.adjoint(), n).unwrap();
            let (z, b, h) = hochschild_dims(&a, n);
            assert_eq!((d.cocycles, d.coboundaries, d.cohomology), (z, b, h), "degree {n}");
        }
    }
    // k[x]/(x^3): HH^1 = derivations x ↦ ax + bx², HH^2 has dimension 2
    assert_eq!(hochschild_dims(&fixtures::truncated_polynomial(), 1).2, 2);
    assert_eq!(hochschild_dims(&fixtures::truncated_polynomial(), 2).2, 2);
}

#[test]
fn identities_track_components_of_the_square() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for fam in [Family::Dendriform, Family::Tridendriform, Family::Trialgebra] {
        let ids = identities(fam);
        let set3 = shape_set(fam, 3);
        assert_eq!(ids.len(), set3.len());
        let op = loday_core::Operad::new(fam, 2);
        for _ in 0..5 {
            let a = AlgebraSpec::new(op.random(&mut rng, 2)).unwrap();
            let sq = op.square(a.pi()).unwrap();
            for ident in &ids {
                let s = set3.index_of_label(ident.shape).unwrap();
                for t in 0..8 {
                    let (x, y, z) = (t >> 2 & 1, t >> 1 & 1, t & 1);
                    let lhs = ident.defect(&a, &unit(2, x), &unit(2, y), &unit(2, z));
                    let rhs = common::element_value(&sq, s, &[x, y, z]);
                    assert_eq!(lhs, rhs, "{fam} {}", ident.text);
                }
            }
        }
    }
}

#[test]
fn every_family_has_line_multiplications() {
    for fam in Family::ALL {
        let found = line_multiplications(fam);
        assert!(found.len() >= 2, "{fam}");
        let fixture = match fam {
            Family::Quadri => Some(vec![1, -1, 0, 1]),
            Family::Ennea => Some(vec![-1, 1, 1, 1, -1, -1, 1, -1, -1]),
            Family::Tridendriform => Some(vec![-1, 1, 1]),
            _ => None,
        };
        if let Some(v) = fixture {
            assert!(found.contains(&v), "{fam}");
        }
    }
    assert_eq!(
        fixtures::tridendriform_line(),
        AlgebraSpec::scalar(Family::Tridendriform, &[-1, 1, 1]).unwrap()
    );
}
