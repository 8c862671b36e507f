mod common;

use std::collections::BTreeSet;

use common::*;
use homdyn::bfgroup::{bf_group, enumerate_fixed, phi_apply, BfError, TorusPoint};
use homdyn::intlinalg::IntMatrix;
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use proptest::prelude::*;

/// Fixed points of `A^k` on the torus by scanning the grid `(1/N) Z^2`, `N = |det(A^k - I)|`.
fn fixed_brute_force(a: &IntMatrix, k: u32) -> BTreeSet<TorusPoint> {
    let m = a.pow_minus_identity(k);
    let e: Vec<i64> = m.entries().iter().map(|x| x.to_i64().unwrap()).collect();
    let n = m.det().abs().to_i64().unwrap();
    let mut out = BTreeSet::new();
    for p in 0..n {
        for q in 0..n {
            if (e[0] * p + e[1] * q) % n == 0 && (e[2] * p + e[3] * q) % n == 0 {
                out.insert(TorusPoint::new(rv(&[(p, n), (q, n)])));
            }
        }
    }
    out
}

#[test]
fn bf_tables() {
    for k in 1..=8u32 {
        let g = bf_group(&a2(), k).unwrap();
        let expected = vec![BigInt::from(2).pow(k) - 1, BigInt::from(4).pow(k) - 1];
        let got: Vec<BigInt> = g.divisors();
        assert_eq!(got, expected, "k = {k}");
        let order: BigInt = BigInt::from(8).pow(k) - (BigInt::from(2).pow(k) + BigInt::from(4).pow(k)) + 1;
        assert_eq!(g.order(), &order);
    }
    let expected: [&[i64]; 4] = [&[5], &[4, 4], &[3, 15], &[11, 11]];
    for (k, exp) in (2..=5u32).zip(expected) {
        assert_eq!(bf_group(&a4(), k).unwrap().invariant_factors(), iv(exp), "k = {k}");
    }
    assert_eq!(bf_group(&a2(), 2).unwrap().to_string(), "Z_3 + Z_15");
}

#[test]
fn errors() {
    assert_eq!(bf_group(&IntMatrix::identity(2), 1).unwrap_err(), BfError::RootOfUnitySpectrum);
    assert_eq!(bf_group(&a2(), 0).unwrap_err(), BfError::ZeroLevel);
    let g = bf_group(&a2(), 1).unwrap();
    assert!(matches!(g.reduce_i64(&[1]), Err(BfError::DimensionMismatch { .. })));
    assert!(matches!(g.identity().upsilon(3).and_then(|e| e.upsilon(4)), Err(BfError::NotDivisible { .. })));
}

#[test]
fn psi_is_injective_on_bf2() {
    let g = bf_group(&a2(), 2).unwrap();
    let images: BTreeSet<TorusPoint> = g.elements().map(|e| e.psi()).collect();
    assert_eq!(g.elements().count(), 45);
    assert_eq!(images.len(), 45);
    assert_eq!(images, fixed_brute_force(&a2(), 2));
}

#[test]
fn psi_image_is_fixed_set() {
    for (a, k) in [(a2(), 1), (a2(), 2), (a2(), 3), (a4(), 2), (a4(), 3)] {
        let g = bf_group(&a, k).unwrap();
        let images: BTreeSet<TorusPoint> = g.elements().map(|e| e.psi()).collect();
        let fixed = enumerate_fixed(&a, k).unwrap();
        assert_eq!(images.len() as u64, g.order().to_u64().unwrap());
        assert_eq!(fixed.iter().cloned().collect::<BTreeSet<_>>(), images);
        assert_eq!(images, fixed_brute_force(&a, k));
    }
}

#[test]
fn fixed_set_is_a_subgroup() {
    let fixed = enumerate_fixed(&a2(), 2).unwrap();
    let set: BTreeSet<_> = fixed.iter().cloned().collect();
    for x in &fixed {
        assert!(set.contains(&x.neg()));
        assert_eq!(phi_apply(&a2().pow(2), x), *x);
        for y in &fixed {
            assert!(set.contains(&x.add(y)));
        }
    }
    assert!(fixed.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn upsilon_functoriality_and_injectivity() {
    let g1 = bf_group(&a2(), 1).unwrap();
    let g2 = bf_group(&a2(), 2).unwrap();
    let mut seen2 = BTreeSet::new();
    for e in g1.elements() {
        let e2 = e.upsilon(2).unwrap();
        let e4 = e.upsilon(4).unwrap();
        assert_eq!(e2.upsilon(4).unwrap(), e4);
        assert_eq!(e.psi(), e2.psi());
        assert_eq!(e.psi(), e4.psi());
        seen2.insert(e2.canonical().to_vec());
    }
    assert_eq!(seen2.len(), 3);
    let mut seen4 = BTreeSet::new();
    for e in g2.elements() {
        let e4 = e.upsilon(4).unwrap();
        assert_eq!(e.psi(), e4.psi());
        seen4.insert(e4.canonical().to_vec());
    }
    assert_eq!(seen4.len(), 45);
}

#[test]
fn displacement_classes_of_phi2_level_one() {
    let g = bf_group(&a2(), 1).unwrap();
    let x10 = g.reduce_i64(&[1, 0]).unwrap();
    assert_eq!(x10, g.reduce_i64(&[0, 1]).unwrap());
    assert_eq!(g.reduce_i64(&[2, 0]).unwrap(), g.reduce_i64(&[0, 2]).unwrap());
    assert_ne!(x10, g.identity());
    assert_eq!(x10.psi(), TorusPoint::new(rv(&[(2, 3), (2, 3)])));
    assert_eq!(g.reduce_i64(&[2, 0]).unwrap().psi(), TorusPoint::new(rv(&[(1, 3), (1, 3)])));
}

fn vec2() -> impl Strategy<Value = Vec<i64>> {
    proptest::collection::vec(-1000i64..=1000, 2)
}

proptest! {
    #[test]
    fn reduce_is_a_homomorphism(n in vec2(), m in vec2(), k in 1u32..=4) {
        let g = bf_group(&a2(), k).unwrap();
        let sum: Vec<i64> = n.iter().zip(&m).map(|(x, y)| x + y).collect();
        let lhs = g.reduce_i64(&sum).unwrap();
        let rhs = g.reduce_i64(&n).unwrap().add(&g.reduce_i64(&m).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduce_kills_the_image(n in vec2(), k in 1u32..=4) {
        let g = bf_group(&a2(), k).unwrap();
        let img = a2().pow_minus_identity(k).mul_vec(&iv(&n));
        prop_assert!(g.reduce(&img).unwrap().is_identity());
    }

    #[test]
    fn canonical_lift_roundtrip(n in vec2(), k in 1u32..=4) {
        let g = bf_group(&a2(), k).unwrap();
        let e = g.reduce_i64(&n).unwrap();
        prop_assert_eq!(&g.reduce(&e.lift()).unwrap(), &e);
        for (c, d) in e.canonical().iter().zip(g.divisors()) {
            prop_assert!(!c.is_negative() && (d.is_one() || *c < d));
        }
        // psi(n) = (A^k - I)^{-1} n mod 1, independently of the representative
        let inv = homdyn::intlinalg::rat_inverse(&a2().pow_minus_identity(k)).unwrap();
        prop_assert_eq!(e.psi(), TorusPoint::new(inv.mul_int_vec(&iv(&n))));
    }
}
