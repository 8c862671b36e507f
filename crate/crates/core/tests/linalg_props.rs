mod common;

use common::*;
use homdyn::intlinalg::{
    c_matrix, char_poly, has_root_of_unity, is_expanding, rat_inverse, snf, spectral, IntMatrix,
    NormRegistry,
};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix_strategy() -> impl Strategy<Value = IntMatrix> {
    (2usize..=3).prop_flat_map(|n| {
        proptest::collection::vec(-9i64..=9, n * n).prop_map(move |e| {
            IntMatrix::new(n, e.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

fn gcd_all(xs: impl IntoIterator<Item = BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(&x))
}

/// Determinantal divisors: gcd of all j x j minors, j = 1..n.
fn determinantal_divisors(m: &IntMatrix) -> Vec<BigInt> {
    let rs = rows(m);
    let n = m.dim();
    let subsets = |j: usize| -> Vec<Vec<usize>> {
        (0u32..(1 << n))
            .filter(|s| s.count_ones() as usize == j)
            .map(|s| (0..n).filter(|i| s >> i & 1 == 1).collect())
            .collect()
    };
    (1..=n)
        .map(|j| {
            let mut minors = Vec::new();
            for rsel in subsets(j) {
                for csel in subsets(j) {
                    let sub: Vec<Vec<BigInt>> =
                        rsel.iter().map(|&i| csel.iter().map(|&c| rs[i][c].clone()).collect()).collect();
                    minors.push(det_small(&sub));
                }
            }
            gcd_all(minors)
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn snf_identities(m in matrix_strategy()) {
        let s = snf(&m);
        prop_assert_eq!(&s.source, &m);
        prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
        prop_assert!(s.u.det().abs().is_one());
        prop_assert!(s.v.det().abs().is_one());
        prop_assert!(s.u.mul(&s.u_inv).is_identity());
        let d = s.divisors();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                if i != j {
                    prop_assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            let ok = if w[0].is_zero() { w[1].is_zero() } else { w[1].is_multiple_of(&w[0]) };
            prop_assert!(ok);
        }
        // d_1 ... d_j equals the j-th determinantal divisor
        let mut prod = BigInt::one();
        for (j, dd) in determinantal_divisors(&m).into_iter().enumerate() {
            prod *= &d[j];
            prop_assert_eq!(&prod, &dd);
        }
    }

    #[test]
    fn snf_is_deterministic(m in matrix_strategy()) {
        prop_assert_eq!(snf(&m), snf(&m));
    }

    #[test]
    fn det_of_power_minus_identity(m in matrix_strategy(), k in 1u32..=6) {
        let b = m.pow_minus_identity(k);
        let prod: BigInt = snf(&b).divisors().iter().product();
        prop_assert_eq!(det_small(&rows(&b)).abs(), prod);
    }

    #[test]
    fn c_matrix_factors_power(m in matrix_strategy(), i in 1u32..=4, q in 1u32..=3) {
        let j = i * q;
        let c = c_matrix(&m, i, j).unwrap();
        prop_assert_eq!(c.mul(&m.pow_minus_identity(i)), m.pow_minus_identity(j));
    }

    #[test]
    fn root_of_unity_matches_brute_force(m in matrix_strategy()) {
        // an eigenvalue of order n has phi(n) <= dim, so n <= 12 suffices here
        let brute = (1..=12u32).any(|n| det_small(&rows(&m.pow_minus_identity(n))).is_zero());
        prop_assert_eq!(has_root_of_unity(&m), brute);
    }

    #[test]
    fn charpoly_trace_and_det(m in matrix_strategy()) {
        let p = char_poly(&m);
        let c = p.coeffs();
        let n = m.dim();
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.degree(), n);
        prop_assert_eq!(&c[n - 1], &-m.trace());
        let sign = if n % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        prop_assert_eq!(&c[0], &(sign * m.det()));
    }

    #[test]
    fn inverse_roundtrip(m in matrix_strategy()) {
        if !m.det().is_zero() {
            let inv = rat_inverse(&m).unwrap();
            prop_assert!(m.to_rat().mul(&inv).to_int().map(|x| x.is_identity()).unwrap_or(false));
        }
    }

    #[test]
    fn adapted_norm_expands(m in matrix_strategy(), v in proptest::collection::vec(-20i64..=20, 3)) {
        if is_expanding(&m) {
            let reg = NormRegistry::default();
            let v = &v[..m.dim()];
            let vr: Vec<_> = v.iter().map(|&x| r(x, 1)).collect();
            for name in ["sup", "adapted"] {
                let norm = reg.build(name, &m);
                if let Ok(norm) = norm {
                    let av = m.mul_rat_vec(&vr);
                    if let Some(lambda) = norm.expansion() {
                        prop_assert!(norm.norm(&av) >= lambda * norm.norm(&vr));
                    }
                    let sup = vr.iter().map(|x| x.abs()).max().unwrap();
                    prop_assert!(sup <= norm.sup_factor() * norm.norm(&vr));
                }
            }
        }
    }
}

#[test]
fn spectral_examples() {
    let s = spectral(&a2());
    assert_eq!(s.charpoly.coeffs(), &iv(&[8, -6, 1])[..]);
    assert!(s.is_expanding && !s.has_root_of_unity);
    let mut exact: Vec<_> = s.eigenvalues.iter().map(|e| e.exact.clone().unwrap()).collect();
    exact.sort();
    assert_eq!(exact, iv(&[2, 4]));

    let s = spectral(&IntMatrix::from_rows(&[[6, 1], [1, 6]]));
    let mut exact: Vec<_> = s.eigenvalues.iter().map(|e| e.exact.clone().unwrap()).collect();
    exact.sort();
    assert_eq!(exact, iv(&[5, 7]));

    let s = spectral(&IntMatrix::identity(2));
    assert_eq!(s.charpoly.coeffs(), &iv(&[1, -2, 1])[..]);
    assert!(s.has_root_of_unity && !s.is_expanding);

    // golden-mean matrix: eigenvalue inside the unit circle
    let s = spectral(&a4());
    assert!(!s.has_root_of_unity && !s.is_expanding);
    assert!(s.eigenvalues.iter().all(|e| e.radius < 1e-6));
}

#[test]
fn snf_examples() {
    assert_eq!(snf(&IntMatrix::from_rows(&[[2, 1], [1, 2]])).divisors(), iv(&[1, 3]));
    assert_eq!(snf(&IntMatrix::identity(2)).divisors(), iv(&[1, 1]));
    assert_eq!(snf(&a4().pow_minus_identity(3)).divisors(), iv(&[4, 4]));
    assert_eq!(snf(&IntMatrix::zero(2)).divisors(), iv(&[0, 0]));
}
