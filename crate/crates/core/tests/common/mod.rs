#![allow(dead_code)]

use homdyn::freegroup::Endomorphism;
use homdyn::graphmap::TightMap;
use homdyn::intlinalg::IntMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn iv(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn rv(xs: &[(i64, i64)]) -> Vec<BigRational> {
    xs.iter().map(|&(p, q)| r(p, q)).collect()
}

pub fn map(images: &[&str]) -> TightMap {
    TightMap::new(Endomorphism::from_strs(images).unwrap()).unwrap()
}

pub fn phi1() -> TightMap {
    map(&["aabAB", "BAbba"])
}

pub fn phi2() -> TightMap {
    map(&["aaab", "bbba"])
}

pub fn phi3() -> TightMap {
    map(&["aaabaaa", "bbbabbb"])
}

pub fn a2() -> IntMatrix {
    IntMatrix::from_rows(&[[3, 1], [1, 3]])
}

pub fn a4() -> IntMatrix {
    IntMatrix::from_rows(&[[2, 1], [1, 1]])
}

/// 2x2 or 3x3 determinant by cofactor expansion.
pub fn det_small(m: &[Vec<BigInt>]) -> BigInt {
    match m.len() {
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut s = BigInt::from(0);
            for j in 0..m.len() {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = &m[0][j] * det_small(&minor);
                if j % 2 == 0 {
                    s += term;
                } else {
                    s -= term;
                }
            }
            s
        }
    }
}

pub fn rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}
