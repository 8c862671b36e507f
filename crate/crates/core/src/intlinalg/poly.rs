use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntMatrix;

/// Integer polynomial, coefficients stored from the constant term upward.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// `x^m - 1`
    pub fn x_pow_minus_one(m: usize) -> Self {
        let mut c = vec![BigInt::zero(); m + 1];
        c[0] = -BigInt::one();
        c[m] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficients from the leading term down.
    pub fn coeffs_descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("non-empty")
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval_rat(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * x + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.degree() == 0 {
            return Poly::new(vec![BigInt::zero()]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder by a monic divisor; exact over the integers.
    pub fn div_rem_monic(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let dd = divisor.degree();
        if self.degree() < dd {
            return (Poly::new(vec![BigInt::zero()]), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * d;
            }
            quot[k] = c;
        }
        rem.truncate(dd.max(1));
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn divides(&self, p: &Poly) -> bool {
        p.div_rem_monic(self).1.is_zero()
    }

    /// `x^deg * p(1/x)`.
    pub fn reversed(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().cloned().collect())
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() && !(i == 0 && first) {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier; every
/// division in the recurrence is exact over the integers.
pub fn char_poly(a: &IntMatrix) -> Poly {
    let n = a.dim();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut m = IntMatrix::zero(n);
    let id = IntMatrix::identity(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let shift = scale(&id, &coeffs[n - k + 1]);
        m = a.mul(&m).add(&shift);
        let tr = a.mul(&m).trace();
        let c = -(tr / BigInt::from(k));
        coeffs[n - k] = c;
    }
    Poly::new(coeffs)
}

fn scale(m: &IntMatrix, c: &BigInt) -> IntMatrix {
    let n = m.dim();
    IntMatrix::new(n, m.entries().iter().map(|x| x * c).collect()).expect("square")
}

fn euler_phi(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// The m-th cyclotomic polynomial, `x^m - 1` divided by `Phi_d` for proper divisors d.
pub fn cyclotomic(m: usize) -> Poly {
    let mut p = Poly::x_pow_minus_one(m);
    for d in 1..m {
        if m.is_multiple_of(d) {
            let (q, r) = p.div_rem_monic(&cyclotomic(d));
            debug_assert!(r.is_zero());
            p = q;
        }
    }
    p
}

/// True iff some cyclotomic factor divides `p`; decided by exact division
/// over every `m` with `phi(m) <= deg p`.
pub fn has_cyclotomic_factor(p: &Poly) -> bool {
    let b = p.degree() as u64;
    if b == 0 {
        return false;
    }
    // phi(m) >= sqrt(m / 2), so phi(m) <= b forces m <= 2 b^2.
    let bound = 2 * b * b + 2;
    let mut cache: Vec<Option<Poly>> = vec![None; bound as usize + 1];
    for m in 1..=bound {
        if euler_phi(m) > b {
            continue;
        }
        let phi_m = cache[m as usize].get_or_insert_with(|| cyclotomic(m as usize));
        if phi_m.divides(p) {
            return true;
        }
    }
    false
}

/// Has eigenvalue a root of unity.
pub fn has_root_of_unity(a: &IntMatrix) -> bool {
    has_cyclotomic_factor(&char_poly(a))
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            small.push(d.clone());
            let q = &n / &d;
            if q != d {
                large.push(q);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Integer roots of a monic polynomial, with multiplicity, and the deflated
/// cofactor with no rational roots left.
pub fn integer_roots(p: &Poly) -> (Vec<BigInt>, Poly) {
    assert!(p.is_monic());
    let mut roots = Vec::new();
    let mut rest = p.clone();
    while rest.degree() > 0 && rest.coeffs[0].is_zero() {
        roots.push(BigInt::zero());
        rest = Poly::new(rest.coeffs[1..].to_vec());
    }
    if rest.degree() == 0 {
        return (roots, rest);
    }
    for d in divisors(&rest.coeffs[0].clone()) {
        for cand in [d.clone(), -d] {
            loop {
                if rest.degree() == 0 || !rest.eval_int(&cand).is_zero() {
                    break;
                }
                let lin = Poly::new(vec![-cand.clone(), BigInt::one()]);
                rest = rest.div_rem_monic(&lin).0;
                roots.push(cand.clone());
            }
        }
    }
    roots.sort();
    (roots, rest)
}

/// Exact Schur-Cohn-Jury test: every root of `p` lies strictly inside the
/// open unit disk.
pub fn schur_stable(p: &Poly) -> bool {
    let mut a: Vec<BigRational> = p
        .coeffs
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    while a.len() > 1 {
        let n = a.len() - 1;
        let a0 = a[0].clone();
        let an = a[n].clone();
        if a0.abs() >= an.abs() {
            return false;
        }
        let next: Vec<BigRational> = (0..n)
            .map(|i| &an * &a[i + 1] - &a0 * &a[n - 1 - i])
            .collect();
        a = next;
        while a.len() > 1 && a.last().is_some_and(Zero::is_zero) {
            a.pop();
        }
    }
    true
}

/// Every root of `p` lies strictly outside the closed unit disk.
pub fn roots_outside_unit_circle(p: &Poly) -> bool {
    if p.coeffs[0].is_zero() {
        return false;
    }
    schur_stable(&p.reversed())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_polys_of_paper_matrices() {
        let a2 = IntMatrix::from_rows(&[[3, 1], [1, 3]]);
        assert_eq!(char_poly(&a2), Poly::from_i64(&[8, -6, 1]));
        assert_eq!(char_poly(&IntMatrix::identity(2)), Poly::from_i64(&[1, -2, 1]));
        let a3 = IntMatrix::from_rows(&[[6, 1], [1, 6]]);
        assert_eq!(char_poly(&a3), Poly::from_i64(&[35, -12, 1]));
        assert_eq!(char_poly(&a2).to_string(), "x^2 - 6x + 8");
    }

    #[test]
    fn char_poly_three_by_three() {
        // det(xI - A) at x = k equals det(kI - A).
        let a = IntMatrix::from_rows(&[[1, 2, 0], [-1, 3, 4], [2, 0, -5]]);
        let p = char_poly(&a);
        for k in -3..=3 {
            let shifted = IntMatrix::identity(3)
                .to_rat()
                .entries()
                .iter()
                .zip(a.entries())
                .map(|(i, x)| i.to_integer() * BigInt::from(k) - x)
                .collect();
            let m = IntMatrix::new(3, shifted).unwrap();
            assert_eq!(p.eval_int(&BigInt::from(k)), m.det());
        }
    }

    #[test]
    fn roots_of_unity_detection() {
        assert!(has_root_of_unity(&IntMatrix::from_rows(&[[1, 1], [0, 1]])));
        assert!(!has_root_of_unity(&IntMatrix::from_rows(&[[3, 1], [1, 3]])));
        assert!(has_root_of_unity(&IntMatrix::from_rows(&[[0, -1], [1, 0]])));
        // order 3 and order 6 rotations
        assert!(has_root_of_unity(&IntMatrix::from_rows(&[[0, -1], [1, -1]])));
        assert!(has_root_of_unity(&IntMatrix::from_rows(&[[1, -1], [1, 0]])));
        assert!(!has_root_of_unity(&IntMatrix::from_rows(&[[2, 1], [1, 1]])));
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(cyclotomic(1), Poly::from_i64(&[-1, 1]));
        assert_eq!(cyclotomic(4), Poly::from_i64(&[1, 0, 1]));
        assert_eq!(cyclotomic(6), Poly::from_i64(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), Poly::from_i64(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn integer_roots_deflate() {
        let (roots, rest) = integer_roots(&Poly::from_i64(&[35, -12, 1]));
        assert_eq!(roots, vec![BigInt::from(5), BigInt::from(7)]);
        assert_eq!(rest.degree(), 0);
        let (roots, rest) = integer_roots(&Poly::from_i64(&[1, -3, 1]));
        assert!(roots.is_empty());
        assert_eq!(rest.degree(), 2);
        let (roots, _) = integer_roots(&Poly::from_i64(&[0, 1, -2, 1]));
        assert_eq!(roots.len(), 3);
    }

    #[test]
    fn schur_cohn_cases() {
        assert!(roots_outside_unit_circle(&Poly::from_i64(&[8, -6, 1])));
        assert!(!roots_outside_unit_circle(&Poly::from_i64(&[1, -2, 1])));
        // golden mean pair: one root inside the disk
        assert!(!roots_outside_unit_circle(&Poly::from_i64(&[1, -3, 1])));
        // x^2 + 2: roots +-i sqrt 2
        assert!(roots_outside_unit_circle(&Poly::from_i64(&[2, 0, 1])));
        // x^2 + 1: on the circle
        assert!(!roots_outside_unit_circle(&Poly::from_i64(&[1, 0, 1])));
    }

    #[test]
    fn display_formats() {
        assert_eq!(Poly::from_i64(&[1, -2, 1]).to_string(), "x^2 - 2x + 1");
        assert_eq!(Poly::from_i64(&[0, 0, 1]).to_string(), "x^2");
        assert_eq!(Poly::from_i64(&[-5]).to_string(), "-5");
    }
}
