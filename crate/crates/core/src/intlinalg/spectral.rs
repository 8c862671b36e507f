use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive, Zero};

use super::norm::{AdaptedNorm, AdaptedNormData};
use super::poly::{char_poly, has_cyclotomic_factor, integer_roots, roots_outside_unit_circle, Poly};
use super::IntMatrix;

/// Approximate eigenvalue with a certified radius: some root of the
/// characteristic polynomial lies within `radius` of `value`.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub radius: f64,
    /// Set when the eigenvalue is an integer found by the rational-root test.
    pub exact: Option<BigInt>,
}

impl Eigenvalue {
    /// Lower bound on the modulus.
    pub fn modulus_lower(&self) -> f64 {
        (self.value.norm() - self.radius).max(0.0)
    }
}

#[derive(Clone, Debug)]
pub struct SpectralReport {
    pub charpoly: Poly,
    pub eigenvalues: Vec<Eigenvalue>,
    pub is_expanding: bool,
    pub has_root_of_unity: bool,
    /// Rational `lambda > 1` below every eigenvalue modulus, with `||A v|| >= lambda ||v||`
    /// in the adapted norm described by `norm_data`. Present only when expanding.
    pub lambda_lower: Option<BigRational>,
    pub norm_data: Option<AdaptedNormData>,
}

impl SpectralReport {
    /// Largest certified radius over all eigenvalues.
    pub fn epsilon(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|e| e.radius)
            .fold(0.0, f64::max)
    }
}

/// Exact test: no root-of-unity eigenvalue and every eigenvalue outside the unit circle.
pub fn is_expanding(a: &IntMatrix) -> bool {
    let p = char_poly(a);
    !has_cyclotomic_factor(&p) && roots_outside_unit_circle(&p)
}

pub fn spectral(a: &IntMatrix) -> SpectralReport {
    let charpoly = char_poly(a);
    let eigenvalues = eigenvalues(&charpoly);
    let has_root_of_unity = has_cyclotomic_factor(&charpoly);
    let is_expanding = !has_root_of_unity && roots_outside_unit_circle(&charpoly);
    let (lambda_lower, norm_data) = if is_expanding {
        match AdaptedNorm::new(a) {
            Ok(norm) => (Some(norm.lambda().clone()), Some(norm.data().clone())),
            Err(_) => (None, None),
        }
    } else {
        (None, None)
    };
    SpectralReport {
        charpoly,
        eigenvalues,
        is_expanding,
        has_root_of_unity,
        lambda_lower,
        norm_data,
    }
}

/// Integer roots exactly, the rest by Aberth iteration with an a-posteriori
/// radius `n |p(z) / p'(z)|` evaluated in exact arithmetic.
pub fn eigenvalues(p: &Poly) -> Vec<Eigenvalue> {
    let (int_roots, rest) = integer_roots(p);
    let mut out: Vec<Eigenvalue> = int_roots
        .into_iter()
        .map(|r| Eigenvalue {
            value: Complex64::new(r.to_f64().unwrap_or(f64::NAN), 0.0),
            radius: 0.0,
            exact: Some(r),
        })
        .collect();
    if rest.degree() > 0 {
        for z in aberth(&rest) {
            let z = polish(&rest, z);
            out.push(Eigenvalue {
                value: z,
                radius: certified_radius(&rest, z),
                exact: None,
            });
        }
    }
    out.sort_by(|a, b| {
        a.value
            .norm()
            .total_cmp(&b.value.norm())
            .then(a.value.re.total_cmp(&b.value.re))
            .then(a.value.im.total_cmp(&b.value.im))
    });
    out
}

fn horner(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

fn aberth(p: &Poly) -> Vec<Complex64> {
    let c = p.to_f64_coeffs();
    let n = p.degree();
    let lead = c[n];
    let bound = 1.0
        + c[..n]
            .iter()
            .map(|x| (x / lead).abs())
            .fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64;
            Complex64::from_polar(bound * 0.5 + 0.5, theta)
        })
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (pv, dpv) = horner(&c, z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let sum: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

fn polish(p: &Poly, mut z: Complex64) -> Complex64 {
    let c = p.to_f64_coeffs();
    for _ in 0..8 {
        let (pv, dpv) = horner(&c, z);
        if dpv.norm() == 0.0 {
            break;
        }
        let next = z - pv / dpv;
        if !next.is_finite() {
            break;
        }
        z = next;
    }
    z
}

/// Complex rational number as a (re, im) pair.
type CRat = (BigRational, BigRational);

fn cmul(a: &CRat, b: &CRat) -> CRat {
    (
        &a.0 * &b.0 - &a.1 * &b.1,
        &a.0 * &b.1 + &a.1 * &b.0,
    )
}

fn ceval(coeffs: &[BigInt], z: &CRat) -> CRat {
    let mut acc: CRat = (BigRational::zero(), BigRational::zero());
    for c in coeffs.iter().rev() {
        acc = cmul(&acc, z);
        acc.0 += BigRational::from_integer(c.clone());
    }
    acc
}

fn norm_sq(a: &CRat) -> BigRational {
    &a.0 * &a.0 + &a.1 * &a.1
}

fn certified_radius(p: &Poly, z: Complex64) -> f64 {
    let (Some(re), Some(im)) = (BigRational::from_f64(z.re), BigRational::from_f64(z.im)) else {
        return f64::INFINITY;
    };
    let zr = (re, im);
    let pv = ceval(p.coeffs(), &zr);
    let dpv = ceval(p.derivative().coeffs(), &zr);
    let d = norm_sq(&dpv);
    if d.is_zero() {
        return f64::INFINITY;
    }
    let n = BigRational::from_integer(BigInt::from(p.degree()));
    let r2 = &n * &n * norm_sq(&pv) / d;
    sqrt_upper(&r2)
}

/// An `f64` no smaller than `sqrt(x)`.
pub(crate) fn sqrt_upper(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let approx = x.to_f64().unwrap_or(f64::INFINITY).sqrt();
    let mut cand = approx * (1.0 + 1e-12) + f64::MIN_POSITIVE;
    for _ in 0..64 {
        match BigRational::from_f64(cand) {
            Some(c) if &(&c * &c) >= x => return cand,
            Some(_) => cand *= 1.0 + 1e-9,
            None => return f64::INFINITY,
        }
    }
    f64::INFINITY
}
