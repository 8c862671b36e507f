//! Polyhedral norms on `R^b` used for shadowing constants.
//!
//! Every norm here has the form `||v|| = max_k |f_k . v|` for a finite list of
//! rational functionals, so norms of rational vectors are exact rationals and
//! distance bounds between segments reduce to interval arithmetic per
//! functional. A norm may carry a certified expansion rate `lambda` with
//! `||A^{-1} v|| <= ||v|| / lambda` for the matrix it was built from.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use super::matrix::kernel_vector;
use super::poly::{char_poly, integer_roots, roots_outside_unit_circle};
use super::{IntMatrix, LinalgError, RatMatrix};

pub trait Norm: fmt::Debug + Send + Sync {
    fn name(&self) -> &'static str;

    /// Functionals `f_k`; the norm is `max_k |f_k . v|`.
    fn functionals(&self) -> &[Vec<BigRational>];

    /// Certified rational `lambda > 1` with `||A v|| >= lambda ||v||`, if the
    /// norm is adapted to the matrix it was built for.
    fn expansion(&self) -> Option<&BigRational>;

    fn describe(&self) -> String;

    /// `K` with `||v||_inf <= K ||v||`.
    fn sup_factor(&self) -> BigRational;

    fn norm(&self, v: &[BigRational]) -> BigRational {
        self.functionals()
            .iter()
            .map(|f| dot(f, v).abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

pub(crate) fn dot(f: &[BigRational], v: &[BigRational]) -> BigRational {
    f.iter()
        .zip(v)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

fn unit_functionals(dim: usize) -> Vec<Vec<BigRational>> {
    RatMatrix::identity(dim)
        .entries()
        .chunks(dim)
        .map(|r| r.to_vec())
        .collect()
}

/// Coordinate sup-norm. Adapted exactly when `||A^{-1}||_inf < 1`.
#[derive(Clone, Debug)]
pub struct SupNorm {
    functionals: Vec<Vec<BigRational>>,
    lambda: Option<BigRational>,
}

impl SupNorm {
    pub fn build(a: &IntMatrix) -> Result<Box<dyn Norm>, LinalgError> {
        Ok(Box::new(Self::new(a)))
    }

    pub fn new(a: &IntMatrix) -> Self {
        let lambda = a.to_rat().inverse().ok().and_then(|inv| {
            let op = inv.sup_operator_norm();
            let lam = op.recip();
            (lam > BigRational::one()).then_some(lam)
        });
        Self {
            functionals: unit_functionals(a.dim()),
            lambda,
        }
    }
}

impl Norm for SupNorm {
    fn name(&self) -> &'static str {
        "sup"
    }
    fn functionals(&self) -> &[Vec<BigRational>] {
        &self.functionals
    }
    fn expansion(&self) -> Option<&BigRational> {
        self.lambda.as_ref()
    }
    fn describe(&self) -> String {
        "max_i |v_i|".to_string()
    }
    fn sup_factor(&self) -> BigRational {
        BigRational::one()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum AdaptedNormData {
    /// `||v|| = ||P^{-1} v||_inf` with `P` an exact eigenbasis; columns of `p`
    /// are eigenvectors for `eigenvalues` in order.
    Eigenbasis {
        p: RatMatrix,
        p_inv: RatMatrix,
        eigenvalues: Vec<BigInt>,
    },
    /// `||v|| = max_{0<=j<m} lambda^j ||A^{-j} v||_inf` where
    /// `lambda^m ||A^{-m}||_inf <= 1`.
    Iterated { m: u32, lambda: BigRational },
}

impl fmt::Display for AdaptedNormData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdaptedNormData::Eigenbasis { p, .. } => {
                write!(f, "||P^-1 v||_inf with eigenbasis P = {p}")
            }
            AdaptedNormData::Iterated { m, lambda } => write!(
                f,
                "max_(0<=j<{m}) ({lambda})^j ||A^-j v||_inf"
            ),
        }
    }
}

/// Norm adapted to an expanding matrix.
#[derive(Clone, Debug)]
pub struct AdaptedNorm {
    functionals: Vec<Vec<BigRational>>,
    lambda: BigRational,
    data: AdaptedNormData,
}

const MAX_ITERATED_POWER: u32 = 16;

impl AdaptedNorm {
    pub fn build(a: &IntMatrix) -> Result<Box<dyn Norm>, LinalgError> {
        Ok(Box::new(Self::new(a)?))
    }

    pub fn data(&self) -> &AdaptedNormData {
        &self.data
    }

    pub fn lambda(&self) -> &BigRational {
        &self.lambda
    }

    pub fn new(a: &IntMatrix) -> Result<Self, LinalgError> {
        if a.det().is_zero() {
            return Err(LinalgError::SingularMatrix);
        }
        let cp = char_poly(a);
        if !roots_outside_unit_circle(&cp) {
            return Err(LinalgError::NotExpanding);
        }
        let (roots, rest) = integer_roots(&cp);
        let mut distinct = roots.clone();
        distinct.dedup();
        if rest.degree() == 0 && distinct.len() == roots.len() {
            return Ok(Self::eigenbasis(a, roots));
        }
        Self::iterated(a)
    }

    fn eigenbasis(a: &IntMatrix, eigenvalues: Vec<BigInt>) -> Self {
        let n = a.dim();
        let ar = a.to_rat();
        let mut cols = Vec::with_capacity(n);
        for mu in &eigenvalues {
            let shifted: Vec<BigRational> = (0..n)
                .flat_map(|i| {
                    let ar = &ar;
                    (0..n).map(move |j| {
                        let d = if i == j {
                            BigRational::from_integer(mu.clone())
                        } else {
                            BigRational::zero()
                        };
                        ar.get(i, j) - d
                    })
                })
                .collect();
            let m = RatMatrix::new(n, shifted).expect("square");
            cols.push(kernel_vector(&m).expect("eigenvalue has an eigenvector"));
        }
        let p_entries = (0..n)
            .flat_map(|i| cols.iter().map(move |c| c[i].clone()))
            .collect();
        let p = RatMatrix::new(n, p_entries).expect("square");
        let p_inv = p.inverse().expect("distinct eigenvalues give a basis");
        let lambda = eigenvalues
            .iter()
            .map(|m| BigRational::from_integer(m.abs()))
            .min()
            .expect("non-empty");
        Self {
            functionals: (0..n).map(|i| p_inv.row(i).to_vec()).collect(),
            lambda,
            data: AdaptedNormData::Eigenbasis {
                p,
                p_inv,
                eigenvalues,
            },
        }
    }

    fn iterated(a: &IntMatrix) -> Result<Self, LinalgError> {
        let inv = a.to_rat().inverse()?;
        let mut power = RatMatrix::identity(a.dim());
        let mut best: Option<(u32, BigRational)> = None;
        for m in 1..=MAX_ITERATED_POWER {
            power = power.mul(&inv);
            let op = power.sup_operator_norm();
            if op >= BigRational::one() {
                continue;
            }
            let lam = root_lower(&op.recip(), m);
            if lam > BigRational::one() && best.as_ref().is_none_or(|(_, b)| lam > *b) {
                best = Some((m, lam));
            }
        }
        let (m, lambda) = best.ok_or(LinalgError::NotExpanding)?;
        let mut functionals = Vec::new();
        let mut power = RatMatrix::identity(a.dim());
        let mut weight = BigRational::one();
        for _ in 0..m {
            for i in 0..a.dim() {
                functionals.push(power.row(i).iter().map(|x| x * &weight).collect());
            }
            power = power.mul(&inv);
            weight *= &lambda;
        }
        Ok(Self {
            functionals,
            lambda: lambda.clone(),
            data: AdaptedNormData::Iterated { m, lambda },
        })
    }
}

/// Rational `r > 0` with `r^m <= x`, close to the real m-th root (to ~1e-6).
fn root_lower(x: &BigRational, m: u32) -> BigRational {
    let scale = 1_000_000i64;
    let est = x.to_f64().unwrap_or(1.0).powf(1.0 / m as f64);
    let mut num = BigInt::from_f64((est * scale as f64).floor()).unwrap_or_else(BigInt::zero);
    let den = BigInt::from(scale);
    loop {
        let r = BigRational::new(num.clone(), den.clone());
        if num <= BigInt::zero() || &num::pow(r.clone(), m as usize) <= x {
            return r;
        }
        num -= 1;
    }
}

mod num {
    pub(super) use num_traits::pow;
}

impl Norm for AdaptedNorm {
    fn name(&self) -> &'static str {
        "adapted"
    }
    fn functionals(&self) -> &[Vec<BigRational>] {
        &self.functionals
    }
    fn expansion(&self) -> Option<&BigRational> {
        Some(&self.lambda)
    }
    fn describe(&self) -> String {
        self.data.to_string()
    }
    fn sup_factor(&self) -> BigRational {
        match &self.data {
            AdaptedNormData::Eigenbasis { p, .. } => p.sup_operator_norm(),
            AdaptedNormData::Iterated { .. } => BigRational::one(),
        }
    }
}

pub type NormBuilder = fn(&IntMatrix) -> Result<Box<dyn Norm>, LinalgError>;

/// Norm strategies selectable by name.
pub struct NormRegistry {
    builders: Vec<(&'static str, NormBuilder)>,
}

impl Default for NormRegistry {
    fn default() -> Self {
        let mut r = Self {
            builders: Vec::new(),
        };
        r.register("sup", SupNorm::build);
        r.register("adapted", AdaptedNorm::build);
        r
    }
}

impl NormRegistry {
    pub fn register(&mut self, name: &'static str, builder: NormBuilder) {
        self.builders.retain(|(n, _)| *n != name);
        self.builders.push((name, builder));
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.builders.iter().map(|(n, _)| *n)
    }

    pub fn build(&self, name: &str, a: &IntMatrix) -> Result<Box<dyn Norm>, LinalgError> {
        let (_, builder) = self
            .builders
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| LinalgError::UnknownNorm(name.to_string()))?;
        builder(a)
    }
}
