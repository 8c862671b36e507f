//! Bowen-Franks groups `BF_k(A) = Z^b / (A^k - I) Z^b` and the torus
//! periodic points they parametrize.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intlinalg::{c_matrix, has_root_of_unity, rat_inverse, snf, IntMatrix, RatMatrix, SnfDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BfError {
    #[error("A has an eigenvalue that is a root of unity")]
    RootOfUnitySpectrum,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("level {k} does not divide {j}")]
    NotDivisible { k: u32, j: u32 },
    #[error("level must be positive")]
    ZeroLevel,
}

#[derive(Debug)]
struct Inner {
    a: IntMatrix,
    k: u32,
    snf: SnfDecomposition,
    inverse: RatMatrix,
    order: BigInt,
}

/// `BF_k(A)`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct BfGroup(Arc<Inner>);

impl PartialEq for BfGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.k == other.0.k && self.0.a == other.0.a)
    }
}

impl Eq for BfGroup {}

pub fn bf_group(a: &IntMatrix, k: u32) -> Result<BfGroup, BfError> {
    if k == 0 {
        return Err(BfError::ZeroLevel);
    }
    if has_root_of_unity(a) {
        return Err(BfError::RootOfUnitySpectrum);
    }
    let m = a.pow_minus_identity(k);
    let inverse = rat_inverse(&m).map_err(|_| BfError::RootOfUnitySpectrum)?;
    let order = m.det().abs();
    Ok(BfGroup(Arc::new(Inner {
        a: a.clone(),
        k,
        snf: snf(&m),
        inverse,
        order,
    })))
}

impl BfGroup {
    pub fn matrix(&self) -> &IntMatrix {
        &self.0.a
    }

    pub fn level(&self) -> u32 {
        self.0.k
    }

    pub fn rank(&self) -> usize {
        self.0.a.dim()
    }

    pub fn snf(&self) -> &SnfDecomposition {
        &self.0.snf
    }

    pub fn divisors(&self) -> Vec<BigInt> {
        self.0.snf.divisors()
    }

    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.0.snf.invariant_factors()
    }

    pub fn order(&self) -> &BigInt {
        &self.0.order
    }

    pub fn identity(&self) -> BfElement {
        BfElement {
            group: self.clone(),
            canonical: vec![BigInt::zero(); self.rank()],
        }
    }

    /// Coset of `n`, in SNF coordinates `(U n)_i mod d_i`.
    pub fn reduce(&self, n: &[BigInt]) -> Result<BfElement, BfError> {
        if n.len() != self.rank() {
            return Err(BfError::DimensionMismatch {
                expected: self.rank(),
                got: n.len(),
            });
        }
        let canonical = self
            .0
            .snf
            .u
            .mul_vec(n)
            .into_iter()
            .zip(self.divisors())
            .map(|(x, d)| if d.is_one() { BigInt::zero() } else { x.mod_floor(&d) })
            .collect();
        Ok(BfElement {
            group: self.clone(),
            canonical,
        })
    }

    pub fn reduce_i64(&self, n: &[i64]) -> Result<BfElement, BfError> {
        self.reduce(&n.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    /// All elements, in lexicographic order of SNF coordinates.
    pub fn elements(&self) -> impl Iterator<Item = BfElement> + '_ {
        let divs = self.divisors();
        let mut cur: Option<Vec<BigInt>> = Some(vec![BigInt::zero(); divs.len()]);
        std::iter::from_fn(move || {
            let out = cur.clone()?;
            let mut next = out.clone();
            let mut i = next.len();
            loop {
                if i == 0 {
                    cur = None;
                    break;
                }
                i -= 1;
                next[i] += 1;
                if next[i] < divs[i] {
                    cur = Some(next);
                    break;
                }
                next[i] = BigInt::zero();
            }
            Some(BfElement {
                group: self.clone(),
                canonical: out,
            })
        })
    }
}

impl fmt::Display for BfGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factors = self.invariant_factors();
        if factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = factors.iter().map(|d| format!("Z_{d}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A coset `n + (A^k - I) Z^b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BfElement {
    group: BfGroup,
    canonical: Vec<BigInt>,
}

impl BfElement {
    pub fn group(&self) -> &BfGroup {
        &self.group
    }

    /// SNF coordinates, `0 <= r_i < d_i`.
    pub fn canonical(&self) -> &[BigInt] {
        &self.canonical
    }

    /// Coset representative `U^{-1} r`.
    pub fn lift(&self) -> Vec<BigInt> {
        self.group.0.snf.u_inv.mul_vec(&self.canonical)
    }

    pub fn is_identity(&self) -> bool {
        self.canonical.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &BfElement) -> BfElement {
        let sum: Vec<BigInt> = self.lift().iter().zip(other.lift()).map(|(a, b)| a + b).collect();
        self.group.reduce(&sum).expect("same rank")
    }

    /// `n + Gamma_k -> C_{kj} n + Gamma_j`.
    pub fn upsilon(&self, j: u32) -> Result<BfElement, BfError> {
        let k = self.group.level();
        if j == 0 || !j.is_multiple_of(k) {
            return Err(BfError::NotDivisible { k, j });
        }
        let c = c_matrix(self.group.matrix(), k, j).map_err(|_| BfError::NotDivisible { k, j })?;
        let target = bf_group(self.group.matrix(), j)?;
        target.reduce(&c.mul_vec(&self.lift()))
    }

    /// `(A^k - I)^{-1} n mod Z^b`.
    pub fn psi(&self) -> TorusPoint {
        TorusPoint::new(self.group.0.inverse.mul_int_vec(&self.lift()))
    }
}

impl fmt::Display for BfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lift: Vec<String> = self.lift().iter().map(ToString::to_string).collect();
        write!(f, "({}) + Gamma_{}", lift.join(", "), self.group.level())
    }
}

pub fn upsilon(e: &BfElement, j: u32) -> Result<BfElement, BfError> {
    e.upsilon(j)
}

pub fn psi(e: &BfElement) -> TorusPoint {
    e.psi()
}

pub fn reduce(group: &BfGroup, n: &[BigInt]) -> Result<BfElement, BfError> {
    group.reduce(n)
}

/// A point of `R^b / Z^b` with exact coordinates in `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusPoint {
    coords: Vec<BigRational>,
}

pub(crate) fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl TorusPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self {
            coords: coords.iter().map(frac).collect(),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![BigRational::zero(); dim],
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &TorusPoint) -> TorusPoint {
        TorusPoint::new(self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect())
    }

    pub fn neg(&self) -> TorusPoint {
        TorusPoint::new(self.coords.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn phi_apply(a: &IntMatrix, y: &TorusPoint) -> TorusPoint {
    TorusPoint::new(a.mul_rat_vec(y.coords()))
}

/// `Fix(Phi_A^k)`, sorted.
pub fn enumerate_fixed(a: &IntMatrix, k: u32) -> Result<Vec<TorusPoint>, BfError> {
    let g = bf_group(a, k)?;
    let mut pts: Vec<TorusPoint> = g.elements().map(|e| e.psi()).collect();
    pts.sort();
    Ok(pts)
}
