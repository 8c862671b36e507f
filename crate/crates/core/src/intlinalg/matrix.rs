use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Square matrix of arbitrary-precision integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

/// Square matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    dim: usize,
    entries: Vec<BigRational>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self, LinalgError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(LinalgError::NotSquare {
                rows: if dim == 0 { 0 } else { entries.len() / dim.max(1) },
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Build from rows of machine integers.
    ///
    /// Panics if the rows do not form a non-empty square array; intended for
    /// literals in code and tests.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let dim = rows.len();
        assert!(dim > 0, "empty matrix");
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            let row = row.as_ref();
            assert_eq!(row.len(), dim, "matrix must be square");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        Self { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim);
        IntMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.dim);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// `A^k - I`.
    pub fn pow_minus_identity(&self, k: u32) -> IntMatrix {
        self.pow(k).sub(&IntMatrix::identity(self.dim))
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn mul_rat_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, x)| {
                        acc + BigRational::from_integer(a.clone()) * x
                    })
            })
            .collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.dim;
        let mut out = IntMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                out.entries[j * n + i] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn trace(&self) -> BigInt {
        (0..self.dim).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn is_identity(&self) -> bool {
        *self == IntMatrix::identity(self.dim)
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> BigInt {
        let n = self.dim;
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
            }
            prev = m[k][k].clone();
        }
        sign * &m[n - 1][n - 1]
    }

    pub fn to_rat(&self) -> RatMatrix {
        RatMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect(),
        }
    }

    /// Induced sup-norm: maximum absolute row sum.
    pub fn sup_operator_norm(&self) -> BigInt {
        (0..self.dim)
            .map(|i| self.row(i).iter().map(|x| x.abs()).sum::<BigInt>())
            .max()
            .unwrap_or_default()
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl RatMatrix {
    pub fn new(dim: usize, entries: Vec<BigRational>) -> Result<Self, LinalgError> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(LinalgError::NotSquare {
                rows: if dim == 0 { 0 } else { entries.len() / dim.max(1) },
                len: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        IntMatrix::identity(dim).to_rat()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.dim..(i + 1) * self.dim]
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    entries[i * n + j] += a * other.get(k, j);
                }
            }
        }
        RatMatrix { dim: n, entries }
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    pub fn mul_int_vec(&self, v: &[BigInt]) -> Vec<BigRational> {
        let v: Vec<BigRational> = v
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        self.mul_vec(&v)
    }

    pub fn transpose(&self) -> RatMatrix {
        let n = self.dim;
        let mut entries = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[j * n + i] = self.get(i, j).clone();
            }
        }
        RatMatrix { dim: n, entries }
    }

    pub fn det(&self) -> BigRational {
        let n = self.dim;
        let mut m: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut det = BigRational::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return BigRational::zero();
            };
            if p != k {
                m.swap(p, k);
                det = -det;
            }
            det *= &m[k][k];
            for i in k + 1..n {
                if m[i][k].is_zero() {
                    continue;
                }
                let f = &m[i][k] / &m[k][k];
                for j in k..n {
                    let v = &f * &m[k][j];
                    m[i][j] -= v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<RatMatrix, LinalgError> {
        let n = self.dim;
        let mut m: Vec<Vec<BigRational>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut inv: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !m[i][k].is_zero())
                .ok_or(LinalgError::SingularMatrix)?;
            m.swap(p, k);
            inv.swap(p, k);
            let pivot = m[k][k].clone();
            for j in 0..n {
                m[k][j] /= &pivot;
                inv[k][j] /= &pivot;
            }
            for i in 0..n {
                if i == k || m[i][k].is_zero() {
                    continue;
                }
                let f = m[i][k].clone();
                for j in 0..n {
                    let a = &f * &m[k][j];
                    m[i][j] -= a;
                    let b = &f * &inv[k][j];
                    inv[i][j] -= b;
                }
            }
        }
        Ok(RatMatrix {
            dim: n,
            entries: inv.into_iter().flatten().collect(),
        })
    }

    pub fn pow(&self, k: u32) -> RatMatrix {
        let mut result = RatMatrix::identity(self.dim);
        for _ in 0..k {
            result = result.mul(self);
        }
        result
    }

    /// Induced sup-norm: maximum absolute row sum.
    pub fn sup_operator_norm(&self) -> BigRational {
        (0..self.dim)
            .map(|i| {
                self.row(i)
                    .iter()
                    .fold(BigRational::zero(), |acc, x| acc + x.abs())
            })
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Integer matrix if every entry is integral.
    pub fn to_int(&self) -> Option<IntMatrix> {
        let entries = self
            .entries
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix {
            dim: self.dim,
            entries,
        })
    }
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.dim {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A nonzero vector in the kernel of `m`, scaled to a primitive integer
/// vector, or `None` when `m` is invertible.
pub fn kernel_vector(m: &RatMatrix) -> Option<Vec<BigRational>> {
    let n = m.dim();
    let mut rows: Vec<Vec<BigRational>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let pv = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &pv;
        }
        for i in 0..n {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..n {
                    let v = &f * &rows[r][j];
                    rows[i][j] -= v;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free = (0..n).find(|c| !pivot_cols.contains(c))?;
    let mut v = vec![BigRational::zero(); n];
    v[free] = BigRational::one();
    for (row, &pc) in pivot_cols.iter().enumerate() {
        v[pc] = -rows[row][free].clone();
    }
    // clear denominators and common factors
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| num_integer::Integer::lcm(&acc, x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
    let sign = if ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    Some(
        ints.into_iter()
            .map(|x| BigRational::from_integer(x * &sign / &g))
            .collect(),
    )
}

/// `M^{-1}` over the rationals.
pub fn rat_inverse(m: &IntMatrix) -> Result<RatMatrix, LinalgError> {
    m.to_rat().inverse()
}

/// `C_{ij} = I + A^i + A^{2i} + ... + A^{(j/i - 1) i}`, so that
/// `A^j - I = C_{ij} (A^i - I)`.
pub fn c_matrix(a: &IntMatrix, i: u32, j: u32) -> Result<IntMatrix, LinalgError> {
    if i == 0 || j == 0 || !j.is_multiple_of(i) {
        return Err(LinalgError::NotDivisible { i, j });
    }
    let step = a.pow(i);
    let mut term = IntMatrix::identity(a.dim());
    let mut sum = IntMatrix::zero(a.dim());
    for _ in 0..j / i {
        sum = sum.add(&term);
        term = term.mul(&step);
    }
    Ok(sum)
}
