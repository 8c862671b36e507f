use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntMatrix;

/// Smith normal form `U * source * V = D`.
///
/// `u_inv` is kept alongside `u` so that coset representatives can be lifted
/// back from SNF coordinates without a second inversion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfDecomposition {
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub d: IntMatrix,
    pub source: IntMatrix,
}

impl SnfDecomposition {
    /// Diagonal entries `d_1 | d_2 | ... | d_b`, all non-negative.
    pub fn divisors(&self) -> Vec<BigInt> {
        (0..self.d.dim()).map(|i| self.d.get(i, i).clone()).collect()
    }

    /// Divisors greater than one.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.divisors()
            .into_iter()
            .filter(|d| *d > BigInt::one())
            .collect()
    }
}

struct Work {
    n: usize,
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    u_inv: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        self.d.swap(a, b);
        self.u.swap(a, b);
        for row in &mut self.u_inv {
            row.swap(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            row.swap(a, b);
        }
    }

    /// row[target] += q * row[source]
    fn add_row(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.n {
            let x = q * &self.d[source][j];
            self.d[target][j] += x;
            let y = q * &self.u[source][j];
            self.u[target][j] += y;
        }
        // inverse update: column[source] -= q * column[target]
        for row in &mut self.u_inv {
            let z = q * &row[target];
            row[source] -= z;
        }
    }

    /// col[target] += q * col[source]
    fn add_col(&mut self, target: usize, source: usize, q: &BigInt) {
        for row in self.d.iter_mut().chain(self.v.iter_mut()) {
            let x = q * &row[source];
            row[target] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.n {
            self.d[i][j] = -&self.d[i][j];
            self.u[i][j] = -&self.u[i][j];
        }
        for row in &mut self.u_inv {
            row[i] = -&row[i];
        }
    }

    /// Smallest nonzero |entry| in the trailing block, ties broken by
    /// lowest (row, column) in row-major order.
    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.n {
            for j in t..self.n {
                let x = &self.d[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d[bi][bj].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    (0..m.dim()).map(|i| m.row(i).to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<BigInt>>) -> IntMatrix {
    let n = rows.len();
    IntMatrix::new(n, rows.into_iter().flatten().collect()).expect("square by construction")
}

/// Smith normal form with unimodular transforms.
///
/// Pivoting is deterministic: smallest absolute nonzero entry of the trailing
/// block, column below cleared before the row to the right.
pub fn snf(m: &IntMatrix) -> SnfDecomposition {
    let n = m.dim();
    let id = to_rows(&IntMatrix::identity(n));
    let mut w = Work {
        n,
        d: to_rows(m),
        u: id.clone(),
        u_inv: id.clone(),
        v: id,
    };

    'outer: for t in 0..n {
        loop {
            let Some((pi, pj)) = w.pivot(t) else {
                break 'outer;
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..n {
                if w.d[i][t].is_zero() {
                    continue;
                }
                let q = w.d[i][t].div_floor(&w.d[t][t]);
                w.add_row(i, t, &-q);
                if !w.d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if w.d[t][j].is_zero() {
                    continue;
                }
                let q = w.d[t][j].div_floor(&w.d[t][t]);
                w.add_col(j, t, &-q);
                if !w.d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // The pivot must divide the whole trailing block.
            let p = w.d[t][t].clone();
            let bad = (t + 1..n).find(|&i| (t + 1..n).any(|j| !w.d[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.d[t][t].is_negative() {
            w.negate_row(t);
        }
    }

    SnfDecomposition {
        u: from_rows(w.u),
        u_inv: from_rows(w.u_inv),
        v: from_rows(w.v),
        d: from_rows(w.d),
        source: m.clone(),
    }
}
