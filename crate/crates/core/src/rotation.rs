//! Rotation sets of graph maps acting trivially on homology: the transition
//! matrix labelled by deck translations, minimal loops, and their hull.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::freegroup::Letter;
use crate::graphmap::{fmt_vec, to_rat_vec, PeriodicPoint, TightMap};
use crate::intlinalg::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RotationError {
    #[error("A is not the identity")]
    NontrivialHomologyAction,
    #[error("vector is not fixed by the transpose of A")]
    NotEigenvectorOne,
    #[error("loop budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
}

/// One letter of `psi(a_from)` equal to `a_to` or its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub from: usize,
    pub to: usize,
    pub slot: usize,
    pub inverse: bool,
    /// Base of the lifted edge traversed, for the lift of `a_from` at the origin.
    pub translation: Vec<BigInt>,
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}->{}@{}{}",
            Letter::pos(self.from),
            Letter::pos(self.to),
            fmt_vec(&self.translation),
            if self.inverse { "-" } else { "" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingMatrix {
    size: usize,
    /// `entries[i][j]`: transitions from edge `j` to edge `i`, in slot order.
    entries: Vec<Vec<Vec<Transition>>>,
}

impl GroupRingMatrix {
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, to: usize, from: usize) -> &[Transition] {
        &self.entries[to][from]
    }

    /// Translations of `entry(to, from)`, sorted.
    pub fn translations(&self, to: usize, from: usize) -> Vec<Vec<BigInt>> {
        let mut v: Vec<Vec<BigInt>> = self.entries[to][from]
            .iter()
            .map(|t| t.translation.clone())
            .collect();
        v.sort();
        v
    }

    pub fn outgoing(&self, from: usize) -> impl Iterator<Item = &Transition> + '_ {
        (0..self.size).flat_map(move |to| self.entries[to][from].iter())
    }

    /// Number of transitions leaving `from`.
    pub fn column_len(&self, from: usize) -> usize {
        self.outgoing(from).count()
    }
}

fn require_identity(a: &IntMatrix) -> Result<(), RotationError> {
    if a.is_identity() {
        Ok(())
    } else {
        Err(RotationError::NontrivialHomologyAction)
    }
}

pub fn transition_matrix(m: &TightMap) -> Result<GroupRingMatrix, RotationError> {
    require_identity(m.matrix())?;
    let b = m.rank();
    let mut entries = vec![vec![Vec::new(); b]; b];
    for from in 0..b {
        for slot in 0..m.speeds()[from] {
            let (to, translation, inverse) = m.slot_edge(from, slot);
            entries[to][from].push(Transition {
                from,
                to,
                slot,
                inverse,
                translation,
            });
        }
    }
    Ok(GroupRingMatrix { size: b, entries })
}

/// A cycle of transitions visiting each edge at most once, started at its
/// smallest edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Loop {
    pub transitions: Vec<Transition>,
}

impl Loop {
    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn displacement(&self) -> Vec<BigInt> {
        let b = self.transitions[0].translation.len();
        self.transitions.iter().fold(vec![BigInt::zero(); b], |acc, t| {
            acc.iter().zip(&t.translation).map(|(x, y)| x + y).collect()
        })
    }

    pub fn rotation_vector(&self) -> Vec<BigRational> {
        let n = BigRational::from_integer(self.len().into());
        to_rat_vec(&self.displacement())
            .into_iter()
            .map(|x| x / &n)
            .collect()
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.transitions.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub const DEFAULT_LOOP_BUDGET: usize = 1_000_000;

pub fn minimal_loops(g: &GroupRingMatrix) -> Vec<Loop> {
    minimal_loops_bounded(g, usize::MAX).expect("unbounded")
}

/// Elementary cycles of the transition multigraph, sorted.
pub fn minimal_loops_bounded(g: &GroupRingMatrix, budget: usize) -> Result<Vec<Loop>, RotationError> {
    fn walk(
        g: &GroupRingMatrix,
        start: usize,
        at: usize,
        visited: &mut Vec<bool>,
        path: &mut Vec<Transition>,
        out: &mut Vec<Loop>,
        budget: usize,
    ) -> Result<(), RotationError> {
        for t in g.outgoing(at) {
            if t.to == start {
                path.push(t.clone());
                out.push(Loop {
                    transitions: path.clone(),
                });
                path.pop();
                if out.len() > budget {
                    return Err(RotationError::BudgetExceeded { limit: budget });
                }
            } else if t.to > start && !visited[t.to] {
                visited[t.to] = true;
                path.push(t.clone());
                walk(g, start, t.to, visited, path, out, budget)?;
                path.pop();
                visited[t.to] = false;
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    for start in 0..g.size {
        let mut visited = vec![false; g.size];
        visited[start] = true;
        walk(g, start, start, &mut visited, &mut Vec::new(), &mut out, budget)?;
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct RotationSetReport {
    pub loops: Vec<Loop>,
    /// `(length, rotation vector)` per loop, in loop order.
    pub loop_vectors: Vec<(usize, Vec<BigRational>)>,
    pub hull_vertices: Vec<Vec<BigRational>>,
    pub fixed_point_vectors: Vec<Vec<BigRational>>,
    pub period2_vectors: Vec<Vec<BigRational>>,
}

fn distinct_of_len(loops: &[(usize, Vec<BigRational>)], len: usize) -> Vec<Vec<BigRational>> {
    loops
        .iter()
        .filter(|(l, _)| *l == len)
        .map(|(_, v)| v.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

pub fn rotation_set(m: &TightMap) -> Result<RotationSetReport, RotationError> {
    rotation_set_bounded(m, DEFAULT_LOOP_BUDGET)
}

pub fn rotation_set_bounded(m: &TightMap, budget: usize) -> Result<RotationSetReport, RotationError> {
    let g = transition_matrix(m)?;
    let loops = minimal_loops_bounded(&g, budget)?;
    let loop_vectors: Vec<(usize, Vec<BigRational>)> =
        loops.iter().map(|l| (l.len(), l.rotation_vector())).collect();
    let points: Vec<Vec<BigRational>> = loop_vectors.iter().map(|(_, v)| v.clone()).collect();
    Ok(RotationSetReport {
        hull_vertices: hull(&points),
        fixed_point_vectors: distinct_of_len(&loop_vectors, 1),
        period2_vectors: distinct_of_len(&loop_vectors, 2),
        loops,
        loop_vectors,
    })
}

/// Rotation vectors `(sum of translations) / n` of all closed walks of length
/// `n <= max_len`, as distinct `(n, vector)` pairs.
pub fn closed_walk_vectors(g: &GroupRingMatrix, max_len: usize) -> BTreeSet<(usize, Vec<BigRational>)> {
    let b = g.size;
    let mut out = BTreeSet::new();
    for start in 0..b {
        let mut states: BTreeSet<(usize, Vec<BigInt>)> = BTreeSet::new();
        states.insert((start, vec![BigInt::zero(); b]));
        for n in 1..=max_len {
            let mut next = BTreeSet::new();
            for (at, sum) in &states {
                for t in g.outgoing(*at) {
                    let s: Vec<BigInt> = sum.iter().zip(&t.translation).map(|(x, y)| x + y).collect();
                    next.insert((t.to, s));
                }
            }
            let len = BigRational::from_integer(n.into());
            for (at, sum) in &next {
                if *at == start {
                    out.insert((n, to_rat_vec(sum).into_iter().map(|x| x / &len).collect()));
                }
            }
            states = next;
        }
    }
    out
}

fn cross(o: &[BigRational], a: &[BigRational], b: &[BigRational]) -> BigRational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

/// Extreme points of the convex hull. In the plane they are listed
/// counter-clockwise from the lexicographically smallest point; otherwise
/// sorted.
pub fn hull(points: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut pts: Vec<Vec<BigRational>> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    match pts[0].len() {
        1 => vec![pts[0].clone(), pts[pts.len() - 1].clone()],
        2 => monotone_chain(&pts),
        _ => (0..pts.len())
            .filter(|&i| {
                let others: Vec<Vec<BigRational>> = pts
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, p)| p.clone())
                    .collect();
                !in_convex_hull(&pts[i], &others)
            })
            .map(|i| pts[i].clone())
            .collect(),
    }
}

fn monotone_chain(pts: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let mut lower: Vec<Vec<BigRational>> = Vec::new();
    for p in pts {
        while lower.len() >= 2 && !cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p).is_positive() {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<Vec<BigRational>> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && !cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p).is_positive() {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// Whether `p` is a convex combination of `points`, by an exact phase-one
/// simplex with Bland's rule.
pub fn in_convex_hull(p: &[BigRational], points: &[Vec<BigRational>]) -> bool {
    if points.is_empty() {
        return false;
    }
    let n = points.len();
    let rows = p.len() + 1;
    // columns: n weights, then `rows` artificials, then the right-hand side
    let width = n + rows + 1;
    let mut tab: Vec<Vec<BigRational>> = (0..rows)
        .map(|r| {
            let mut row = vec![BigRational::zero(); width];
            for (j, q) in points.iter().enumerate() {
                row[j] = if r < p.len() { q[r].clone() } else { BigRational::one() };
            }
            row[width - 1] = if r < p.len() { p[r].clone() } else { BigRational::one() };
            if row[width - 1].is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[n + r] = BigRational::one();
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + rows).collect();
    loop {
        // reduced cost of the phase-one objective (sum of artificials)
        let entering = (0..n + rows).find(|&j| {
            !basis.contains(&j) && {
                let cost = if j >= n { BigRational::one() } else { BigRational::zero() };
                let z: BigRational = (0..rows)
                    .filter(|&r| basis[r] >= n)
                    .map(|r| tab[r][j].clone())
                    .sum();
                cost - z < BigRational::zero()
            }
        });
        let Some(j) = entering else { break };
        let leaving = (0..rows)
            .filter(|&r| tab[r][j].is_positive())
            .min_by(|&r1, &r2| {
                let a = &tab[r1][width - 1] / &tab[r1][j];
                let b = &tab[r2][width - 1] / &tab[r2][j];
                a.cmp(&b).then(basis[r1].cmp(&basis[r2]))
            });
        let Some(r) = leaving else { break };
        let piv = tab[r][j].clone();
        for x in tab[r].iter_mut() {
            *x = &*x / &piv;
        }
        for i in 0..rows {
            if i != r && !tab[i][j].is_zero() {
                let f = tab[i][j].clone();
                for c in 0..width {
                    let d = &f * &tab[r][c];
                    tab[i][c] -= d;
                }
            }
        }
        basis[r] = j;
    }
    (0..rows).all(|r| basis[r] < n || tab[r][width - 1].is_zero())
}

pub fn in_hull(p: &[BigRational], hull_vertices: &[Vec<BigRational>]) -> bool {
    in_convex_hull(p, hull_vertices)
}

/// `Delta_k / k`.
pub fn periodic_rotation_vector(a: &IntMatrix, p: &PeriodicPoint) -> Result<Vec<BigRational>, RotationError> {
    require_identity(a)?;
    let k = BigRational::from_integer(p.period.into());
    Ok(to_rat_vec(&p.translation).into_iter().map(|x| x / &k).collect())
}

/// `<v, Delta_k> / k` for `A^T v = v`.
pub fn eigen_rotation_number(
    a: &IntMatrix,
    p: &PeriodicPoint,
    v: &[BigInt],
) -> Result<BigRational, RotationError> {
    if v.len() != a.dim() || a.transpose().mul_vec(v) != v {
        return Err(RotationError::NotEigenvectorOne);
    }
    let s: BigInt = v.iter().zip(&p.translation).map(|(x, y)| x * y).sum();
    Ok(BigRational::new(s, p.period.into()))
}

/// Rotation vectors of all periodic points up to period `k`, grouped by period.
pub fn periodic_rotation_vectors(
    m: &TightMap,
    k: u32,
) -> Result<BTreeMap<u32, BTreeSet<Vec<BigRational>>>, crate::Error> {
    require_identity(m.matrix())?;
    let mut out = BTreeMap::new();
    for period in 1..=k {
        let set: BTreeSet<Vec<BigRational>> = crate::graphmap::periodic_points(m, period)?
            .iter()
            .map(|p| periodic_rotation_vector(m.matrix(), p))
            .collect::<Result<_, _>>()?;
        out.insert(period, set);
    }
    Ok(out)
}
