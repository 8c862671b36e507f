//! The semiconjugacy `beta~ = lim A^{-n} iota f~^n`: exact values at
//! breakpoints, tail bounds, eigen-direction projections, and the
//! injectivity certificate.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::graphmap::{sigma_report, CoverPoint, GraphMapError, TightMap};
use crate::intlinalg::{dot, is_expanding, kernel_vector, AdaptedNorm, IntMatrix, Norm, RatMatrix};
use crate::freegroup::Letter;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemiconjError {
    #[error("A is not expanding")]
    NotExpanding,
    #[error("exact breakpoints need uniform word expansion")]
    NonUniformExpansion,
    #[error("{0} is not a real eigenvalue of modulus > 1 with a rational eigenvector")]
    ComplexOrSmallEigenvalue(String),
    #[error("norm '{0}' has no certified expansion rate for A")]
    NormNotAdapted(String),
    #[error("shadow graph exceeded {limit} nodes")]
    BudgetExceeded { limit: usize },
    #[error(transparent)]
    GraphMap(#[from] GraphMapError),
}

fn inverse_power(a: &IntMatrix, k: u32) -> Result<RatMatrix, SemiconjError> {
    if !is_expanding(a) {
        return Err(SemiconjError::NotExpanding);
    }
    let inv = a.to_rat().inverse().map_err(|_| SemiconjError::NotExpanding)?;
    Ok(inv.pow(k))
}

/// `sign(letter) A^{-k} e_gen`.
pub fn kappa(m: &TightMap, letter: Letter, k: u32) -> Result<Vec<BigRational>, SemiconjError> {
    let inv = inverse_power(m.matrix(), k)?;
    let col: Vec<BigRational> = (0..m.rank()).map(|i| inv.get(i, letter.gen).clone()).collect();
    Ok(if letter.inverse {
        col.into_iter().map(|x| -x).collect()
    } else {
        col
    })
}

/// Exact `beta~` at the level-`k` breakpoints `i / M^k` of every edge based at the origin.
#[derive(Clone, Debug)]
pub struct BetaApproximation {
    pub level: u32,
    pub expansion: usize,
    /// `values[e][i] = beta~(i / M^k on edge e)`, `i = 0..=M^k`.
    pub values: Vec<Vec<Vec<BigRational>>>,
    pub tail_bound: BigRational,
}

impl BetaApproximation {
    pub fn breakpoints_per_edge(&self) -> usize {
        self.expansion.pow(self.level)
    }

    pub fn t(&self, i: usize) -> BigRational {
        BigRational::new(i.into(), self.breakpoints_per_edge().into())
    }

    /// `beta~` at breakpoint `i` of the lifted edge `edge` based at `base`.
    pub fn value_at(&self, edge: usize, i: usize, base: &[BigInt]) -> Vec<BigRational> {
        self.values[edge][i]
            .iter()
            .zip(base)
            .map(|(v, n)| v + BigRational::from_integer(n.clone()))
            .collect()
    }
}

pub fn beta_breakpoints(m: &TightMap, k: u32) -> Result<BetaApproximation, SemiconjError> {
    let expansion = m
        .endo()
        .uniform_expansion()
        .ok_or(SemiconjError::NonUniformExpansion)?;
    let inv = inverse_power(m.matrix(), k)?;
    let tail_bound = tail_bound(m, k)?;
    let b = m.rank();
    let values = (0..b)
        .map(|e| {
            let word = m.endo().power(k).image(e).clone();
            let mut acc = vec![BigInt::zero(); b];
            let mut out = vec![inv.mul_int_vec(&acc)];
            for l in word.letters() {
                acc[l.gen] += l.sign();
                out.push(inv.mul_int_vec(&acc));
            }
            out
        })
        .collect();
    Ok(BetaApproximation {
        level: k,
        expansion,
        values,
        tail_bound,
    })
}

/// `tau_k = delta(f) / lambda^k` in the adapted norm.
pub fn tail_bound(m: &TightMap, k: u32) -> Result<BigRational, SemiconjError> {
    let r = sigma_report(m).map_err(|e| match e {
        GraphMapError::NotExpanding => SemiconjError::NotExpanding,
        other => other.into(),
    })?;
    Ok(r.delta / num_traits::pow(r.lambda, k as usize))
}

/// Rational eigenvector of `A^T` for the integer eigenvalue `mu`.
pub fn left_eigenvector(a: &IntMatrix, mu: &BigInt) -> Result<Vec<BigRational>, SemiconjError> {
    let bad = || SemiconjError::ComplexOrSmallEigenvalue(mu.to_string());
    if mu.abs() <= BigInt::one() {
        return Err(bad());
    }
    let n = a.dim();
    let at = a.transpose();
    let entries = (0..n)
        .flat_map(|i| {
            let at = &at;
            (0..n).map(move |j| {
                let d = if i == j { mu.clone() } else { BigInt::zero() };
                BigRational::from_integer(at.get(i, j) - d)
            })
        })
        .collect();
    kernel_vector(&RatMatrix::new(n, entries).expect("square")).ok_or_else(bad)
}

/// `beta_mu = <v_mu, beta~>` at every breakpoint, per edge.
pub fn beta_mu(
    m: &TightMap,
    approx: &BetaApproximation,
    mu: &BigInt,
) -> Result<Vec<Vec<BigRational>>, SemiconjError> {
    let v = left_eigenvector(m.matrix(), mu)?;
    Ok(approx
        .values
        .iter()
        .map(|edge| edge.iter().map(|b| dot(&v, b)).collect())
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct HolderBound {
    /// `min(log lambda / log L, 1)`.
    pub value: f64,
    /// Exact value when it is rational.
    pub exact: Option<BigRational>,
    pub lambda: BigRational,
    pub lipschitz: usize,
}

pub fn holder_bound(m: &TightMap) -> Result<HolderBound, SemiconjError> {
    if !is_expanding(m.matrix()) {
        return Err(SemiconjError::NotExpanding);
    }
    let lambda = AdaptedNorm::new(m.matrix())
        .map_err(|_| SemiconjError::NotExpanding)?
        .lambda()
        .clone();
    let l = m.lipschitz();
    let big_l = BigRational::from_integer(l.into());
    if lambda >= big_l {
        return Ok(HolderBound {
            value: 1.0,
            exact: Some(BigRational::one()),
            lambda,
            lipschitz: l,
        });
    }
    let lf = lambda.to_f64().unwrap_or(1.0);
    let value = lf.ln() / (l as f64).ln();
    // log lambda / log L = p/q exactly iff lambda^q = L^p
    let exact = (1..=64u32).find_map(|q| {
        let p = (value * q as f64).round() as usize;
        (p > 0 && num_traits::pow(lambda.clone(), q as usize) == num_traits::pow(big_l.clone(), p))
            .then(|| BigRational::new(p.into(), q.into()))
    });
    Ok(HolderBound {
        value,
        exact,
        lambda,
        lipschitz: l,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InjectivityStatus {
    CertifiedInjective,
    /// Distinct cover points with the same image under `f~`, hence the same `beta~`.
    NotInjective {
        x: CoverPoint,
        y: CoverPoint,
        image: CoverPoint,
    },
    Unknown,
}

impl fmt::Display for InjectivityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InjectivityStatus::CertifiedInjective => write!(f, "CERTIFIED_INJECTIVE"),
            InjectivityStatus::NotInjective { .. } => write!(f, "NOT_INJECTIVE"),
            InjectivityStatus::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InjectivityCertificate {
    pub status: InjectivityStatus,
    /// Refinement level at which the verdict was reached.
    pub depth: u32,
    pub delta: BigRational,
    pub norm: String,
    /// Pair nodes in the last graph built.
    pub nodes: usize,
}

pub const DEFAULT_SHADOW_DEPTH: u32 = 12;
pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

/// Certificate in the adapted norm.
pub fn shadow_pairs(m: &TightMap, depth: u32) -> Result<InjectivityCertificate, SemiconjError> {
    if !is_expanding(m.matrix()) {
        return Err(SemiconjError::NotExpanding);
    }
    let norm = AdaptedNorm::new(m.matrix()).map_err(|_| SemiconjError::NotExpanding)?;
    shadow_pairs_with(m, depth, &norm, DEFAULT_NODE_BUDGET)
}

/// A level-`N` cell: `base + [index, index + 1] / M^N` along `edge`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Cell {
    edge: usize,
    base: Vec<i64>,
    index: i64,
}

struct Level<'a> {
    m: &'a TightMap,
    norm: &'a dyn Norm,
    scale: i64,
    expansion: i64,
    bound: BigRational,
}

impl Level<'_> {
    fn endpoints(&self, c: &Cell) -> [Vec<BigRational>; 2] {
        let s = BigRational::from_integer(self.scale.into());
        let mk = |i: i64| {
            let mut v: Vec<BigRational> = c.base.iter().map(|&x| BigRational::from_integer(x.into())).collect();
            v[c.edge] += BigRational::from_integer(i.into()) / &s;
            v
        };
        [mk(c.index), mk(c.index + 1)]
    }

    fn midpoint(&self, c: &Cell) -> CoverPoint {
        let t = BigRational::new((2 * c.index + 1).into(), (2 * self.scale).into());
        CoverPoint::on_edge(c.edge, t, c.base.iter().map(|&x| x.into()).collect())
    }

    /// The level `N - 1` cell `f~(c)`, as (edge, base, index at level `N - 1`).
    fn image(&self, c: &Cell) -> Cell {
        let y = self.m.lift_eval(&self.midpoint(c));
        let coarse = self.scale / self.expansion;
        let idx = (y.point().t() * BigRational::from_integer(coarse.into()))
            .floor()
            .to_integer()
            .to_i64()
            .expect("small");
        Cell {
            edge: y.point().edge(),
            base: y.base().iter().map(|x| x.to_i64().expect("small")).collect(),
            index: idx,
        }
    }

    fn subcells(&self, coarse: &Cell) -> impl Iterator<Item = Cell> + '_ {
        let c = coarse.clone();
        (0..self.expansion).map(move |r| Cell {
            edge: c.edge,
            base: c.base.clone(),
            index: c.index * self.expansion + r,
        })
    }

    fn lower_bound(&self, c1: &Cell, c2: &Cell) -> BigRational {
        let s = BigRational::from_integer(self.scale.into());
        let n: Vec<BigRational> = c1
            .base
            .iter()
            .zip(&c2.base)
            .map(|(a, b)| BigRational::from_integer((a - b).into()))
            .collect();
        let r1 = (
            BigRational::from_integer(c1.index.into()) / &s,
            BigRational::from_integer((c1.index + 1).into()) / &s,
        );
        let r2 = (
            BigRational::from_integer(c2.index.into()) / &s,
            BigRational::from_integer((c2.index + 1).into()) / &s,
        );
        let mut best = BigRational::zero();
        for f in self.norm.functionals() {
            let base = dot(f, &n);
            let (a_lo, a_hi) = scaled(&f[c1.edge], &r1);
            let (b_lo, b_hi) = scaled(&f[c2.edge], &r2);
            let lo = &base + a_lo - b_hi;
            let hi = &base + a_hi - b_lo;
            let d = if lo.is_positive() {
                lo
            } else if hi.is_negative() {
                -hi
            } else {
                BigRational::zero()
            };
            if d > best {
                best = d;
            }
        }
        best
    }

    fn normalize(&self, c1: &Cell, c2: &Cell) -> (Cell, Cell) {
        let shift = c1.base.clone();
        let sub = |c: &Cell| Cell {
            edge: c.edge,
            base: c.base.iter().zip(&shift).map(|(a, b)| a - b).collect(),
            index: c.index,
        };
        (sub(c1), sub(c2))
    }

    /// Cells `c2 != c1` with `lower_bound(c1, c2) <= bound`.
    fn partners(&self, c1: &Cell, radius: &BigRational) -> Vec<Cell> {
        let b = c1.base.len();
        let [p0, p1] = self.endpoints(c1);
        let lo: Vec<BigRational> = (0..b).map(|j| p0[j].clone().min(p1[j].clone()) - radius).collect();
        let hi: Vec<BigRational> = (0..b).map(|j| p0[j].clone().max(p1[j].clone()) + radius).collect();
        let s = BigRational::from_integer(self.scale.into());
        let mut out = Vec::new();
        for e2 in 0..b {
            let ranges: Vec<(i64, i64)> = (0..b)
                .map(|j| {
                    let from = lo[j].floor().to_integer().to_i64().expect("small")
                        - i64::from(j == e2);
                    let to = hi[j].ceil().to_integer().to_i64().expect("small");
                    (from, to)
                })
                .collect();
            let mut base: Vec<i64> = ranges.iter().map(|r| r.0).collect();
            loop {
                let fits = (0..b).all(|j| {
                    j == e2 || {
                        let x = BigRational::from_integer(base[j].into());
                        x >= lo[j] && x <= hi[j]
                    }
                });
                if fits {
                    let n = BigRational::from_integer(base[e2].into());
                    let first = ((&lo[e2] - &n) * &s).ceil().to_integer().to_i64().expect("small") - 1;
                    let last = ((&hi[e2] - &n) * &s).floor().to_integer().to_i64().expect("small");
                    for index in first.max(0)..=last.min(self.scale - 1) {
                        let c2 = Cell {
                            edge: e2,
                            base: base.clone(),
                            index,
                        };
                        if &c2 != c1 && self.lower_bound(c1, &c2) <= self.bound {
                            out.push(c2);
                        }
                    }
                }
                if !advance(&mut base, &ranges) {
                    break;
                }
            }
        }
        out.sort();
        out
    }

    fn shared_point(&self, c1: &Cell, c2: &Cell) -> Option<Vec<BigRational>> {
        let e1 = self.endpoints(c1);
        let e2 = self.endpoints(c2);
        e1.into_iter().find(|p| e2.contains(p))
    }

    /// Preimage in `c` of an endpoint or the midpoint of `f~(c)`.
    fn preimage(&self, c: &Cell, z: &[BigRational]) -> CoverPoint {
        for p in self.endpoints(c) {
            let cp = CoverPoint::from_iota(&p).expect("on X~");
            if self.m.lift_eval(&cp).iota() == z {
                return cp;
            }
        }
        self.midpoint(c)
    }

    fn witness(&self, c1: &Cell, c2: &Cell) -> Option<InjectivityStatus> {
        let l1 = self.image(c1);
        let l2 = self.image(c2);
        let coarse = Level {
            m: self.m,
            norm: self.norm,
            scale: self.scale / self.expansion,
            expansion: self.expansion,
            bound: self.bound.clone(),
        };
        if l1 == l2 {
            let z = coarse.midpoint(&l1);
            return Some(InjectivityStatus::NotInjective {
                x: self.midpoint(c1),
                y: self.midpoint(c2),
                image: z,
            });
        }
        let z = coarse.shared_point(&l1, &l2)?;
        if let Some(w) = self.shared_point(c1, c2) {
            let w = CoverPoint::from_iota(&w).expect("on X~");
            if self.m.lift_eval(&w).iota() == z {
                return None;
            }
        }
        Some(InjectivityStatus::NotInjective {
            x: self.preimage(c1, &z),
            y: self.preimage(c2, &z),
            image: CoverPoint::from_iota(&z).expect("on X~"),
        })
    }

    fn touches(&self, c: &Cell, z: &[BigRational]) -> bool {
        self.endpoints(c).iter().any(|p| p.as_slice() == z)
    }
}

/// Odometer step over the box `ranges`; false once exhausted.
fn advance(v: &mut [i64], ranges: &[(i64, i64)]) -> bool {
    for (x, r) in v.iter_mut().zip(ranges) {
        if *x < r.1 {
            *x += 1;
            return true;
        }
        *x = r.0;
    }
    false
}

fn scaled(f: &BigRational, r: &(BigRational, BigRational)) -> (BigRational, BigRational) {
    let a = f * &r.0;
    let b = f * &r.1;
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

enum LevelOutcome {
    Witness(InjectivityStatus),
    Clean,
    Cycles,
}

/// Injectivity certificate of `beta~` in the given norm, refining the cell
/// level up to `depth`.
///
/// Two distinct points with equal `beta~` have forward orbits staying within
/// `2 delta` of each other. Cell pairs within that bound form a finite graph
/// modulo deck translations; pairs whose images meet at a point that is not
/// the image of a common point are exact non-injectivity witnesses, and if
/// no cycle uses an edge other than those following a shared corner, no
/// such orbit pair exists.
pub fn shadow_pairs_with(
    m: &TightMap,
    depth: u32,
    norm: &dyn Norm,
    budget: usize,
) -> Result<InjectivityCertificate, SemiconjError> {
    let lambda = norm
        .expansion()
        .cloned()
        .ok_or_else(|| SemiconjError::NormNotAdapted(norm.name().to_string()))?;
    let c = m.sigma_bound(norm);
    let delta = &c / (&lambda - BigRational::one());
    let mut cert = InjectivityCertificate {
        status: InjectivityStatus::Unknown,
        depth: 0,
        delta: delta.clone(),
        norm: norm.describe(),
        nodes: 0,
    };
    if c.is_zero() {
        // f~ agrees with the injective linear map A on X~
        cert.status = InjectivityStatus::CertifiedInjective;
        return Ok(cert);
    }
    let expansion = m
        .endo()
        .uniform_expansion()
        .ok_or(SemiconjError::NonUniformExpansion)? as i64;
    let bound = &delta + &delta;
    let radius = &bound * norm.sup_factor();
    let mut scale = 1i64;
    for level in 1..=depth {
        scale = scale
            .checked_mul(expansion)
            .ok_or(SemiconjError::BudgetExceeded { limit: budget })?;
        let lv = Level {
            m,
            norm,
            scale,
            expansion,
            bound: bound.clone(),
        };
        cert.depth = level;
        match explore(&lv, &radius, budget, &mut cert.nodes)? {
            LevelOutcome::Witness(w) => {
                cert.status = w;
                return Ok(cert);
            }
            LevelOutcome::Clean => {
                cert.status = InjectivityStatus::CertifiedInjective;
                return Ok(cert);
            }
            LevelOutcome::Cycles => {}
        }
    }
    Ok(cert)
}

fn explore(
    lv: &Level<'_>,
    radius: &BigRational,
    budget: usize,
    node_count: &mut usize,
) -> Result<LevelOutcome, SemiconjError> {
    let b = lv.m.rank();
    let mut ids: HashMap<(Cell, Cell), usize> = HashMap::new();
    let mut nodes: Vec<(Cell, Cell)> = Vec::new();
    for e in 0..b {
        for index in 0..lv.scale {
            let c1 = Cell {
                edge: e,
                base: vec![0; b],
                index,
            };
            for c2 in lv.partners(&c1, radius) {
                if let Some(w) = lv.witness(&c1, &c2) {
                    return Ok(LevelOutcome::Witness(w));
                }
                ids.insert((c1.clone(), c2.clone()), nodes.len());
                nodes.push((c1.clone(), c2));
                if nodes.len() > budget {
                    return Err(SemiconjError::BudgetExceeded { limit: budget });
                }
            }
        }
    }
    *node_count = nodes.len();

    let mut graph: DiGraph<(), bool> = DiGraph::new();
    let handles: Vec<_> = (0..nodes.len()).map(|_| graph.add_node(())).collect();
    for (i, (c1, c2)) in nodes.iter().enumerate() {
        let l1 = lv.image(c1);
        let l2 = lv.image(c2);
        let corner = lv.shared_point(c1, c2).map(|w| {
            let w = CoverPoint::from_iota(&w).expect("on X~");
            lv.m.lift_eval(&w).iota()
        });
        for d1 in lv.subcells(&l1) {
            for d2 in lv.subcells(&l2) {
                let key = lv.normalize(&d1, &d2);
                let Some(&j) = ids.get(&key) else { continue };
                let is_corner = corner
                    .as_ref()
                    .is_some_and(|z| lv.touches(&d1, z) && lv.touches(&d2, z));
                graph.add_edge(handles[i], handles[j], is_corner);
            }
        }
    }
    let mut component = vec![0usize; nodes.len()];
    for (ci, scc) in tarjan_scc(&graph).iter().enumerate() {
        for n in scc {
            component[n.index()] = ci;
        }
    }
    let recurrent = graph.edge_indices().any(|e| {
        let (s, t) = graph.edge_endpoints(e).expect("edge");
        !graph[e] && component[s.index()] == component[t.index()]
    });
    Ok(if recurrent {
        LevelOutcome::Cycles
    } else {
        LevelOutcome::Clean
    })
}

/// `beta~` approximated by `A^{-n} iota f~^n(x~)`, within `tail_bound(n)` of the true value.
pub fn beta_series(m: &TightMap, x: &CoverPoint, n: u32) -> Result<Vec<BigRational>, SemiconjError> {
    let inv = inverse_power(m.matrix(), n)?;
    Ok(inv.mul_vec(&m.lift_eval_iter(x, n).iota()))
}
