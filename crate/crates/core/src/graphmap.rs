//! Tight graph maps on the wedge of `b` circles, their lifts to the
//! universal Abelian cover, the defect `sigma`, and periodic points.
//!
//! Edge `e` of the wedge is parametrized by `t in [0, 1]` and mapped at
//! constant speed `d_e = |psi(e)|` along the image word. In the cover
//! (lattice translates of the coordinate unit segments in `R^b`) the lift
//! starts the image path of the edge based at the origin at the origin, so
//! letter `l` of `psi(e)` sits on the lifted edge based at the prefix sum
//! `P_l` (for a positive letter) or `P_l - e_gen` (for an inverse letter,
//! traversed backwards).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bfgroup::{bf_group, BfElement, BfError, BfGroup, TorusPoint};
use crate::freegroup::{Endomorphism, Letter};
use crate::intlinalg::{is_expanding, AdaptedNorm, IntMatrix, Norm, SupNorm};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphMapError {
    #[error("generator {0} has an empty image")]
    DegenerateEdge(usize),
    #[error("A is not expanding")]
    NotExpanding,
    #[error("norm '{0}' has no certified expansion rate for A")]
    NormNotAdapted(String),
    #[error("fixed points of the itinerary {0} are not isolated")]
    NonIsolated(String),
    #[error("itinerary budget of {limit} exceeded")]
    BudgetExceeded { limit: usize },
    #[error(transparent)]
    Bf(#[from] BfError),
}

pub(crate) fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn unit(dim: usize, i: usize) -> Vec<BigInt> {
    (0..dim).map(|j| BigInt::from(u8::from(i == j))).collect()
}

pub(crate) fn to_rat_vec(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().cloned().map(BigRational::from_integer).collect()
}

fn add_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vec(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn fmt_vec<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A point of the wedge. The vertex is stored as `(edge 0, t = 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GraphPoint {
    edge: usize,
    t: BigRational,
}

impl GraphPoint {
    pub fn new(edge: usize, t: BigRational) -> Self {
        assert!(
            !t.is_negative() && t <= BigRational::one(),
            "t must lie in [0, 1]"
        );
        if t.is_zero() || t.is_one() {
            Self::vertex()
        } else {
            Self { edge, t }
        }
    }

    pub fn vertex() -> Self {
        Self {
            edge: 0,
            t: BigRational::zero(),
        }
    }

    pub fn is_vertex(&self) -> bool {
        self.t.is_zero()
    }

    pub fn edge(&self) -> usize {
        self.edge
    }

    pub fn t(&self) -> &BigRational {
        &self.t
    }
}

impl fmt::Display for GraphPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_vertex() {
            write!(f, "vertex")
        } else {
            write!(f, "({}, {})", Letter::pos(self.edge), self.t)
        }
    }
}

/// A point of the cover: `point` on the lifted edge based at `base`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverPoint {
    point: GraphPoint,
    base: Vec<BigInt>,
}

impl CoverPoint {
    /// Point at parameter `t` on the lifted edge `edge` based at `base`;
    /// endpoints become lattice vertices.
    pub fn on_edge(edge: usize, t: BigRational, base: Vec<BigInt>) -> Self {
        if t.is_one() {
            let e = unit(base.len(), edge);
            return Self {
                point: GraphPoint::vertex(),
                base: add_vec(&base, &e),
            };
        }
        Self {
            point: GraphPoint::new(edge, t),
            base,
        }
    }

    pub fn lattice(base: Vec<BigInt>) -> Self {
        Self {
            point: GraphPoint::vertex(),
            base,
        }
    }

    pub fn origin(dim: usize) -> Self {
        Self::lattice(vec![BigInt::zero(); dim])
    }

    /// The cover point with the given coordinates, if they lie on `X~`
    /// (at most one non-integer coordinate).
    pub fn from_iota(coords: &[BigRational]) -> Option<Self> {
        let base: Vec<BigInt> = coords.iter().map(|x| x.floor().to_integer()).collect();
        let frac: Vec<(usize, BigRational)> = coords
            .iter()
            .enumerate()
            .map(|(i, x)| (i, x - x.floor()))
            .filter(|(_, f)| !f.is_zero())
            .collect();
        match frac.as_slice() {
            [] => Some(Self::lattice(base)),
            [(i, f)] => Some(Self::on_edge(*i, f.clone(), base)),
            _ => None,
        }
    }

    pub fn point(&self) -> &GraphPoint {
        &self.point
    }

    pub fn base(&self) -> &[BigInt] {
        &self.base
    }

    /// `base + t e_edge`.
    pub fn iota(&self) -> Vec<BigRational> {
        let mut v = to_rat_vec(&self.base);
        if !self.point.is_vertex() {
            v[self.point.edge] += &self.point.t;
        }
        v
    }

    pub fn translate(&self, n: &[BigInt]) -> Self {
        Self {
            point: self.point.clone(),
            base: add_vec(&self.base, n),
        }
    }
}

impl fmt::Display for CoverPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_vec(&self.iota()))
    }
}

/// One letter of an edge image: the `slot`-th letter of `psi(edge)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub edge: usize,
    pub slot: usize,
    pub inverse: bool,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}{}",
            Letter::pos(self.edge),
            self.slot,
            if self.inverse { "-" } else { "+" }
        )
    }
}

pub fn fmt_itinerary(it: &[Slot]) -> String {
    it.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug)]
pub struct TightMap {
    endo: Endomorphism,
    speeds: Vec<usize>,
    a: IntMatrix,
    /// `prefix[e][l]` = lattice point reached after the first `l` letters of `psi(e)`.
    prefix: Vec<Vec<Vec<BigInt>>>,
}

impl TightMap {
    pub fn new(endo: Endomorphism) -> Result<Self, GraphMapError> {
        let b = endo.rank();
        if let Some(g) = (0..b).find(|&g| endo.image(g).is_empty()) {
            return Err(GraphMapError::DegenerateEdge(g));
        }
        let prefix = (0..b)
            .map(|e| {
                let mut acc = vec![BigInt::zero(); b];
                let mut out = vec![acc.clone()];
                for l in endo.image(e).letters() {
                    acc[l.gen] += l.sign();
                    out.push(acc.clone());
                }
                out
            })
            .collect();
        Ok(Self {
            speeds: endo.images().iter().map(|w| w.len()).collect(),
            a: endo.abelianize(),
            endo,
            prefix,
        })
    }

    pub fn endo(&self) -> &Endomorphism {
        &self.endo
    }

    pub fn rank(&self) -> usize {
        self.endo.rank()
    }

    pub fn speeds(&self) -> &[usize] {
        &self.speeds
    }

    /// Lipschitz constant `max_e d_e`.
    pub fn lipschitz(&self) -> usize {
        self.speeds.iter().copied().max().unwrap_or(0)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.a
    }

    pub fn prefix(&self, edge: usize, l: usize) -> &[BigInt] {
        &self.prefix[edge][l]
    }

    fn slot_of(&self, edge: usize, t: &BigRational) -> (usize, BigRational) {
        let d = self.speeds[edge];
        let u = t * BigRational::from_integer(d.into());
        let l = u.floor().to_integer().to_usize().unwrap_or(0).min(d - 1);
        let s = u - BigRational::from_integer(l.into());
        (l, s)
    }

    /// Lifted edge carrying letter `l` of `psi(edge)`, as (generator, base, inverse).
    pub fn slot_edge(&self, edge: usize, l: usize) -> (usize, Vec<BigInt>, bool) {
        let letter = self.endo.image(edge).letters()[l];
        let p = &self.prefix[edge][l];
        if letter.inverse {
            (letter.gen, sub_vec(p, &unit(self.rank(), letter.gen)), true)
        } else {
            (letter.gen, p.clone(), false)
        }
    }

    pub fn lift_eval(&self, x: &CoverPoint) -> CoverPoint {
        let an = self.a.mul_vec(&x.base);
        if x.point.is_vertex() {
            return CoverPoint::lattice(an);
        }
        let (l, s) = self.slot_of(x.point.edge, &x.point.t);
        let (gen, base, inverse) = self.slot_edge(x.point.edge, l);
        let t = if inverse { BigRational::one() - s } else { s };
        CoverPoint::on_edge(gen, t, add_vec(&an, &base))
    }

    pub fn lift_eval_iter(&self, x: &CoverPoint, k: u32) -> CoverPoint {
        (0..k).fold(x.clone(), |y, _| self.lift_eval(&y))
    }

    pub fn eval(&self, x: &GraphPoint) -> GraphPoint {
        let lifted = CoverPoint {
            point: x.clone(),
            base: vec![BigInt::zero(); self.rank()],
        };
        self.lift_eval(&lifted).point
    }

    /// `sigma(x) = iota f~(x~) - A iota(x~)`, independent of the lift.
    pub fn sigma(&self, x: &GraphPoint) -> Vec<BigRational> {
        let lifted = CoverPoint {
            point: x.clone(),
            base: vec![BigInt::zero(); self.rank()],
        };
        let image = self.lift_eval(&lifted).iota();
        let linear = self.a.mul_rat_vec(&lifted.iota());
        image.iter().zip(linear).map(|(p, q)| p - q).collect()
    }

    /// `sigma` at the breakpoints `j / d_e`, including both edge ends.
    pub fn sigma_breakpoints(&self) -> Vec<(usize, BigRational, Vec<BigRational>)> {
        let mut out = Vec::new();
        for e in 0..self.rank() {
            let d = self.speeds[e];
            let col = to_rat_vec(&self.a.column(e));
            for j in 0..=d {
                let t = rat(j as i64, d as i64);
                let s = to_rat_vec(&self.prefix[e][j])
                    .into_iter()
                    .zip(&col)
                    .map(|(p, c)| p - c * &t)
                    .collect();
                out.push((e, t, s));
            }
        }
        out
    }

    /// `sup ||sigma||` in the given norm; attained at a breakpoint since
    /// `sigma` is piecewise linear and the norm convex.
    pub fn sigma_bound(&self, norm: &dyn Norm) -> BigRational {
        self.sigma_breakpoints()
            .iter()
            .map(|(_, _, s)| norm.norm(s))
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

#[derive(Clone, Debug)]
pub struct SigmaReport {
    /// `sup ||sigma||` in the adapted norm.
    pub c: BigRational,
    pub c_sup: BigRational,
    pub lambda: BigRational,
    pub delta: BigRational,
    /// Expansion rate of the sup norm, when `||A^{-1}||_inf < 1`.
    pub lambda_sup: Option<BigRational>,
    pub delta_sup: Option<BigRational>,
    pub norm: String,
}

pub fn sigma_report(m: &TightMap) -> Result<SigmaReport, GraphMapError> {
    if !is_expanding(m.matrix()) {
        return Err(GraphMapError::NotExpanding);
    }
    let adapted = AdaptedNorm::new(m.matrix()).map_err(|_| GraphMapError::NotExpanding)?;
    let sup = SupNorm::new(m.matrix());
    let c = m.sigma_bound(&adapted);
    let c_sup = m.sigma_bound(&sup);
    let lambda = adapted.lambda().clone();
    let delta = &c / (&lambda - BigRational::one());
    let lambda_sup = sup.expansion().cloned();
    let delta_sup = lambda_sup
        .as_ref()
        .map(|l| &c_sup / (l - BigRational::one()));
    Ok(SigmaReport {
        c,
        c_sup,
        lambda,
        delta,
        lambda_sup,
        delta_sup,
        norm: adapted.describe(),
    })
}

pub fn lift_eval(m: &TightMap, x: &CoverPoint) -> CoverPoint {
    m.lift_eval(x)
}

pub fn eval(m: &TightMap, x: &GraphPoint) -> GraphPoint {
    m.eval(x)
}

#[derive(Clone, Debug)]
pub struct PeriodicPoint {
    pub point: GraphPoint,
    /// Requested period `k`: the point lies in `Fix(phi^k)`.
    pub period: u32,
    pub least_period: u32,
    pub itinerary: Vec<Slot>,
    /// `Delta_k = iota f~^k(x~) - iota(x~)` for the lift based at the origin.
    pub translation: Vec<BigInt>,
    /// Absent when `A` has a root-of-unity eigenvalue.
    pub displacement: Option<BfElement>,
    pub alpha_image: Option<TorusPoint>,
}

/// Default cap on the number of itineraries explored.
pub const DEFAULT_ITINERARY_BUDGET: usize = 5_000_000;

pub fn periodic_points(m: &TightMap, k: u32) -> Result<Vec<PeriodicPoint>, GraphMapError> {
    periodic_points_bounded(m, k, DEFAULT_ITINERARY_BUDGET)
}

struct Search<'a> {
    m: &'a TightMap,
    k: usize,
    budget: usize,
    visited: usize,
    path: Vec<Slot>,
    found: Vec<(GraphPoint, Vec<Slot>, Vec<BigInt>)>,
}

impl Search<'_> {
    fn dfs(&mut self, edge: usize) -> Result<(), GraphMapError> {
        if self.path.len() == self.k {
            if edge == self.path[0].edge {
                self.visited += 1;
                if self.visited > self.budget {
                    return Err(GraphMapError::BudgetExceeded { limit: self.budget });
                }
                self.solve()?;
            }
            return Ok(());
        }
        let letters = self.m.endo.image(edge).letters();
        for (slot, l) in letters.iter().enumerate() {
            self.path.push(Slot {
                edge,
                slot,
                inverse: l.inverse,
            });
            self.dfs(l.gen)?;
            self.path.pop();
        }
        Ok(())
    }

    fn solve(&mut self) -> Result<(), GraphMapError> {
        // composite t -> alpha t + beta on the start edge
        let mut alpha = BigRational::one();
        let mut beta = BigRational::zero();
        let mut base = vec![BigInt::zero(); self.m.rank()];
        for s in &self.path {
            let d = BigRational::from_integer(self.m.speeds[s.edge].into());
            let l = BigRational::from_integer(s.slot.into());
            alpha = &alpha * &d;
            beta = &beta * &d - l;
            if s.inverse {
                alpha = -alpha;
                beta = BigRational::one() - beta;
            }
            let (_, offset, _) = self.m.slot_edge(s.edge, s.slot);
            base = add_vec(&self.m.a.mul_vec(&base), &offset);
        }
        if alpha.is_one() {
            return Err(GraphMapError::NonIsolated(fmt_itinerary(&self.path)));
        }
        let t = &beta / (BigRational::one() - &alpha);
        let point = GraphPoint::new(self.path[0].edge, t);
        if point.is_vertex() {
            if !self.found.iter().any(|(p, _, _)| p.is_vertex()) {
                let zero = vec![BigInt::zero(); self.m.rank()];
                self.found.push((point, self.path.clone(), zero));
            }
        } else {
            self.found.push((point, self.path.clone(), base));
        }
        Ok(())
    }
}

fn least_period(it: &[Slot]) -> u32 {
    let k = it.len();
    (1..=k)
        .find(|&p| k.is_multiple_of(p) && (0..k).all(|i| it[i] == it[i % p]))
        .unwrap_or(k) as u32
}

/// `Fix(phi^k)` in lexicographic itinerary order, failing after `budget`
/// closed itineraries.
pub fn periodic_points_bounded(
    m: &TightMap,
    k: u32,
    budget: usize,
) -> Result<Vec<PeriodicPoint>, GraphMapError> {
    assert!(k >= 1, "period must be positive");
    let group: Option<BfGroup> = bf_group(m.matrix(), k).ok();
    let mut search = Search {
        m,
        k: k as usize,
        budget,
        visited: 0,
        path: Vec::new(),
        found: Vec::new(),
    };
    for e in 0..m.rank() {
        search.dfs(e)?;
    }
    Ok(search
        .found
        .into_iter()
        .map(|(point, itinerary, translation)| {
            let displacement = group
                .as_ref()
                .map(|g| g.reduce(&translation).expect("rank"));
            let alpha_image = displacement.as_ref().map(BfElement::psi);
            PeriodicPoint {
                least_period: if point.is_vertex() { 1 } else { least_period(&itinerary) },
                point,
                period: k,
                itinerary,
                translation,
                displacement,
                alpha_image,
            }
        })
        .collect())
}

/// Distinct displacement classes realized by `Fix(phi^k)`, sorted by SNF coordinates.
pub fn displacement_set(m: &TightMap, k: u32) -> Result<Vec<BfElement>, GraphMapError> {
    bf_group(m.matrix(), k)?;
    let mut out: Vec<BfElement> = periodic_points(m, k)?
        .into_iter()
        .filter_map(|p| p.displacement)
        .collect();
    out.sort_by(|a, b| a.canonical().cmp(b.canonical()));
    out.dedup();
    Ok(out)
}

pub fn alpha(p: &PeriodicPoint) -> Option<&TorusPoint> {
    p.alpha_image.as_ref()
}

/// `Fix(phi^k)` grouped by `alpha` image: each group globally shadows one
/// periodic orbit of the toral endomorphism.
pub fn shadowing_classes(
    m: &TightMap,
    k: u32,
) -> Result<BTreeMap<TorusPoint, Vec<PeriodicPoint>>, GraphMapError> {
    if !is_expanding(m.matrix()) {
        return Err(GraphMapError::NotExpanding);
    }
    let mut classes: BTreeMap<TorusPoint, Vec<PeriodicPoint>> = BTreeMap::new();
    for p in periodic_points(m, k)? {
        let key = p.alpha_image.clone().expect("expanding A has finite BF groups");
        classes.entry(key).or_default().push(p);
    }
    Ok(classes)
}
