mod common;

use std::collections::BTreeSet;

use common::*;
use homdyn::rotation::{
    closed_walk_vectors, hull, in_hull, minimal_loops, periodic_rotation_vectors, rotation_set, transition_matrix,
    Loop,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

type P = Vec<BigRational>;

fn cross(o: &P, a: &P, b: &P) -> BigRational {
    (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
}

fn on_segment(p: &P, a: &P, b: &P) -> bool {
    cross(a, b, p).is_zero()
        && (0..2).all(|i| (&p[i] - &a[i]) * (&p[i] - &b[i]) <= BigRational::zero())
}

fn in_triangle(p: &P, a: &P, b: &P, c: &P) -> bool {
    let s = [cross(a, b, p), cross(b, c, p), cross(c, a, p)];
    s.iter().all(|x| !x.is_negative()) || s.iter().all(|x| !x.is_positive())
}

/// Extreme points by the O(n^4) definition: not in any closed triangle or
/// segment spanned by the other points.
fn extreme_points(points: &[P]) -> BTreeSet<P> {
    let pts: Vec<P> = points.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
    pts.iter()
        .filter(|p| {
            let others: Vec<&P> = pts.iter().filter(|q| q != p).collect();
            for (i, a) in others.iter().enumerate() {
                for (j, b) in others.iter().enumerate().skip(i) {
                    if on_segment(p, a, b) {
                        return false;
                    }
                    for c in others.iter().skip(j + 1) {
                        if cross(a, b, c).is_zero() {
                            continue;
                        }
                        if in_triangle(p, a, b, c) {
                            return false;
                        }
                    }
                }
            }
            true
        })
        .cloned()
        .collect()
}

#[test]
fn column_cardinality_is_word_length() {
    for m in [phi1(), map(&["abABa", "b"]), map(&["a", "b"])] {
        let g = transition_matrix(&m).unwrap();
        for j in 0..2 {
            assert_eq!(g.column_len(j), m.endo().image(j).len());
            let total: usize = (0..2).map(|i| g.entry(i, j).len()).sum();
            assert_eq!(total, m.speeds()[j]);
        }
    }
}

#[test]
fn phi1_transition_matrix() {
    let g = transition_matrix(&phi1()).unwrap();
    assert_eq!(g.translations(0, 0), vec![iv(&[0, 0]), iv(&[1, 0]), iv(&[1, 1])]);
    assert_eq!(g.translations(1, 1), vec![iv(&[-1, -1]), iv(&[-1, 0]), iv(&[0, -1])]);
    assert_eq!(g.translations(1, 0), vec![iv(&[1, 0]), iv(&[2, 0])]);
    assert_eq!(g.translations(0, 1), vec![iv(&[-1, -1]), iv(&[-1, 1])]);
}

#[test]
fn phi1_period_two_vectors_match_pairings() {
    let g = transition_matrix(&phi1()).unwrap();
    let mut brute = BTreeSet::new();
    for s in g.translations(1, 0) {
        for t in g.translations(0, 1) {
            brute.insert(vec![r(1, 2) * BigRational::from_integer(&s[0] + &t[0]), r(1, 2) * BigRational::from_integer(&s[1] + &t[1])]);
        }
    }
    let report = rotation_set(&phi1()).unwrap();
    assert_eq!(report.period2_vectors.iter().cloned().collect::<BTreeSet<_>>(), brute);
    assert_eq!(brute.len(), 4);
    assert!(report.loops.iter().all(|l| l.len() == 1 || l.len() == 2));
    // length-2 closed walks: trace of the squared count matrix
    let count = |i: usize, j: usize| g.entry(i, j).len();
    let trace2: usize = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| count(i, j) * count(j, i)).sum();
    assert_eq!(trace2, 26);
    let elementary2 = report.loops.iter().filter(|l| l.len() == 2).count();
    assert_eq!(elementary2, count(1, 0) * count(0, 1));
}

#[test]
fn hull_matches_brute_force() {
    let report = rotation_set(&phi1()).unwrap();
    let pts: Vec<P> = report.loop_vectors.iter().map(|(_, v)| v.clone()).collect();
    let got: BTreeSet<P> = report.hull_vertices.iter().cloned().collect();
    assert_eq!(got, extreme_points(&pts));
    assert_eq!(got.len(), report.hull_vertices.len());
}

#[test]
fn closed_walks_lie_in_hull() {
    let g = transition_matrix(&phi1()).unwrap();
    let report = rotation_set(&phi1()).unwrap();
    let walks = closed_walk_vectors(&g, 6);
    assert!(walks.len() > 50);
    for (_, v) in &walks {
        assert!(in_hull(v, &report.hull_vertices), "{v:?}");
    }
    // the hull of everything seen is still the same polygon
    let mut all: Vec<P> = walks.iter().map(|(_, v)| v.clone()).collect();
    all.extend(report.hull_vertices.iter().cloned());
    assert_eq!(hull(&all), report.hull_vertices);
}

#[test]
fn periodic_rotation_vectors_lie_in_hull() {
    let m = phi1();
    let g = transition_matrix(&m).unwrap();
    let report = rotation_set(&m).unwrap();
    let walks = closed_walk_vectors(&g, 4);
    let by_period = periodic_rotation_vectors(&m, 4).unwrap();
    for (k, set) in &by_period {
        assert!(!set.is_empty());
        for v in set {
            assert!(in_hull(v, &report.hull_vertices));
            assert!(walks.contains(&(*k as usize, v.clone())), "period {k}: {v:?}");
        }
    }
    let fixed: BTreeSet<P> = report.fixed_point_vectors.iter().cloned().collect();
    assert_eq!(by_period[&1], fixed);
}

#[test]
fn hull_idempotence() {
    let report = rotation_set(&phi1()).unwrap();
    assert_eq!(hull(&report.hull_vertices), report.hull_vertices);
    let mut pts = report.hull_vertices.clone();
    pts.extend(report.loop_vectors.iter().map(|(_, v)| v.clone()));
    assert_eq!(hull(&pts), report.hull_vertices);
}

#[test]
fn concatenated_loops_average() {
    let g = transition_matrix(&phi1()).unwrap();
    let loops = minimal_loops(&g);
    let at_a: Vec<&Loop> = loops.iter().filter(|l| l.transitions[0].from == 0).collect();
    for l1 in &at_a {
        for l2 in &at_a {
            let mut ts = l1.transitions.clone();
            ts.extend(l2.transitions.iter().cloned());
            let cat = Loop { transitions: ts };
            let (n1, n2) = (l1.len() as i64, l2.len() as i64);
            let expected: P = l1
                .rotation_vector()
                .iter()
                .zip(l2.rotation_vector())
                .map(|(x, y)| (x * r(n1, 1) + y * r(n2, 1)) / r(n1 + n2, 1))
                .collect();
            assert_eq!(cat.rotation_vector(), expected);
        }
    }
}

#[test]
fn identity_map_rotation_set() {
    let report = rotation_set(&map(&["a", "b"])).unwrap();
    assert_eq!(report.hull_vertices, vec![rv(&[(0, 1), (0, 1)])]);
}

fn point_cloud() -> impl Strategy<Value = Vec<P>> {
    proptest::collection::vec((-6i64..=6, -6i64..=6, 1i64..=3), 1..14)
        .prop_map(|v| v.into_iter().map(|(x, y, d)| vec![r(x, d), r(y, d)]).collect())
}

proptest! {
    #[test]
    fn hull_properties(pts in point_cloud()) {
        let h = hull(&pts);
        let expected = extreme_points(&pts);
        if expected.len() >= 3 {
            prop_assert_eq!(h.iter().cloned().collect::<BTreeSet<_>>(), expected);
        }
        prop_assert_eq!(hull(&h), h.clone());
        for p in &pts {
            prop_assert!(in_hull(p, &h));
        }
    }
}
