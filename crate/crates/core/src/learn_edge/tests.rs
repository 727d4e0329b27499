use super::*;
use crate::geometry::EdgeSpace;
use crate::linalg::solve;
use crate::rational::{int, ratio};
use proptest::prelude::*;

fn axis(i: usize, d: usize) -> EdgeSpace {
    EdgeSpace::new(&Vector::zeros(d), &Vector::unit(d, i)).unwrap()
}

fn hp(normal: &[i64], num: i64, den: i64) -> Hyperplane {
    Hyperplane::new(Vector::from_ints(normal), ratio(num, den)).unwrap()
}

fn learner_with(c: &[i64], edges: Vec<EdgeKnowledge>) -> LearnEdge {
    let mut l = LearnEdge::new(Vector::from_ints(c), LearnEdgeConfig::new(4));
    l.edges = edges;
    l
}

#[test]
fn candidate_is_line_hyperplane_meet() {
    let l = learner_with(&[1, 1], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    let cand = l.candidate_set(&hp(&[1, 0], 1, 2));
    assert_eq!(cand, vec![Vector::from_ratios(&[(1, 2), (0, 1)])]);
}

#[test]
fn contained_edge_contributes_nothing() {
    let mut l = learner_with(
        &[1, 1],
        vec![
            EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1)),
            EdgeKnowledge::new(axis(1, 2), &[int(0)], &int(1)),
        ],
    );
    l.x.insert(Vector::from_ratios(&[(1, 4), (0, 1)]));
    // y = 0 contains the x-axis, so neither that line nor X points on it count.
    let cand = l.candidate_set(&hp(&[0, 1], 0, 1));
    assert_eq!(cand, vec![Vector::from_ints(&[0, 0])]);
}

/// An edge-space of the cube `[-1, 1]^3` as the two face planes it lies on.
fn cube_edge(fixed: [(usize, i64); 2]) -> (EdgeSpace, [Hyperplane; 2]) {
    let free = (0..3).find(|i| fixed.iter().all(|(j, _)| j != i)).unwrap();
    let mut base = Vector::zeros(3);
    for (j, s) in fixed {
        base.0[j] = int(s);
    }
    let planes = fixed.map(|(j, s)| Hyperplane::new(Vector::unit(3, j), int(s)).unwrap());
    (EdgeSpace::new(&base, &Vector::unit(3, free)).unwrap(), planes)
}

proptest! {
    #[test]
    fn cube_candidates_match_plane_solves(
        a in prop::collection::vec(-3i64..=3, 3),
        b in -4i64..=4,
    ) {
        prop_assume!(a.iter().any(|&v| v != 0));
        let h = hp(&a, b, 2);
        let picked = [[(1, 1), (2, 1)], [(0, 1), (2, -1)], [(0, -1), (1, 1)]].map(cube_edge);
        let l = learner_with(
            &[1, 2, 3],
            picked.iter().map(|(s, _)| EdgeKnowledge::new(s.clone(), &[int(0)], &int(1))).collect(),
        );
        let mut expected: Vec<Vector> = picked
            .iter()
            .filter_map(|(_, [p, q])| {
                let rows = [p.normal.clone(), q.normal.clone(), h.normal.clone()];
                solve(&rows, &[p.offset.clone(), q.offset.clone(), h.offset.clone()])
            })
            .collect();
        expected.sort();
        expected.dedup();
        prop_assert_eq!(l.candidate_set(&h), expected);
    }
}

#[test]
fn ext_respects_midpoint_window() {
    let l = learner_with(&[1, 1], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    let k = &l.edges[0];
    assert_eq!((k.midpoint(Side::Lower), k.midpoint(Side::Upper)), (ratio(-1, 2), ratio(1, 2)));
    assert_eq!(l.extended_feasible(&hp(&[1, 0], 1, 4)), vec![Vector::from_ratios(&[(1, 4), (0, 1)])]);
    assert!(l.extended_feasible(&hp(&[1, 0], 3, 4)).is_empty());
}

fn knowledge(space: EdgeSpace, f: (i64, i64), lo: i64, hi: i64, closed: (bool, bool)) -> EdgeKnowledge {
    let mut k = EdgeKnowledge::new(space, &[ratio(f.0, 8), ratio(f.1, 8)], &int(1));
    k.lower = Boundary { at: ratio(lo, 8).min(k.f_lo.clone()), closed: closed.0 };
    k.upper = Boundary { at: ratio(hi, 8).max(k.f_hi.clone()), closed: closed.1 };
    k
}

proptest! {
    #[test]
    fn ext_is_cand_within_windows(
        f0 in (-4i64..=4, -4i64..=4), f1 in (-4i64..=4, -4i64..=4),
        y0 in (-12i64..=0, 0i64..=12), y1 in (-12i64..=0, 0i64..=12),
        closed in any::<(bool, bool)>(),
        a in (-3i64..=3, -3i64..=3), b in -8i64..=8,
        xs in prop::collection::vec((-8i64..=8, -8i64..=8), 0..4),
    ) {
        prop_assume!(a != (0, 0));
        let diag = EdgeSpace::new(&Vector::zeros(2), &Vector::from_ints(&[1, 1])).unwrap();
        let sort = |p: (i64, i64)| (p.0.min(p.1), p.0.max(p.1));
        let mut l = learner_with(&[1, 2], vec![
            knowledge(axis(0, 2), sort(f0), y0.0, y0.1, closed),
            knowledge(diag, sort(f1), y1.0, y1.1, closed),
        ]);
        for (u, v) in xs {
            l.x.insert(Vector::from_ratios(&[(u, 8), (v, 8)]));
        }
        let h = hp(&[a.0, a.1], b, 8);
        let cand = l.candidate_set(&h);
        let expected: Vec<Vector> = cand
            .iter()
            .filter(|p| {
                l.x.contains(*p)
                    || l.edges.iter().any(|k| {
                        let Some(t) = k.space.param_of(p) else { return false };
                        let m0 = (&k.lower.at + &k.f_lo) / int(2);
                        let m1 = (&k.f_hi + &k.upper.at) / int(2);
                        h.normal.dot(&k.space.direction) != int(0) && m0 <= t && t <= m1
                    })
            })
            .cloned()
            .collect();
        prop_assert_eq!(l.extended_feasible(&h), expected);
    }
}

#[test]
fn p1_uses_recorded_optimum() {
    let mut l = learner_with(&[1, 1], vec![]);
    l.x_star = Some(Vector::from_ints(&[1, 1]));
    let p = l.predict_point(&Halfspace::from_ints(&[1, 1], 3, 1)).unwrap();
    assert_eq!(p, Prediction::new(Vector::from_ints(&[1, 1]), "P1"));
}

#[test]
fn p2_on_empty_state() {
    let l = learner_with(&[1, 1], vec![]);
    let p = l.predict_point(&Halfspace::from_ints(&[1, 1], 3, 1)).unwrap();
    assert_eq!(p, Prediction::new(Vector::from_ints(&[2, 2]), "P2"));
}

#[test]
fn p2_when_every_candidate_is_known_infeasible() {
    let l = learner_with(&[1, 1], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    let p = l.predict_point(&Halfspace::from_ints(&[1, 0], 3, 2)).unwrap();
    assert_eq!(p.rule, Some("P2"));
}

#[test]
fn p3_matches_explicit_ext_argmax() {
    let mut l = learner_with(&[1, 1], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    l.x.insert(Vector::from_ratios(&[(1, 4), (-1, 2)]));
    l.x.insert(Vector::from_ratios(&[(1, 8), (1, 1)]));
    let h = Halfspace::from_ints(&[1, 0], 1, 4);
    // Ext by hand: the axis meets x = 1/4 inside (-1/2, 1/2), plus the X point on x = 1/4.
    let ext = [Vector::from_ratios(&[(1, 4), (0, 1)]), Vector::from_ratios(&[(1, 4), (-1, 2)])];
    let best = ext.iter().max_by_key(|p| l.c.dot(p)).unwrap().clone();
    assert_eq!(l.predict_point(&h).unwrap(), Prediction::new(best, "P3"));
}

#[test]
fn p4_falls_back_to_cand_minimum() {
    let l = learner_with(
        &[1, 1],
        vec![
            EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1)),
            EdgeKnowledge::new(axis(1, 2), &[int(0)], &int(1)),
        ],
    );
    // x + y = 7/8 meets both axes past their midpoints, inside Q.
    let p = l.predict_point(&Halfspace::from_ints(&[1, 1], 7, 8)).unwrap();
    assert_eq!(p, Prediction::new(Vector::from_ratios(&[(0, 1), (7, 8)]), "P4"));
}

#[test]
fn u1_records_interior_optimum() {
    let mut l = learner_with(&[1, 1], vec![]);
    let r = l
        .update(&Halfspace::from_ints(&[1, 1], 3, 1), &Vector::from_ints(&[2, 2]), &Vector::from_ints(&[1, 1]))
        .unwrap();
    assert_eq!(r.rule, "U1");
    assert_eq!(l.x_star, Some(Vector::from_ints(&[1, 1])));
}

#[test]
fn u2_certifies_collinear_triple() {
    let mut l = learner_with(&[1, 1], vec![]);
    l.x.insert(Vector::from_ints(&[0, 0]));
    l.x.insert(Vector::from_ints(&[1, 0]));
    let obs = Vector::from_ratios(&[(1, 2), (0, 1)]);
    let r = l.update(&Halfspace::from_ints(&[1, 0], 1, 2), &Vector::from_ints(&[2, 2]), &obs).unwrap();
    assert_eq!(r.rule, "U2");
    assert_eq!(r.new_edge, Some(axis(0, 2)));
    assert_eq!((l.edges[0].f_lo.clone(), l.edges[0].f_hi.clone()), (int(0), int(1)));
}

#[test]
fn u3_halves_upper_interval() {
    let mut l = learner_with(&[1, 0], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    l.x.insert(Vector::from_ints(&[0, 0]));
    let pred = Vector::from_ratios(&[(1, 4), (0, 1)]);
    let r = l.update(&Halfspace::from_ints(&[1, 0], 0, 1), &pred, &Vector::from_ints(&[0, 0])).unwrap();
    assert_eq!(r.rule, "U3");
    // Q1 goes from [0, 1] to [0, 1/4): squared lengths 1 and 1/16.
    assert_eq!(r.progress, Some((int(1), ratio(1, 16))));
    assert_eq!(r.halved(), Some(true));
    assert_eq!(l.edges[0].upper, Boundary { at: ratio(1, 4), closed: true });
}

#[test]
fn u4_grows_feasible_interval() {
    let mut l = learner_with(&[1, 0], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    let obs = Vector::from_ratios(&[(1, 4), (0, 1)]);
    let r = l.update(&Halfspace::from_ints(&[1, 0], 1, 4), &Vector::from_ints(&[0, 1]), &obs).unwrap();
    assert_eq!(r.rule, "U4");
    assert_eq!(l.edges[0].f_hi, ratio(1, 4));
}

#[test]
fn tied_prediction_is_treated_as_infeasible() {
    let mut l = learner_with(&[1, 1], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    let truth = Vector::from_ratios(&[(0, 1), (1, 4)]);
    l.x.insert(Vector::from_ints(&[0, 0]));
    l.x.insert(truth.clone());
    let pred = Vector::from_ratios(&[(1, 4), (0, 1)]);
    let r = l.update(&Halfspace::from_ints(&[1, 1], 1, 4), &pred, &truth).unwrap();
    assert_eq!(r.rule, "U3");
    assert_eq!(l.edges[0].upper, Boundary { at: ratio(1, 4), closed: true });
}

#[test]
fn tied_prediction_off_every_edge_is_invariant_violation() {
    let mut l = learner_with(&[1, 0], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    l.x.insert(Vector::from_ints(&[0, 0]));
    let err = l
        .update(&Halfspace::from_ints(&[1, 0], 0, 1), &Vector::from_ints(&[0, 1]), &Vector::from_ints(&[0, 0]))
        .unwrap_err();
    assert!(matches!(err, Error::Invariant { .. }));
}

#[test]
fn mistake_bound_formula() {
    assert_eq!(ceil_log2_two_sqrt(1), 1);
    assert_eq!(ceil_log2_two_sqrt(3), 2);
    assert_eq!(ceil_log2_two_sqrt(4), 2);
    assert_eq!(ceil_log2_two_sqrt(5), 3);
    // 9 edges, N = 4, d = 3: 1 + 27 + 18 * 8.
    assert_eq!(mistake_bound(9, 4, 3), 172);
}

#[test]
fn state_round_trips_through_json() {
    let mut l = learner_with(&[1, 0], vec![EdgeKnowledge::new(axis(0, 2), &[int(0)], &int(1))]);
    l.x.insert(Vector::from_ratios(&[(1, 3), (0, 1)]));
    let s = serde_json::to_string(&l).unwrap();
    assert_eq!(serde_json::from_str::<LearnEdge>(&s).unwrap(), l);
}
