//! Short end-to-end runs of each learner against its environment.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use revealed_lp_core::ellipsoid::{LearnEllipsoid, LearnEllipsoidConfig};
use revealed_lp_core::env::{
    generate_instance, polytope_pool, sample_objective, ConstraintStream, Family, FiniteClassEnv,
    KnownConstraintsEnv,
};
use revealed_lp_core::episode::{run, EpisodeHeader};
use revealed_lp_core::fcp::{enumerate_class, Fcp, DEFAULT_CLASS_CAP};
use revealed_lp_core::learn_edge::{mistake_bound, LearnEdge, LearnEdgeConfig};
use revealed_lp_core::learn_hull::LearnHull;
use revealed_lp_core::rational::{int, ratio};
use revealed_lp_core::Vector;

#[test]
fn learn_edge_stays_sound_and_under_budget() {
    for seed in [2u64, 7] {
        let env = generate_instance(seed, 3, 5, 4).unwrap();
        let edges = env.hidden_edges().unwrap();
        let days = ConstraintStream::new(&env, Family::EdgeBiased, seed).unwrap().take_days(150).unwrap();
        let mut l = LearnEdge::new(env.c().clone(), LearnEdgeConfig::new(4));
        let log = run(&mut l, EpisodeHeader::default(), days, |v| {
            let problems = v.learner.audit(env.hidden(), &edges);
            assert!(problems.is_empty(), "day {}: {problems:?}", v.day);
            Ok(())
        })
        .unwrap();
        assert!(log.mistakes() as u64 <= mistake_bound(edges.len(), 4, 3));
    }
}

#[test]
fn episodes_replay_identically() {
    let env = generate_instance(4, 2, 4, 4).unwrap();
    let go = || {
        let days = ConstraintStream::new(&env, Family::GridNormals, 11).unwrap().take_days(100).unwrap();
        let mut l = LearnHull::new(env.c().clone());
        run(&mut l, EpisodeHeader::default(), days, |_| Ok(())).unwrap()
    };
    assert_eq!(go(), go());
}

#[test]
fn hull_mistakes_are_growth() {
    let env = generate_instance(9, 2, 5, 4).unwrap();
    let days = ConstraintStream::new(&env, Family::VertexAnchored, 3).unwrap().take_days(200).unwrap();
    let mut l = LearnHull::new(env.c().clone());
    let mut size = 0;
    run(&mut l, EpisodeHeader::default(), days, |v| {
        let grew = v.learner.points.len() > size;
        assert_eq!(grew, v.prediction.point != *v.truth);
        size = v.learner.points.len();
        Ok(())
    })
    .unwrap();
}

#[test]
fn ellipsoid_converges_on_small_instance() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = sample_objective(2, 2, 3, &mut rng).unwrap();
    let pool = polytope_pool(5, 2, 4, 3, 50).unwrap();
    let mut env = KnownConstraintsEnv::new(v.clone(), pool, 1).unwrap();
    let mut l = LearnEllipsoid::new(LearnEllipsoidConfig::new(2, 2, 3)).unwrap();
    for _ in 0..400 {
        let (day, x) = env.sample_day().unwrap();
        let p = l.predict(&day).unwrap();
        l.observe(&day, &p, &x).unwrap();
        // The hidden matrix never leaves the ellipsoid.
        assert!(l.state.quadratic_form(&v.flat()).unwrap() <= int(1) + ratio(1, 1_000_000_000));
    }
    for _ in 0..50 {
        let (day, x) = env.sample_day().unwrap();
        assert_eq!(l.predict(&day).unwrap(), x);
    }
}

#[test]
fn fcp_keeps_the_truth() {
    let class = enumerate_class(1, 2, 2, DEFAULT_CLASS_CAP).unwrap();
    let rows = vec![(Vector::from_ints(&[1]), ratio(3, 4)), (Vector::from_ints(&[-1]), ratio(1, 2))];
    let truth = class.index_of(&rows).unwrap();
    let mut env = FiniteClassEnv::new(rows, Vector::from_ints(&[1]), 2, 5).unwrap();
    let days: Vec<_> = (0..40).map(|_| env.next_day().unwrap()).collect();
    let mut f = Fcp::new(class, Vector::from_ints(&[1]), 5).unwrap();
    run(&mut f, EpisodeHeader::default(), days, |v| {
        assert!(v.learner.consistent().contains(&truth));
        Ok(())
    })
    .unwrap();
}
