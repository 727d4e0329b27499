//! Geometry and LP results against brute-force oracles that share no code
//! with the library beyond `Vector` and rational parsing.

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use revealed_lp_core::env::generate_instance;
use revealed_lp_core::geometry::{check_collinear, enumerate_vertices};
use revealed_lp_core::lp::solve_vertex_lp;
use revealed_lp_core::rational::ratio;
use revealed_lp_core::Vector;

type Q = BigRational;

/// Cramer's rule on a 3x3 system; `None` when singular.
fn cramer3(a: [[Q; 3]; 3], b: [Q; 3]) -> Option<[Q; 3]> {
    let det = |m: &[[Q; 3]; 3]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det(&a);
    if d.is_zero() {
        return None;
    }
    let mut out: [Q; 3] = Default::default();
    for k in 0..3 {
        let mut m = a.clone();
        for r in 0..3 {
            m[r][k] = b[r].clone();
        }
        out[k] = det(&m) / &d;
    }
    Some(out)
}

/// Every feasible intersection of three constraint planes.
fn brute_vertices(rows: &[(Vec<Q>, Q)]) -> Vec<[Q; 3]> {
    let mut out = Vec::new();
    let m = rows.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let a = [i, j, k].map(|r| [rows[r].0[0].clone(), rows[r].0[1].clone(), rows[r].0[2].clone()]);
                let b = [i, j, k].map(|r| rows[r].1.clone());
                if let Some(x) = cramer3(a, b) {
                    let ok = rows.iter().all(|(n, o)| &n[0] * &x[0] + &n[1] * &x[1] + &n[2] * &x[2] <= *o);
                    if ok && !out.contains(&x) {
                        out.push(x);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn vertex_lp_matches_brute_force_on_generated_instances() {
    for seed in 0..100u64 {
        let m = 4 + (seed % 3) as usize;
        let env = generate_instance(1000 + seed, 3, m, 4).unwrap();
        let rows: Vec<(Vec<Q>, Q)> = env
            .hidden()
            .halfspaces()
            .iter()
            .map(|h| (h.normal.coords().to_vec(), h.offset.clone()))
            .collect();
        let verts = brute_vertices(&rows);
        let mut listed: Vec<Vector> = verts.iter().map(|x| Vector::new(x.to_vec())).collect();
        listed.sort();
        assert_eq!(enumerate_vertices(env.hidden()).unwrap(), listed, "seed {seed}");
        let c = env.c();
        let best = listed.iter().max_by(|a, b| c.dot(a).cmp(&c.dot(b)).then(b.cmp(a))).unwrap();
        assert_eq!(&solve_vertex_lp(env.hidden(), c).unwrap().point, best, "seed {seed}");
    }
}

/// Collinear exactly when every 2x2 minor of `[y - x; z - x]` vanishes.
fn collinear_by_minors(x: &Vector, y: &Vector, z: &Vector) -> bool {
    let u = y.sub(x);
    let v = z.sub(x);
    (0..u.dim()).all(|i| (i + 1..u.dim()).all(|j| (&u[i] * &v[j] - &u[j] * &v[i]).is_zero()))
}

fn grid_point(d: usize) -> impl Strategy<Value = Vector> {
    proptest::collection::vec(-2i64..=2, d).prop_map(|c| Vector::new(c.into_iter().map(|k| ratio(k, 2)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]
    #[test]
    fn collinearity_matches_minors(
        xs in proptest::collection::vec(grid_point(3), 2..4),
        z in grid_point(3),
    ) {
        let mut pool: Vec<Vector> = xs.into_iter().filter(|x| *x != z).collect();
        pool.sort();
        pool.dedup();
        let expected = (0..pool.len()).any(|i| (i + 1..pool.len()).any(|j| collinear_by_minors(&pool[i], &pool[j], &z)));
        let got = check_collinear(&pool, &z).unwrap();
        prop_assert_eq!(got.is_some(), expected);
        if let Some(line) = got {
            prop_assert!(line.contains(&z));
        }
    }
}
