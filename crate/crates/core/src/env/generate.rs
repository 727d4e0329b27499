//! Random instances that satisfy every structural assumption.
//!
//! A simplex with vertices on a coarse grid is truncated at random vertices
//! by hyperplanes through points of the incident edges. The cut points sit at
//! quarter marks of edges between grid points, so each cut costs at most two
//! bits of vertex precision; the simplex grid leaves room for that. Every
//! candidate is checked with `validate_assumptions` before it is returned.

use alloc::vec::Vec;

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid_uniform;
use super::known_objective::{Instance, KnownObjectiveEnv};
use crate::error::{Error, Result};
use crate::geometry::{enumerate_edges, enumerate_vertices, validate_assumptions, Halfspace, Polytope};
use crate::linalg::{self, Vector};
use crate::lp::solve_vertex_lp;
use crate::rational::{self, Rational};

pub const GENERATOR_ATTEMPTS: usize = 10_000;

/// Hyperplane through `d` affinely independent points, oriented so `inside`
/// is strictly on the `<=` side. Integer primitive normal.
fn facet_through(points: &[&Vector], inside: &Vector) -> Option<Halfspace> {
    let base = points[0];
    let diffs: Vec<Vector> = points[1..].iter().map(|p| p.sub(base)).collect();
    let null = linalg::nullspace(&diffs, base.dim());
    if null.len() != 1 {
        return None;
    }
    let n = linalg::primitive_integer(&null[0]);
    let off = n.dot(base);
    let side = n.dot(inside) - &off;
    if side.is_zero() {
        return None;
    }
    if side.is_positive() {
        Halfspace::new(n.neg(), -off).ok()
    } else {
        Halfspace::new(n, off).ok()
    }
}

fn random_simplex(rng: &mut ChaCha8Rng, d: usize, bits: u32) -> Option<Polytope> {
    let one = Rational::from_integer(1.into());
    let verts: Vec<Vector> = (0..=d)
        .map(|_| Vector::new((0..d).map(|_| grid_uniform(rng, &-one.clone(), &one, bits)).collect()))
        .collect();
    let diffs: Vec<Vector> = verts[1..].iter().map(|v| v.sub(&verts[0])).collect();
    if linalg::det(&diffs).is_zero() {
        return None;
    }
    let mut hs = Vec::with_capacity(d + 1);
    for i in 0..=d {
        let others: Vec<&Vector> = (0..=d).filter(|&j| j != i).map(|j| &verts[j]).collect();
        hs.push(facet_through(&others, &verts[i])?);
    }
    Polytope::new(d, hs).ok()
}

/// Cuts off one vertex through points at quarter marks of its edges.
fn truncate(rng: &mut ChaCha8Rng, p: &Polytope) -> Option<Polytope> {
    let verts = enumerate_vertices(p).ok()?;
    let edges = enumerate_edges(p).ok()?;
    let v = &verts[rng.gen_range(0..verts.len())];
    let mut marks = Vec::new();
    for e in &edges {
        let (a, b) = e.endpoints();
        let u = if a == *v {
            b
        } else if b == *v {
            a
        } else {
            continue;
        };
        let t = rational::ratio(rng.gen_range(1..=3), 4);
        marks.push(v.add(&u.sub(v).scale(&t)));
    }
    if marks.len() != p.dim() {
        return None;
    }
    let refs: Vec<&Vector> = marks.iter().collect();
    // Orient using the centroid of the other vertices, which stays inside.
    let rest: Vec<&Vector> = verts.iter().filter(|w| *w != v).collect();
    let mut centroid = Vector::zeros(p.dim());
    for w in &rest {
        centroid = centroid.add(w);
    }
    let centroid = centroid.scale(&rational::ratio(1, rest.len() as i64));
    let cut = facet_through(&refs, &centroid)?;
    if cut.contains(v) {
        return None;
    }
    p.with(&cut).ok()
}

fn random_objective(rng: &mut ChaCha8Rng, d: usize) -> Vector {
    loop {
        let c = Vector::new((0..d).map(|_| rational::int(rng.gen_range(-4..=4))).collect());
        if !c.is_zero() {
            return c;
        }
    }
}

/// A valid instance with `m` constraints in dimension `d`, vertices on the
/// `2^-bits` grid and a unique unconstrained optimum. Deterministic in `seed`.
pub fn generate_instance(seed: u64, d: usize, m: usize, bits: u32) -> Result<KnownObjectiveEnv> {
    if d == 0 || m < d + 1 || bits == 0 {
        return Err(Error::Config(format!("cannot build a polytope with d={d}, m={m}, N={bits}")));
    }
    let cuts = m - d - 1;
    let coarse = bits.saturating_sub(2 * cuts as u32).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..GENERATOR_ATTEMPTS {
        let Some(mut p) = random_simplex(&mut rng, d, coarse) else {
            continue;
        };
        let mut ok = true;
        for _ in 0..cuts {
            match truncate(&mut rng, &p) {
                Some(q) => p = q,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !validate_assumptions(&p, bits).all_passed() {
            continue;
        }
        let c = random_objective(&mut rng, d);
        if !solve_vertex_lp(&p, &c).map(|s| s.unique).unwrap_or(false) {
            continue;
        }
        return KnownObjectiveEnv::new(Instance { polytope: p, c, bits });
    }
    Err(Error::Config(format!(
        "no valid instance with d={d}, m={m}, N={bits} after {GENERATOR_ATTEMPTS} attempts; try more bits or fewer constraints"
    )))
}

/// `count` validated polytopes drawn with consecutive seeds from `seed`.
pub fn polytope_pool(count: usize, d: usize, m: usize, bits: u32, seed: u64) -> Result<Vec<Polytope>> {
    (0..count as u64)
        .map(|i| generate_instance(seed.wrapping_add(i), d, m, bits).map(|e| e.hidden().clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_in_seed() {
        let a = generate_instance(11, 3, 5, 4).unwrap();
        let b = generate_instance(11, 3, 5, 4).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.hidden().m(), 5);
    }

    #[test]
    fn emitted_instances_validate() {
        for seed in 0..10 {
            for (d, m) in [(2, 3), (2, 4), (2, 5), (3, 4), (3, 6)] {
                let e = generate_instance(seed, d, m, 4).unwrap();
                assert!(validate_assumptions(e.hidden(), 4).all_passed());
                assert_eq!(e.hidden().m(), m);
            }
        }
    }

    #[test]
    fn rejects_too_few_constraints() {
        assert!(matches!(generate_instance(0, 3, 3, 4), Err(Error::Config(_))));
    }
}
