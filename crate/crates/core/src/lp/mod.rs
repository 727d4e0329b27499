//! Vertex-optimal LP solving, hull membership and hull optimization.
//!
//! [`solve_vertex_lp`] is the reference solver: it scans the exact vertex set,
//! which is exponential in `m` but trustworthy at small sizes. The simplex in
//! [`simplex`] answers feasibility and boundedness questions and powers the
//! hull LPs.

mod hull;
pub mod simplex;

pub use hull::{hull_membership, maximize_over_hull, HullOptimum};
pub use simplex::{maximize_free, FreeOutcome, Outcome, Relation, StandardLp};

use alloc::vec::Vec;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::geometry::{structural, vertex_candidates, Polytope};
use crate::linalg::{self, Vector};
use crate::rational::{self, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpProblem {
    pub polytope: Polytope,
    pub objective: Vector,
}

impl LpProblem {
    pub fn solve(&self) -> Result<LpSolution> {
        solve_vertex_lp(&self.polytope, &self.objective)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub point: Vector,
    #[serde(with = "rational::serde_rational")]
    pub value: Rational,
    pub binding: Vec<usize>,
    /// No other vertex attains `value`.
    pub unique: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionStatus {
    Empty,
    Unbounded,
    Bounded,
}

/// Classifies `{x : A x <= b}`. The region is bounded exactly when the rows
/// of `A` positively span `R^d`: full rank plus a strictly positive
/// combination summing to zero.
pub fn region_status(p: &Polytope) -> RegionStatus {
    let d = p.dim();
    let normals = p.normals();
    let offsets: Vec<Rational> = p.halfspaces().iter().map(|h| h.offset.clone()).collect();
    if !maximize_free(&normals, &offsets, &Vector::zeros(d)).is_feasible() {
        return RegionStatus::Empty;
    }
    if positively_spanning(&normals, d) {
        RegionStatus::Bounded
    } else {
        RegionStatus::Unbounded
    }
}

pub(crate) fn positively_spanning(normals: &[Vector], d: usize) -> bool {
    if linalg::rank(normals) < d {
        return false;
    }
    let m = normals.len();
    let mut lp = StandardLp::new(m);
    for j in 0..d {
        lp.push(normals.iter().map(|a| a[j].clone()).collect(), Relation::Eq, Rational::zero());
    }
    for i in 0..m {
        let mut row = alloc::vec![Rational::zero(); m];
        row[i] = Rational::one();
        lp.push(row, Relation::Ge, Rational::one());
    }
    lp.maximize().is_feasible()
}

impl FreeOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, FreeOutcome::Infeasible)
    }
}

/// Exact test of `a · x <= b` for every row.
pub fn contains(p: &Polytope, x: &Vector) -> bool {
    p.contains(x)
}

/// Maximizes `c` over a bounded, nonempty polytope and returns a vertex.
/// Ties go to the lexicographically smallest maximizer.
pub fn solve_vertex_lp(p: &Polytope, c: &Vector) -> Result<LpSolution> {
    check_dim(p.dim(), c.dim())?;
    match region_status(p) {
        RegionStatus::Empty => return Err(Error::Infeasible("feasible region is empty".into())),
        RegionStatus::Unbounded => return Err(structural("feasible region is unbounded")),
        RegionStatus::Bounded => {}
    }
    solve_bounded_vertex_lp(p, c)
}

/// `solve_vertex_lp` for a polytope already known to be bounded, such as a
/// validated polytope cut by one more halfspace. Skips the boundedness test;
/// an empty region has no vertices and is reported as infeasible.
pub fn solve_bounded_vertex_lp(p: &Polytope, c: &Vector) -> Result<LpSolution> {
    check_dim(p.dim(), c.dim())?;
    let verts = vertex_candidates(p);
    best_vertex(verts.into_iter().map(|v| (v.point, v.binding)), c)
        .ok_or_else(|| Error::Infeasible("no vertex found".into()))
}

/// Argmax of `c` over candidate vertices, sorted or not; the
/// lexicographically smallest point wins ties.
pub(crate) fn best_vertex(
    verts: impl IntoIterator<Item = (Vector, Vec<usize>)>,
    c: &Vector,
) -> Option<LpSolution> {
    let mut best: Option<LpSolution> = None;
    for (x, binding) in verts {
        let v = c.dot(&x);
        match &mut best {
            None => best = Some(LpSolution { point: x, value: v, binding, unique: true }),
            Some(b) => {
                if v > b.value {
                    *b = LpSolution { point: x, value: v, binding, unique: true };
                } else if v == b.value {
                    b.unique = false;
                    if x < b.point {
                        b.point = x;
                        b.binding = binding;
                    }
                }
            }
        }
    }
    best
}
