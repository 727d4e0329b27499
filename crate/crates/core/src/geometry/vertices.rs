use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{for_each_subset, structural, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::lp::{region_status, RegionStatus};
use crate::rational::Rational;

/// A vertex and every constraint tight at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexInfo {
    pub point: Vector,
    pub binding: Vec<usize>,
}

/// Every feasible solution of a nonsingular `d`-subset of constraint
/// hyperplanes, merged by exact equality and sorted. Makes no boundedness
/// check, so an unbounded region simply yields its vertices (if any).
pub fn vertex_candidates(p: &Polytope) -> Vec<VertexInfo> {
    let d = p.dim();
    let hs = p.halfspaces();
    let mut found: BTreeMap<Vector, ()> = BTreeMap::new();
    for_each_subset(hs.len(), d, |rows| {
        let a: Vec<Vector> = rows.iter().map(|&i| hs[i].normal.clone()).collect();
        let b: Vec<Rational> = rows.iter().map(|&i| hs[i].offset.clone()).collect();
        if let Some(x) = linalg::solve(&a, &b) {
            if !found.contains_key(&x) && p.contains(&x) {
                found.insert(x, ());
            }
        }
    });
    found
        .into_keys()
        .map(|x| {
            let binding = p.binding(&x);
            VertexInfo { point: x, binding }
        })
        .collect()
}

/// Exact vertex set of a bounded, nonempty polytope, sorted lexicographically.
pub fn enumerate_vertices(p: &Polytope) -> Result<Vec<Vector>> {
    match region_status(p) {
        RegionStatus::Empty => Err(Error::Infeasible("polytope is empty".into())),
        RegionStatus::Unbounded => Err(structural("polytope is unbounded")),
        RegionStatus::Bounded => Ok(vertex_candidates(p).into_iter().map(|v| v.point).collect()),
    }
}
