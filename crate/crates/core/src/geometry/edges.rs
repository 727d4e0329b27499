use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{for_each_subset, structural, vertex_candidates, Edge, EdgeSpace, Polytope};
use crate::error::{Error, Result};
use crate::linalg::{self, Vector};
use crate::lp::{region_status, RegionStatus};
use crate::rational::Rational;

/// Exact edge set of a bounded polytope whose vertices are all simple
/// (each is tight for exactly `d` constraints).
///
/// Every rank-`(d-1)` subset of constraints defines a line; the line is
/// clipped against the polytope and kept when the clip has positive length.
pub fn enumerate_edges(p: &Polytope) -> Result<Vec<Edge>> {
    match region_status(p) {
        RegionStatus::Empty => return Err(Error::Infeasible("polytope is empty".into())),
        RegionStatus::Unbounded => return Err(structural("polytope is unbounded")),
        RegionStatus::Bounded => {}
    }
    let d = p.dim();
    for v in vertex_candidates(p) {
        if v.binding.len() != d {
            return Err(structural(format!(
                "simple-vertex assumption violated: vertex {} binds {} constraints, expected {d}",
                v.point,
                v.binding.len()
            )));
        }
    }
    let hs = p.halfspaces();
    let mut edges: BTreeMap<EdgeSpace, Edge> = BTreeMap::new();
    let mut failure = None;
    for_each_subset(hs.len(), d - 1, |rows| {
        if failure.is_some() {
            return;
        }
        let Some(space) = line_of(p, rows) else { return };
        if edges.contains_key(&space) {
            return;
        }
        match clip(p, &space) {
            Ok(Some((lo, hi))) if lo < hi => {
                edges.insert(space.clone(), Edge { space, lo, hi });
            }
            Ok(_) => {}
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(edges.into_values().collect())
}

/// The line where the given rows are all tight, if they have rank `d - 1`.
pub(crate) fn line_of(p: &Polytope, rows: &[usize]) -> Option<EdgeSpace> {
    let d = p.dim();
    let hs = p.halfspaces();
    let normals: Vec<Vector> = rows.iter().map(|&i| hs[i].normal.clone()).collect();
    if linalg::rank(&normals) != d - 1 {
        return None;
    }
    let dir = linalg::nullspace(&normals, d).into_iter().next()?;
    // Adding `dir . x = 0` makes the system square and picks the base point
    // orthogonal to the direction.
    let mut a = normals;
    a.push(dir.clone());
    let mut b: Vec<Rational> = rows.iter().map(|&i| hs[i].offset.clone()).collect();
    b.push(Rational::zero());
    let base = linalg::solve(&a, &b)?;
    EdgeSpace::new(&base, &dir).ok()
}

/// Parameter interval of `space ∩ p`, or `None` when empty.
pub(crate) fn clip(p: &Polytope, space: &EdgeSpace) -> Result<Option<(Rational, Rational)>> {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for h in p.halfspaces() {
        let rate = h.normal.dot(&space.direction);
        let gap = &h.offset - h.normal.dot(&space.base);
        if rate.is_zero() {
            if gap.is_negative() {
                return Ok(None);
            }
            continue;
        }
        let t = gap / &rate;
        if rate.is_positive() {
            if hi.as_ref().map_or(true, |h| t < *h) {
                hi = Some(t);
            }
        } else if lo.as_ref().map_or(true, |l| t > *l) {
            lo = Some(t);
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo <= hi).then_some((lo, hi))),
        _ => Err(structural(format!("line {space} is unbounded in the polytope"))),
    }
}
